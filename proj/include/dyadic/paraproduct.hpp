#pragma once

#include <random>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "dyadic/grid.hpp"
#include "dyadic/matrix.hpp"
#include "dyadic/symbol.hpp"

// Paraproducts on the real-line side: grid application, the composition
// Gram matrix in both its ground-truth (grid) and closed (chain-walking)
// forms, and spectral-norm estimation.
//
// All Gram assemblies are linear in the symbol b as well as in d: the
// composition P_b^{(0,1)} P_d^{(0,1)} applied to a Haar vector produces the
// coefficient b_I itself, so the closed form carries b_I unconjugated. The
// adjoint of P_b^{(0,1)} is P_{conj(b)}^{(1,0)}.

namespace dyadic {

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// sum over tree nodes I of b_I <f, h_I^beta> h_I^alpha, computed exactly on
// the grid in O(N log N) via the level sums.
inline GridFunction apply_paraproduct(const Symbol& b, int alpha, int beta, const GridFunction& f) {
    const Tree& tree = b.tree();
    const auto D = tree.depth();
    if (alpha < 0 || alpha > 1 || beta < 0 || beta > 1)
        throw std::invalid_argument("apply_paraproduct: index must lie in {0,1}^2");
    if (f.depth != D || f.samples.size() != grid_resolution(D))
        throw std::invalid_argument("apply_paraproduct: grid resolution does not match tree depth");

    const LevelSums sums = node_integrals(f);
    std::vector<Complex> cur(1);
    for (std::uint32_t l = 0; l <= D; ++l) {
        std::vector<Complex> next(std::size_t{1} << (l + 1));
        for (std::uint64_t k = 0; k < (std::uint64_t{1} << l); ++k) {
            const DyadicIndex I{l, k};
            const double len = interval_length(I);
            const Complex coeff = haar_coefficient(sums, I, beta);
            const Complex t = b.at(I) * coeff;
            const Complex base = cur[static_cast<std::size_t>(k)];
            if (alpha == 1) {
                const Complex add = t / len;
                next[2 * k] = base + add;
                next[2 * k + 1] = base + add;
            } else {
                const Complex add = t / std::sqrt(len);
                next[2 * k] = base - add;
                next[2 * k + 1] = base + add;
            }
        }
        cur.swap(next);
    }
    return {D, std::move(cur)};
}

// Synthesis sum of coeffs_J h_J over J inside `within`.
inline GridFunction haar_expansion_grid(const Symbol& coeffs, DyadicIndex within) {
    const Tree& tree = coeffs.tree();
    const auto D = tree.depth();
    std::vector<Complex> cur(1);
    for (std::uint32_t l = 0; l <= D; ++l) {
        std::vector<Complex> next(std::size_t{1} << (l + 1));
        for (std::uint64_t k = 0; k < (std::uint64_t{1} << l); ++k) {
            const DyadicIndex I{l, k};
            const Complex t = contains(within, I) ? coeffs.at(I) : Complex{};
            const Complex add = t / std::sqrt(interval_length(I));
            const Complex base = cur[static_cast<std::size_t>(k)];
            next[2 * k] = base - add;
            next[2 * k + 1] = base + add;
        }
        cur.swap(next);
    }
    return {D, std::move(cur)};
}

inline GridFunction haar_expansion_grid(const Symbol& coeffs) {
    return haar_expansion_grid(coeffs, DyadicIndex{0, 0});
}

// Ground-truth oracle: applies the two paraproducts to each Haar vector on
// the grid and reads the matrix off with grid inner products.
inline OperatorMatrix composition_gram_direct(const Symbol& b, const Symbol& d) {
    if (!(b.tree() == d.tree())) throw std::invalid_argument("composition_gram_direct: depth mismatch");
    const Tree& tree = b.tree();
    OperatorMatrix g(tree.depth());
    for (std::size_t j = 0; j < tree.node_count(); ++j) {
        const GridFunction hj = haar_grid(tree.node(j), tree.depth(), 0);
        const GridFunction once = apply_paraproduct(d, 0, 1, hj);
        const GridFunction twice = apply_paraproduct(b, 0, 1, once);
        const LevelSums sums = node_integrals(twice);
        for (std::size_t i = 0; i < tree.node_count(); ++i)
            g(i, j) = haar_coefficient(sums, tree.node(i), 0);
    }
    return g;
}

// Closed form: G_{I,J} = sum over chains I strictly inside K strictly inside
// J of d_K b_I h_J(K) h_K(I); every other entry is zero. O(n D^2) by walking
// ancestor chains.
inline OperatorMatrix composition_gram_closed(const Symbol& b, const Symbol& d) {
    if (!(b.tree() == d.tree())) throw std::invalid_argument("composition_gram_closed: depth mismatch");
    const Tree& tree = b.tree();
    OperatorMatrix g(tree.depth());
    for (std::size_t i = 0; i < tree.node_count(); ++i) {
        const DyadicIndex I = tree.node(i);
        DyadicIndex K = I;
        while (K.level > 0) {
            K = parent(K);
            const Complex chain = d.at(K) * b[i] * haar_value(K, I);
            DyadicIndex J = K;
            while (J.level > 0) {
                J = parent(J);
                g(i, tree.id(J)) += chain * haar_value(J, K);
            }
        }
    }
    return g;
}

inline double operator_norm_dense_svd(const OperatorMatrix& m) {
    const auto n = static_cast<Eigen::Index>(m.dim());
    Eigen::MatrixXcd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
    return svd.singularValues()(0);
}

struct PowerIterationOptions {
    double tol = 1e-12;
    int max_iter = 20000;
    std::uint64_t seed = 0x9e3779b97f4a7c15ull;
};

// Power iteration on M*M with a seeded random start; stops when successive
// Rayleigh-quotient square roots agree to the relative tolerance, throws
// after max_iter.
inline double operator_norm_power(const OperatorMatrix& m, PowerIterationOptions opt = {}) {
    if (!(opt.tol > 0.0)) throw std::invalid_argument("operator_norm_power: tol must be positive");
    const std::size_t n = m.dim();
    if (max_abs(m) == 0.0) return 0.0;

    std::mt19937_64 eng(opt.seed);
    const auto unit = [&eng]() { return static_cast<double>(eng() >> 11) * 0x1.0p-53 - 0.5; };
    std::vector<Complex> v(n);
    double nv = 0.0;
    for (auto& x : v) {
        x = {unit(), unit()};
        nv += std::norm(x);
    }
    nv = std::sqrt(nv);
    for (auto& x : v) x /= nv;

    std::vector<Complex> w(n), z(n);
    double sigma_prev = -1.0;
    for (int it = 0; it < opt.max_iter; ++it) {
        double nw = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            Complex acc{};
            for (std::size_t j = 0; j < n; ++j) acc += m(i, j) * v[j];
            w[i] = acc;
            nw += std::norm(acc);
        }
        nw = std::sqrt(nw);
        if (nw == 0.0) return 0.0;
        const double sigma = nw;
        if (sigma_prev >= 0.0 && std::abs(sigma - sigma_prev) <= opt.tol * sigma) return sigma;
        sigma_prev = sigma;
        double nz = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            Complex acc{};
            for (std::size_t i = 0; i < n; ++i) acc += std::conj(m(i, j)) * w[i];
            z[j] = acc;
            nz += std::norm(acc);
        }
        nz = std::sqrt(nz);
        if (nz == 0.0) return sigma;
        for (std::size_t j = 0; j < n; ++j) v[j] = z[j] / nz;
    }
    throw ConvergenceError("operator_norm_power: no convergence after " + std::to_string(opt.max_iter) +
                           " iterations");
}

// Dense SVD up to dimension 2000; power iteration beyond.
inline double operator_norm(const OperatorMatrix& m) {
    if (m.dim() <= 2000) return operator_norm_dense_svd(m);
    return operator_norm_power(m);
}

}  // namespace dyadic

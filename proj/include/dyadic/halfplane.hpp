#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dyadic/matrix.hpp"
#include "dyadic/symbol.hpp"

// Upper-half-plane side: functions constant on Carleson tiles, the rank-one
// sum U, the diagonal multipliers M_a^alpha, the canonical weights, the
// weighted orthonormal bases, and the forward/backward testing quantities.
//
// Normalization choices, fixed once for the whole module:
//  - the unweighted pairing is <f,g> = (1/2) sum f_I conj(g_I) |I|^2, which
//    matches area integration over the tiles;
//  - inside U the tile vectors are normalized by their exact norm |I|/sqrt(2)
//    while the signed cubes are normalized by the constant |J|/2. With this
//    pair the tile-basis Gram of the transplanted operator equals exactly
//    twice the Haar-basis Gram of the composition, and U 1_{T(J)} equals
//    sqrt(2) 1_{Q+-(J)};
//  - the nu-weighted basis H_J carries a sqrt(2) factor relative to writing
//    the defining formula with the inclusive mass table: equivalently, it is
//    the formula evaluated with the half-sized cube masses that the weight
//    nu actually assigns, and it is what makes <H_J, H_J>_nu = 1 exact.

namespace dyadic {

struct DegenerateWeightError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TileCoefficients {
    std::uint32_t depth = 0;
    std::vector<Complex> values;  // canonical node order; value on T(I)

    static TileCoefficients zero(std::uint32_t depth) {
        return {depth, std::vector<Complex>(Tree(depth).node_count())};
    }
};

struct Weight {
    std::uint32_t depth = 0;
    std::vector<double> sigma;  // canonical node order; value on T(I)
};

inline double tile_norm(DyadicIndex i) { return interval_length(i) / std::sqrt(2.0); }

// Fixed signed-cube normalizer used by U and by the normalized signed cubes
// throughout this module.
inline double signed_cube_normalizer(DyadicIndex i) { return interval_length(i) / 2.0; }

inline Complex unweighted_inner(const TileCoefficients& f, const TileCoefficients& g) {
    if (f.depth != g.depth) throw std::invalid_argument("unweighted_inner: depth mismatch");
    const Tree tree(f.depth);
    Complex acc{};
    for (std::size_t id = 0; id < tree.node_count(); ++id) {
        const double len = interval_length(tree.node(id));
        acc += 0.5 * f.values[id] * std::conj(g.values[id]) * len * len;
    }
    return acc;
}

inline Complex weighted_inner(const TileCoefficients& f, const TileCoefficients& g, const Weight& w) {
    if (f.depth != g.depth || f.depth != w.depth)
        throw std::invalid_argument("weighted_inner: depth mismatch");
    const Tree tree(f.depth);
    Complex acc{};
    for (std::size_t id = 0; id < tree.node_count(); ++id) {
        const double len = interval_length(tree.node(id));
        acc += 0.5 * f.values[id] * std::conj(g.values[id]) * w.sigma[id] * len * len;
    }
    return acc;
}

inline double unweighted_norm(const TileCoefficients& f) {
    return std::sqrt(unweighted_inner(f, f).real());
}

inline double weighted_norm(const TileCoefficients& f, const Weight& w) {
    return std::sqrt(weighted_inner(f, f, w).real());
}

inline Weight mu_weight(const Tree& tree) {
    Weight w{tree.depth(), std::vector<double>(tree.node_count())};
    for (std::size_t id = 0; id < tree.node_count(); ++id) w.sigma[id] = interval_length(tree.node(id));
    return w;
}

inline Weight nu_weight(const Symbol& b) {
    const Tree& tree = b.tree();
    Weight w{tree.depth(), std::vector<double>(tree.node_count())};
    for (std::size_t id = 0; id < tree.node_count(); ++id) {
        const double len = interval_length(tree.node(id));
        w.sigma[id] = std::norm(b[id]) / (len * len);
    }
    return w;
}

inline Weight w_weight(const Tree& tree) {
    Weight w{tree.depth(), std::vector<double>(tree.node_count())};
    for (std::size_t id = 0; id < tree.node_count(); ++id) w.sigma[id] = 1.0 / interval_length(tree.node(id));
    return w;
}

inline TileCoefficients tile_indicator(const Tree& tree, DyadicIndex i) {
    if (!tree.member(i)) throw std::invalid_argument("tile_indicator: node outside tree");
    TileCoefficients f = TileCoefficients::zero(tree.depth());
    f.values[tree.id(i)] = 1.0;
    return f;
}

inline TileCoefficients cube_indicator(const Tree& tree, DyadicIndex i) {
    if (!tree.member(i)) throw std::invalid_argument("cube_indicator: node outside tree");
    TileCoefficients f = TileCoefficients::zero(tree.depth());
    for (std::size_t id = 0; id < tree.node_count(); ++id)
        if (contains(i, tree.node(id))) f.values[id] = 1.0;
    return f;
}

// +1 on tiles under the right child, -1 under the left, 0 on T(I) itself;
// identically zero for a leaf of the finite tree.
inline TileCoefficients signed_cube_indicator(const Tree& tree, DyadicIndex i) {
    if (!tree.member(i)) throw std::invalid_argument("signed_cube_indicator: node outside tree");
    TileCoefficients f = TileCoefficients::zero(tree.depth());
    for (std::size_t id = 0; id < tree.node_count(); ++id) {
        const DyadicIndex l = tree.node(id);
        if (l == i || !contains(i, l)) continue;
        f.values[id] = static_cast<double>(delta(i, l));
    }
    return f;
}

// Tilewise multiplier: (M_a^alpha f)_I = a_I |I|^alpha f_I.
inline TileCoefficients apply_M(const Symbol& a, double alpha, const TileCoefficients& f) {
    if (a.tree().depth() != f.depth) throw std::invalid_argument("apply_M: depth mismatch");
    TileCoefficients out = f;
    for (std::size_t id = 0; id < out.values.size(); ++id)
        out.values[id] *= a[id] * std::pow(interval_length(a.tree().node(id)), alpha);
    return out;
}

// U f = sum_J <f, tile~_J> cube~_J. With the module normalizers this reduces
// to sqrt(2) sum_J f_J 1_{Q+-(J)}, accumulated in one sweep down the tree.
inline TileCoefficients apply_U(const TileCoefficients& f) {
    const Tree tree(f.depth);
    TileCoefficients out = TileCoefficients::zero(f.depth);
    // acc(L) = sum over strict ancestors J of L of delta(J,L) f_J.
    std::vector<Complex> acc(tree.node_count());
    for (std::size_t id = 0; id < tree.node_count(); ++id) {
        const DyadicIndex I = tree.node(id);
        if (I.level == tree.depth()) continue;
        const Complex here = acc[id] + f.values[id];
        const Complex mhere = acc[id] - f.values[id];
        acc[tree.id(left_child(I))] = mhere;
        acc[tree.id(right_child(I))] = here;
    }
    const double root2 = std::sqrt(2.0);
    for (std::size_t id = 0; id < tree.node_count(); ++id) out.values[id] = root2 * acc[id];
    return out;
}

// Adjoint of U under the unweighted pairing, assembled from the transposed
// tensor sum: U* f = sum_J <f, cube~_J> tile~_J.
inline TileCoefficients apply_U_star(const TileCoefficients& f) {
    const Tree tree(f.depth);
    TileCoefficients out = TileCoefficients::zero(f.depth);
    std::vector<Complex> subtree(tree.node_count());
    for (std::size_t id = tree.node_count(); id-- > 0;) {
        const DyadicIndex I = tree.node(id);
        const double len = interval_length(I);
        Complex v = f.values[id] * len * len;
        if (I.level < tree.depth()) {
            v += subtree[tree.id(left_child(I))] + subtree[tree.id(right_child(I))];
        }
        subtree[id] = v;
    }
    const double root2 = std::sqrt(2.0);
    for (std::size_t id = 0; id < tree.node_count(); ++id) {
        const DyadicIndex I = tree.node(id);
        if (I.level == tree.depth()) continue;
        const double len = interval_length(I);
        out.values[id] = root2 *
                         (subtree[tree.id(right_child(I))] - subtree[tree.id(left_child(I))]) /
                         (len * len);
    }
    return out;
}

// Tile-basis Gram of the transplanted five-factor operator, entry by entry:
// 2 sum over chains I strictly inside K strictly inside J of
// d_K b_I delta(J,K) delta(K,I) / (sqrt|J| sqrt|K|).
inline OperatorMatrix t_gram_closed(const Symbol& b, const Symbol& d) {
    if (!(b.tree() == d.tree())) throw std::invalid_argument("t_gram_closed: depth mismatch");
    const Tree& tree = b.tree();
    OperatorMatrix g(tree.depth());
    for (std::size_t i = 0; i < tree.node_count(); ++i) {
        const DyadicIndex I = tree.node(i);
        DyadicIndex K = I;
        while (K.level > 0) {
            K = parent(K);
            const Complex chain =
                2.0 * d.at(K) * b[i] * static_cast<double>(delta(K, I)) / std::sqrt(interval_length(K));
            DyadicIndex J = K;
            while (J.level > 0) {
                J = parent(J);
                g(i, tree.id(J)) +=
                    chain * static_cast<double>(delta(J, K)) / std::sqrt(interval_length(J));
            }
        }
    }
    return g;
}

// Same Gram by operator application: the five factors applied to each
// normalized tile, read off against normalized tiles.
inline OperatorMatrix t_gram_direct(const Symbol& b, const Symbol& d) {
    if (!(b.tree() == d.tree())) throw std::invalid_argument("t_gram_direct: depth mismatch");
    const Tree& tree = b.tree();
    const Symbol ones = make_constant(tree, 1.0);
    OperatorMatrix g(tree.depth());
    for (std::size_t j = 0; j < tree.node_count(); ++j) {
        const DyadicIndex J = tree.node(j);
        TileCoefficients v = TileCoefficients::zero(tree.depth());
        v.values[j] = 1.0 / tile_norm(J);
        v = apply_M(ones, 0.5, v);
        v = apply_U(v);
        v = apply_M(d, -0.5, v);
        v = apply_U(v);
        v = apply_M(b, -1.0, v);
        for (std::size_t i = 0; i < tree.node_count(); ++i) {
            const DyadicIndex I = tree.node(i);
            g(i, j) = v.values[i] * interval_length(I) * interval_length(I) * 0.5 / tile_norm(I);
        }
    }
    return g;
}

// Normalized tile scaled by 1/sqrt(mu_I), mu_I = |I|; unit vector in the
// mu-weighted pairing.
inline TileCoefficients weighted_basis_mu(const Tree& tree, DyadicIndex i) {
    if (!tree.member(i)) throw std::invalid_argument("weighted_basis_mu: node outside tree");
    TileCoefficients f = TileCoefficients::zero(tree.depth());
    const double len = interval_length(i);
    f.values[tree.id(i)] = std::sqrt(2.0) / (len * std::sqrt(len));
    return f;
}

// H_J: constant -c/nu(J+) on tiles under the right child and +c/nu(J-) on
// tiles under the left, c = sqrt(2) nu~(J); unit vector in the nu-weighted
// pairing. Requires both child masses positive.
inline TileCoefficients weighted_basis_nu(const Tree& tree, const NuTable& table, DyadicIndex j) {
    if (!tree.member(j)) throw std::invalid_argument("weighted_basis_nu: node outside tree");
    const double np = table.nu_at(tree, right_child(j));
    const double nm = table.nu_at(tree, left_child(j));
    if (np <= 0.0 || nm <= 0.0)
        throw DegenerateWeightError("weighted_basis_nu: vanishing child mass at " + to_string(j));
    const double c = std::sqrt(2.0) * table.nu_tilde[tree.id(j)];
    TileCoefficients f = TileCoefficients::zero(tree.depth());
    for (std::size_t id = 0; id < tree.node_count(); ++id) {
        const DyadicIndex l = tree.node(id);
        if (l == j || !contains(j, l)) continue;
        f.values[id] = delta(j, l) > 0 ? -c / np : c / nm;
    }
    return f;
}

inline TileCoefficients weighted_basis_nu(const Symbol& b, DyadicIndex j) {
    return weighted_basis_nu(b.tree(), nu_table(b), j);
}

// <cube~_{+-}(K), H_J>_nu computed directly from tile coefficients. Zero
// whenever J is strictly inside K or the two are disjoint.
inline Complex inner_qpm_hnu(const Symbol& b, DyadicIndex k, DyadicIndex j) {
    const Tree& tree = b.tree();
    const NuTable table = nu_table(b);
    TileCoefficients q = signed_cube_indicator(tree, k);
    const double n = signed_cube_normalizer(k);
    for (auto& v : q.values) v /= n;
    const TileCoefficients h = weighted_basis_nu(tree, table, j);
    return weighted_inner(q, h, nu_weight(b));
}

struct ForwardTesting {
    TileCoefficients vector;
    double nu_norm = 0.0;
};

// U M_d^{-1/2} U applied to mu 1_{T(I)} by operator application, plus the
// nu-weighted norm of the result.
inline ForwardTesting forward_testing(const Symbol& b, const Symbol& d, DyadicIndex i) {
    if (!(b.tree() == d.tree())) throw std::invalid_argument("forward_testing: depth mismatch");
    const Tree& tree = b.tree();
    TileCoefficients v = TileCoefficients::zero(tree.depth());
    v.values[tree.id(i)] = interval_length(i);  // mu 1_{T(I)}, tile value mu_I = |I|
    v = apply_U(v);
    v = apply_M(d, -0.5, v);
    v = apply_U(v);
    return {v, weighted_norm(v, nu_weight(b))};
}

// Closed-form expansion of the same vector: mu_I sum over K strictly inside
// I of delta(I,K) d_K sqrt|K| cube~_{+-}(K), expanded to raw coefficients.
// The leading constant is 1 under this module's normalizers.
inline TileCoefficients forward_testing_closed_form(const Symbol& d, DyadicIndex i) {
    const Tree& tree = d.tree();
    TileCoefficients out = TileCoefficients::zero(tree.depth());
    const double mu_i = interval_length(i);
    for (std::size_t id = 0; id < tree.node_count(); ++id) {
        const DyadicIndex l = tree.node(id);
        if (!contains(i, l) || l == i) continue;
        // contributions of every K with L strictly inside K strictly inside I
        DyadicIndex k = l;
        Complex acc{};
        while (k.level > i.level + 1) {
            const DyadicIndex kp = parent(k);
            const int sign_in_k = delta(kp, l);
            acc += static_cast<double>(delta(i, kp)) * d.at(kp) * std::sqrt(interval_length(kp)) *
                   static_cast<double>(sign_in_k) / signed_cube_normalizer(kp);
            k = kp;
        }
        out.values[id] = mu_i * acc;
    }
    return out;
}

// mu-norm squared of the adjoint tested on Q(I), restricted to J inside I:
// sum over J inside I of (1/|J|) | sum over K strictly inside J of
// delta(J,K) |K|^{-1/2} conj(d_K) (nu(K+) - nu(K-)) |^2.
inline double backward_testing(const Symbol& b, const Symbol& d, DyadicIndex i) {
    if (!(b.tree() == d.tree())) throw std::invalid_argument("backward_testing: depth mismatch");
    const Tree& tree = b.tree();
    const NuTable table = nu_table(b);
    if (!(table.nu[tree.id(i)] > 0.0))
        throw DegenerateWeightError("backward_testing: nu(I) = 0 at " + to_string(i));

    // subtree sums of conj(d_K)(nu(K+)-nu(K-))/sqrt|K|
    std::vector<Complex> s(tree.node_count());
    for (std::size_t id = tree.node_count(); id-- > 0;) {
        const DyadicIndex k = tree.node(id);
        const double diff = table.nu_at(tree, right_child(k)) - table.nu_at(tree, left_child(k));
        Complex v = std::conj(d[id]) * diff / std::sqrt(interval_length(k));
        if (k.level < tree.depth())
            v += s[tree.id(left_child(k))] + s[tree.id(right_child(k))];
        s[id] = v;
    }
    double total = 0.0;
    for (std::size_t id = 0; id < tree.node_count(); ++id) {
        const DyadicIndex j = tree.node(id);
        if (!contains(i, j)) continue;
        Complex inner{};
        if (j.level < tree.depth())
            inner = s[tree.id(right_child(j))] - s[tree.id(left_child(j))];
        total += std::norm(inner) / interval_length(j);
    }
    return total;
}

}  // namespace dyadic

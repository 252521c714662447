#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dyadic/tree.hpp"

// Symbol sequences b = {b_I} on the finite tree, the cumulative mass tables
// nu / nu~, the dyadic BMO norm, and the symbol generators. Nodes outside
// the tree carry an implicit 0.

namespace dyadic {

class Symbol {
public:
    explicit Symbol(Tree tree) : tree_(tree), values_(tree.node_count()) {}

    const Tree& tree() const { return tree_; }
    std::size_t size() const { return values_.size(); }

    Complex operator[](std::size_t id) const { return values_[id]; }
    Complex& operator[](std::size_t id) { return values_[id]; }

    Complex at(DyadicIndex i) const { return values_[tree_.id(i)]; }
    void set(DyadicIndex i, Complex v) { values_[tree_.id(i)] = v; }

    friend bool operator==(const Symbol&, const Symbol&) = default;

private:
    Tree tree_;
    std::vector<Complex> values_;
};

// nu(I) = sum of |b_J|^2 over J inside I, inclusive of I itself; zero below
// the leaves. nu~(I) = sqrt(nu(I+)nu(I-)/(nu(I+)+nu(I-))) with 0/0 := 0.
struct NuTable {
    std::vector<double> nu;
    std::vector<double> nu_tilde;

    double nu_at(const Tree& tree, DyadicIndex i) const {
        return i.level <= tree.depth() ? nu[tree.id(i)] : 0.0;
    }
};

inline NuTable nu_table(const Symbol& b) {
    const Tree& t = b.tree();
    const auto D = t.depth();
    NuTable out;
    out.nu.resize(t.node_count());
    out.nu_tilde.resize(t.node_count());
    for (int l = static_cast<int>(D); l >= 0; --l) {
        for (std::uint64_t k = 0; k < (std::uint64_t{1} << l); ++k) {
            const DyadicIndex I{static_cast<std::uint32_t>(l), k};
            double v = std::norm(b.at(I));
            if (l < static_cast<int>(D)) v += out.nu[t.id(left_child(I))] + out.nu[t.id(right_child(I))];
            out.nu[t.id(I)] = v;
        }
    }
    for (std::size_t id = 0; id < t.node_count(); ++id) {
        const DyadicIndex I = t.node(id);
        const double np = out.nu_at(t, right_child(I));
        const double nm = out.nu_at(t, left_child(I));
        const double s = np + nm;
        out.nu_tilde[id] = s > 0.0 ? std::sqrt(np * nm / s) : 0.0;
    }
    return out;
}

// sup over tree nodes of sqrt(nu(I)/|I|).
inline double bmo_norm(const Symbol& b, const NuTable& table) {
    const Tree& t = b.tree();
    double best = 0.0;
    for (std::size_t id = 0; id < t.node_count(); ++id) {
        const DyadicIndex I = t.node(id);
        best = std::max(best, table.nu[id] / interval_length(I));
    }
    return std::sqrt(best);
}

inline double bmo_norm(const Symbol& b) { return bmo_norm(b, nu_table(b)); }

enum class Distribution { Normal, Uniform };

inline Symbol make_zero(Tree tree) { return Symbol(tree); }

inline Symbol make_constant(Tree tree, Complex c) {
    Symbol b(tree);
    for (std::size_t id = 0; id < tree.node_count(); ++id) b[id] = c;
    return b;
}

// b_I = sqrt(|I|); the BMO norm of this family grows like sqrt(D+1).
inline Symbol make_log_type(Tree tree) {
    Symbol b(tree);
    for (std::size_t id = 0; id < tree.node_count(); ++id)
        b[id] = std::sqrt(interval_length(tree.node(id)));
    return b;
}

// b_I = |I|^gamma * g_I with g_I drawn from the seeded stream in canonical
// node order; two engine draws per node for either distribution. Normal
// means the standard complex normal E|g|^2 = 1.
inline Symbol make_random(Tree tree, std::uint64_t seed, double gamma,
                          Distribution dist = Distribution::Normal) {
    std::mt19937_64 eng(seed);
    const auto open01 = [&eng]() {  // (0, 1]
        return static_cast<double>((eng() >> 11) + 1) * 0x1.0p-53;
    };
    const auto halfopen01 = [&eng]() {  // [0, 1)
        return static_cast<double>(eng() >> 11) * 0x1.0p-53;
    };
    constexpr double two_pi = 6.283185307179586476925286766559;
    Symbol b(tree);
    for (std::size_t id = 0; id < tree.node_count(); ++id) {
        Complex g;
        if (dist == Distribution::Normal) {
            const double u1 = open01();
            const double u2 = halfopen01();
            const double r = std::sqrt(-std::log(u1));
            g = {r * std::cos(two_pi * u2), r * std::sin(two_pi * u2)};
        } else {
            g = {2.0 * halfopen01() - 1.0, 2.0 * halfopen01() - 1.0};
        }
        b[id] = std::pow(interval_length(tree.node(id)), gamma) * g;
    }
    return b;
}

inline Symbol scale(const Symbol& b, Complex lambda) {
    Symbol out = b;
    for (std::size_t id = 0; id < out.size(); ++id) out[id] *= lambda;
    return out;
}

inline Symbol conjugate(const Symbol& b) {
    Symbol out = b;
    for (std::size_t id = 0; id < out.size(); ++id) out[id] = std::conj(out[id]);
    return out;
}

inline Symbol magnitudes(const Symbol& b) {
    Symbol out = b;
    for (std::size_t id = 0; id < out.size(); ++id) out[id] = std::abs(out[id]);
    return out;
}

inline Symbol pointwise_product(const Symbol& a, const Symbol& b) {
    if (!(a.tree() == b.tree())) throw std::invalid_argument("pointwise_product: depth mismatch");
    Symbol out = a;
    for (std::size_t id = 0; id < out.size(); ++id) out[id] *= b[id];
    return out;
}

// FNV-1a over the depth and the raw bit patterns of every coefficient, in
// canonical node order; stable across runs and platforms.
inline std::string symbol_hash(const Symbol& b) {
    std::uint64_t h = 1469598103934665603ull;
    const auto mix = [&h](std::uint64_t x) {
        for (int i = 0; i < 8; ++i) {
            h ^= (x >> (8 * i)) & 0xffu;
            h *= 1099511628211ull;
        }
    };
    mix(b.tree().depth());
    for (std::size_t id = 0; id < b.size(); ++id) {
        mix(std::bit_cast<std::uint64_t>(b[id].real()));
        mix(std::bit_cast<std::uint64_t>(b[id].imag()));
    }
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

}  // namespace dyadic

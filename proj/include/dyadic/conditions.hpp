#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "dyadic/grid.hpp"
#include "dyadic/halfplane.hpp"
#include "dyadic/paraproduct.hpp"
#include "dyadic/symbol.hpp"

// The three testing constants A, B, C, the auxiliary sums p(J) and q(I),
// the Carleson difference bound, the dyadic maximal and square functions,
// and the per-instance report.
//
// Every division by a vanishing mass follows the 0/0 := 0 rule: sides with
// nu(J+-) = 0 contribute nothing (their numerators vanish identically), and
// nodes with nu(I) = 0 are skipped in condition C.

namespace dyadic {

namespace detail {

// Inclusive subtree sums of u_K = (d_K / sqrt|K|) (nu(K-) - nu(K+)).
inline std::vector<Complex> difference_subtree_sums(const Symbol& d, const NuTable& table) {
    const Tree& tree = d.tree();
    std::vector<Complex> s(tree.node_count());
    for (std::size_t id = tree.node_count(); id-- > 0;) {
        const DyadicIndex k = tree.node(id);
        const double diff = table.nu_at(tree, left_child(k)) - table.nu_at(tree, right_child(k));
        Complex v = d[id] * diff / std::sqrt(interval_length(k));
        if (k.level < tree.depth())
            v += s[tree.id(left_child(k))] + s[tree.id(right_child(k))];
        s[id] = v;
    }
    return s;
}

inline Complex sum_below(const Tree& tree, const std::vector<Complex>& s, DyadicIndex i) {
    return i.level <= tree.depth() ? s[tree.id(i)] : Complex{};
}

}  // namespace detail

inline Complex p_term(const Symbol& b, const Symbol& d, DyadicIndex j) {
    const Tree& tree = b.tree();
    const NuTable table = nu_table(b);
    const auto s = detail::difference_subtree_sums(d, table);
    const double np = table.nu_at(tree, right_child(j));
    const double nm = table.nu_at(tree, left_child(j));
    Complex acc{};
    if (np > 0.0) acc += detail::sum_below(tree, s, right_child(j)) / np;
    if (nm > 0.0) acc -= detail::sum_below(tree, s, left_child(j)) / nm;
    return acc;
}

inline Complex q_term(const Symbol& b, const Symbol& d, DyadicIndex i) {
    const Tree& tree = b.tree();
    const NuTable table = nu_table(b);
    const auto s = detail::difference_subtree_sums(d, table);
    return detail::sum_below(tree, s, right_child(i)) - detail::sum_below(tree, s, left_child(i));
}

struct ConditionValue {
    double value = 0.0;
    DyadicIndex witness{0, 0};
};

inline ConditionValue condition_A(const Symbol& b, const Symbol& d) {
    const Tree& tree = b.tree();
    const NuTable table = nu_table(b);
    const auto s = detail::difference_subtree_sums(d, table);
    ConditionValue best;
    for (std::size_t id = 0; id < tree.node_count(); ++id) {
        const DyadicIndex i = tree.node(id);
        const double nt = table.nu_tilde[id];
        if (nt == 0.0) continue;
        const double np = table.nu_at(tree, right_child(i));
        const double nm = table.nu_at(tree, left_child(i));
        Complex acc{};
        if (np > 0.0) acc += detail::sum_below(tree, s, right_child(i)) / np;
        if (nm > 0.0) acc += detail::sum_below(tree, s, left_child(i)) / nm;
        const double v = nt * std::abs(acc) / std::sqrt(interval_length(i));
        if (v > best.value) best = {v, i};
    }
    return best;
}

inline ConditionValue condition_B(const Symbol& b, const Symbol& d) {
    const Tree& tree = b.tree();
    const NuTable table = nu_table(b);
    const auto s = detail::difference_subtree_sums(d, table);

    // w_J = nu~(J)^2 |p(J) + d_J/sqrt|J||^2, then strict-subtree sums.
    std::vector<double> w(tree.node_count());
    for (std::size_t id = 0; id < tree.node_count(); ++id) {
        const DyadicIndex j = tree.node(id);
        const double nt = table.nu_tilde[id];
        if (nt == 0.0) continue;
        const double np = table.nu_at(tree, right_child(j));
        const double nm = table.nu_at(tree, left_child(j));
        Complex p{};
        if (np > 0.0) p += detail::sum_below(tree, s, right_child(j)) / np;
        if (nm > 0.0) p -= detail::sum_below(tree, s, left_child(j)) / nm;
        w[id] = nt * nt * std::norm(p + d[id] / std::sqrt(interval_length(j)));
    }
    std::vector<double> inclusive = w;
    for (std::size_t id = tree.node_count(); id-- > 0;) {
        const DyadicIndex j = tree.node(id);
        if (j.level < tree.depth())
            inclusive[id] += inclusive[tree.id(left_child(j))] + inclusive[tree.id(right_child(j))];
    }
    ConditionValue best;
    for (std::size_t id = 0; id < tree.node_count(); ++id) {
        const DyadicIndex i = tree.node(id);
        const double v = std::sqrt((inclusive[id] - w[id]) / interval_length(i));
        if (v > best.value) best = {v, i};
    }
    return best;
}

inline ConditionValue condition_C(const Symbol& b, const Symbol& d) {
    const Tree& tree = b.tree();
    const NuTable table = nu_table(b);
    const auto s = detail::difference_subtree_sums(d, table);

    std::vector<double> v(tree.node_count());
    for (std::size_t id = 0; id < tree.node_count(); ++id) {
        const DyadicIndex j = tree.node(id);
        const Complex q = detail::sum_below(tree, s, right_child(j)) -
                          detail::sum_below(tree, s, left_child(j));
        v[id] = std::norm(q) / interval_length(j);
    }
    for (std::size_t id = tree.node_count(); id-- > 0;) {
        const DyadicIndex j = tree.node(id);
        if (j.level < tree.depth())
            v[id] += v[tree.id(left_child(j))] + v[tree.id(right_child(j))];
    }
    ConditionValue best;
    for (std::size_t id = 0; id < tree.node_count(); ++id) {
        if (!(table.nu[id] > 0.0)) continue;
        const double val = std::sqrt(v[id] / table.nu[id]);
        if (val > best.value) best = {val, tree.node(id)};
    }
    return best;
}

struct CarlesonBound {
    double lhs = 0.0;
    double rhs = 0.0;
};

// lhs = sqrt( sum over J strictly inside I of (nu(J+) - nu(J-))^2 / |J| ),
// rhs = BMO(b) sqrt(nu(I)).
inline CarlesonBound carleson_difference_bound(const Symbol& b, DyadicIndex i) {
    const Tree& tree = b.tree();
    const NuTable table = nu_table(b);
    std::vector<double> y(tree.node_count());
    for (std::size_t id = 0; id < tree.node_count(); ++id) {
        const DyadicIndex j = tree.node(id);
        const double diff = table.nu_at(tree, right_child(j)) - table.nu_at(tree, left_child(j));
        y[id] = diff * diff / interval_length(j);
    }
    for (std::size_t id = tree.node_count(); id-- > 0;) {
        const DyadicIndex j = tree.node(id);
        if (j.level < tree.depth())
            y[id] += y[tree.id(left_child(j))] + y[tree.id(right_child(j))];
    }
    const std::size_t id = tree.id(i);
    const double strict = y[id] - (table.nu_at(tree, right_child(i)) - table.nu_at(tree, left_child(i))) *
                                      (table.nu_at(tree, right_child(i)) - table.nu_at(tree, left_child(i))) /
                                      interval_length(i);
    return {std::sqrt(std::max(strict, 0.0)), bmo_norm(b, table) * std::sqrt(table.nu[id])};
}

// Pointwise sup over tree intervals containing the point of the modulus of
// the average; ancestors only, the full interval [0,1) included.
inline GridFunction dyadic_maximal(const GridFunction& f) {
    const auto D = f.depth;
    const LevelSums sums = node_integrals(f);
    std::vector<double> cur(1, 0.0);
    for (std::uint32_t l = 0; l <= D; ++l) {
        std::vector<double> next(std::size_t{1} << (l + 1));
        for (std::uint64_t k = 0; k < (std::uint64_t{1} << l); ++k) {
            const double here = std::max(cur[static_cast<std::size_t>(k)],
                                         std::abs(sums.at(l, k)) / interval_length({l, k}));
            next[2 * k] = here;
            next[2 * k + 1] = here;
        }
        cur.swap(next);
    }
    GridFunction out = GridFunction::zero(D);
    for (std::size_t c = 0; c < out.samples.size(); ++c) out.samples[c] = cur[c];
    return out;
}

// Pointwise sqrt of sum over tree nodes of |coeff_I|^2 1_I / |I|.
inline GridFunction dyadic_square_function(const Symbol& coeffs) {
    const Tree& tree = coeffs.tree();
    const auto D = tree.depth();
    std::vector<double> cur(1, 0.0);
    for (std::uint32_t l = 0; l <= D; ++l) {
        std::vector<double> next(std::size_t{1} << (l + 1));
        for (std::uint64_t k = 0; k < (std::uint64_t{1} << l); ++k) {
            const double here = cur[static_cast<std::size_t>(k)] +
                                std::norm(coeffs.at({l, k})) / interval_length({l, k});
            next[2 * k] = here;
            next[2 * k + 1] = here;
        }
        cur.swap(next);
    }
    GridFunction out = GridFunction::zero(D);
    for (std::size_t c = 0; c < out.samples.size(); ++c) out.samples[c] = std::sqrt(cur[c]);
    return out;
}

struct SquareMaximalCheck {
    double max_violation = 0.0;  // max over cells of (S Phi)^2 - (M c)^2 (S b)^2
    double scale = 0.0;          // max over cells of the dominating side
};

// Pointwise domination of the square function of Phi_K = b_K <c>_K (K
// strictly inside I) by (M c^I)^2 (S b^I)^2 on the grid.
inline SquareMaximalCheck square_maximal_domination(const Symbol& b, const Symbol& c, DyadicIndex i) {
    const Tree& tree = b.tree();
    const GridFunction ci = haar_expansion_grid(c, i);
    const LevelSums sums = node_integrals(ci);
    const GridFunction mc = dyadic_maximal(ci);

    Symbol phi(tree), b_strict(tree);
    for (std::size_t id = 0; id < tree.node_count(); ++id) {
        const DyadicIndex k = tree.node(id);
        if (!contains(i, k) || k == i) continue;
        phi[id] = b[id] * node_average(sums, k);
        b_strict[id] = b[id];
    }
    const GridFunction sphi = dyadic_square_function(phi);
    const GridFunction sb = dyadic_square_function(b_strict);

    SquareMaximalCheck out;
    for (std::size_t cell = 0; cell < sphi.samples.size(); ++cell) {
        const double lhs = std::norm(sphi.samples[cell]);
        const double rhs = std::norm(mc.samples[cell]) * std::norm(sb.samples[cell]);
        out.max_violation = std::max(out.max_violation, lhs - rhs);
        out.scale = std::max(out.scale, rhs);
    }
    return out;
}

struct ConditionsReport {
    std::uint32_t depth = 0;
    double A = 0.0, B = 0.0, C = 0.0;
    double bmo_b = 0.0, bmo_d = 0.0;
    double op_norm = 0.0;
    double ratio = 0.0;          // op_norm / (A+B+C); 0 in the all-zero regime
    bool ratio_infinite = false; // set only if A+B+C vanishes while op_norm does not
    DyadicIndex witness_A{0, 0}, witness_B{0, 0}, witness_C{0, 0};
    std::uint64_t seed = 0;
    std::string b_hash, d_hash;
};

inline ConditionsReport full_report(const Symbol& b, const Symbol& d, std::uint64_t seed = 0) {
    ConditionsReport r;
    r.depth = b.tree().depth();
    const ConditionValue a = condition_A(b, d);
    const ConditionValue bb = condition_B(b, d);
    const ConditionValue c = condition_C(b, d);
    r.A = a.value;
    r.B = bb.value;
    r.C = c.value;
    r.witness_A = a.witness;
    r.witness_B = bb.witness;
    r.witness_C = c.witness;
    r.bmo_b = bmo_norm(b);
    r.bmo_d = bmo_norm(d);
    r.op_norm = operator_norm(composition_gram_closed(b, d));
    const double sum = r.A + r.B + r.C;
    if (sum > 1e-12) {
        r.ratio = r.op_norm / sum;
    } else if (r.op_norm > 1e-10) {
        r.ratio_infinite = true;
    }
    r.seed = seed;
    r.b_hash = symbol_hash(b);
    r.d_hash = symbol_hash(d);
    return r;
}

}  // namespace dyadic

#include <catch2/catch_amalgamated.hpp>

#include "dyadic/conditions.hpp"

using namespace dyadic;

namespace {

Symbol unit_mass_at_leaf(const Tree& tree) {
    Symbol b = make_zero(tree);
    b.set({2, 0}, 1.0);
    return b;
}

}  // namespace

TEST_CASE("p and q terms") {
    const Tree tree(2);
    const Symbol one = make_constant(tree, 1.0);
    const Symbol unit = unit_mass_at_leaf(tree);

    for (std::size_t id = 0; id < tree.node_count(); ++id) {
        CHECK(std::abs(p_term(one, one, tree.node(id))) <= 1e-15);  // symmetric b
        CHECK(std::abs(q_term(one, one, tree.node(id))) <= 1e-15);
    }
    CHECK(p_term(unit, one, {2, 3}) == Complex{});  // leaf: empty sum
    CHECK(q_term(unit, one, {2, 3}) == Complex{});

    // only K = (1,0) contributes: delta = -1, d/sqrt|K| = sqrt2,
    // (-nu(K+) + nu(K-)) = +1
    CHECK(p_term(unit, one, {0, 0}).real() == Catch::Approx(-std::sqrt(2.0)).epsilon(1e-14));
    CHECK(q_term(unit, one, {0, 0}).real() == Catch::Approx(-std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("condition A vanishes for symmetric and degenerate symbols") {
    const Tree tree(2);
    const Symbol one = make_constant(tree, 1.0);
    const Symbol rnd_d = make_random(tree, 7, 0.75);
    CHECK(condition_A(one, rnd_d).value == 0.0);
    CHECK(condition_A(make_zero(tree), rnd_d).value == 0.0);
    CHECK(condition_A(unit_mass_at_leaf(tree), one).value == 0.0);  // nu~ = 0 everywhere
}

TEST_CASE("condition B worked instance") {
    const Tree tree(2);
    const Symbol one = make_constant(tree, 1.0);
    const ConditionValue b = condition_B(one, one);
    CHECK(b.value == Catch::Approx(std::sqrt(2.0)).epsilon(1e-13));
    CHECK(b.witness == DyadicIndex{0, 0});
    CHECK(condition_B(make_zero(tree), one).value == 0.0);
    CHECK(condition_B(one, make_zero(tree)).value == 0.0);  // d = 0, symmetric b
}

TEST_CASE("condition C worked instance") {
    const Tree tree(2);
    const Symbol one = make_constant(tree, 1.0);
    const Symbol unit = unit_mass_at_leaf(tree);
    const ConditionValue c = condition_C(unit, one);
    CHECK(c.value == Catch::Approx(std::sqrt(2.0)).epsilon(1e-13));
    CHECK(c.witness == DyadicIndex{0, 0});
    CHECK(condition_C(one, one).value == 0.0);
    CHECK(condition_C(make_zero(tree), one).value == 0.0);  // empty sup
}

TEST_CASE("Carleson difference bound") {
    const Tree tree(2);
    const Symbol one = make_constant(tree, 1.0);
    CHECK(carleson_difference_bound(one, {0, 0}).lhs == 0.0);

    const Symbol unit = unit_mass_at_leaf(tree);
    const CarlesonBound cb = carleson_difference_bound(unit, {0, 0});
    CHECK(cb.lhs == Catch::Approx(std::sqrt(2.0)).epsilon(1e-13));
    CHECK(cb.rhs == Catch::Approx(2.0).epsilon(1e-13));  // BMO attained at the leaf
    CHECK(cb.lhs <= cb.rhs);

    const Symbol b = make_random(Tree(4), 13, 0.75);
    const CarlesonBound base = carleson_difference_bound(b, {0, 0});
    const CarlesonBound sc = carleson_difference_bound(scale(b, 2.0), {0, 0});
    CHECK(sc.lhs == Catch::Approx(4.0 * base.lhs).epsilon(1e-12));
    CHECK(sc.rhs == Catch::Approx(4.0 * base.rhs).epsilon(1e-12));
}

TEST_CASE("dyadic maximal function") {
    const std::uint32_t D = 3;
    GridFunction c = GridFunction::zero(D);
    for (auto& v : c.samples) v = Complex{-2.5, 1.0};
    const GridFunction m = dyadic_maximal(c);
    for (const auto& v : m.samples) CHECK(v.real() == Catch::Approx(std::abs(Complex{-2.5, 1.0})));

    const GridFunction h = haar_grid({1, 0}, D, 0);
    const GridFunction mh = dyadic_maximal(h);
    const LevelSums sums = node_integrals(h);
    const Tree tree(D);
    for (std::size_t id = 0; id < tree.node_count(); ++id) {
        const DyadicIndex I = tree.node(id);
        const double avg = std::abs(node_average(sums, I));
        const std::size_t cell = static_cast<std::size_t>(I.position) * (grid_resolution(D) >> I.level);
        CHECK(mh.samples[cell].real() >= avg - 1e-14);
    }

    const Complex lambda{0.0, -3.0};
    GridFunction hl = h;
    for (auto& v : hl.samples) v *= lambda;
    const GridFunction ml = dyadic_maximal(hl);
    for (std::size_t cell = 0; cell < ml.samples.size(); ++cell)
        CHECK(ml.samples[cell].real() ==
              Catch::Approx(3.0 * mh.samples[cell].real()).margin(1e-13));
}

TEST_CASE("dyadic square function") {
    const std::uint32_t D = 3;
    const Tree tree(D);
    Symbol phi = make_zero(tree);
    phi.set({0, 0}, 1.0);
    const GridFunction s = dyadic_square_function(phi);
    for (const auto& v : s.samples) CHECK(v.real() == 1.0);

    const Symbol coeffs = make_random(tree, 17, 0.5);
    const GridFunction sc = dyadic_square_function(coeffs);
    double l2sq = 0.0;
    for (const auto& v : sc.samples) l2sq += std::norm(v);
    l2sq *= cell_width(D);
    double expect = 0.0;
    for (std::size_t id = 0; id < tree.node_count(); ++id) expect += std::norm(coeffs[id]);
    CHECK(l2sq == Catch::Approx(expect).epsilon(1e-12));
}

TEST_CASE("square function of b <c>_K is dominated by (Mc)^2 (Sb)^2 pointwise") {
    for (const std::uint32_t D : {3u, 4u}) {
        const Tree tree(D);
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            const Symbol b = make_random(tree, 300 + seed, 0.75);
            const Symbol c = make_random(tree, 400 + seed, 0.75);
            for (std::size_t id = 0; id < tree.node_count(); ++id) {
                const SquareMaximalCheck r = square_maximal_domination(b, c, tree.node(id));
                CHECK(r.max_violation <= 1e-12 * (1.0 + r.scale));
            }
        }
    }
}

TEST_CASE("full report on the worked instances") {
    const Tree tree(2);
    const Symbol one = make_constant(tree, 1.0);
    const ConditionsReport r = full_report(one, one);
    CHECK(r.A == 0.0);
    CHECK(r.B == Catch::Approx(std::sqrt(2.0)).epsilon(1e-13));
    CHECK(r.C == 0.0);
    CHECK(r.op_norm == Catch::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-10));
    CHECK(r.ratio == Catch::Approx(2.0).epsilon(1e-9));
    CHECK_FALSE(r.ratio_infinite);
    CHECK(r.bmo_b == Catch::Approx(std::sqrt(7.0)));

    const ConditionsReport rz = full_report(make_zero(tree), one);
    CHECK(rz.A == 0.0);
    CHECK(rz.B == 0.0);
    CHECK(rz.C == 0.0);
    CHECK(rz.op_norm == 0.0);
    CHECK(rz.ratio == 0.0);

    const Symbol one1 = make_constant(Tree(1), 1.0);
    CHECK(full_report(one1, one1).op_norm == 0.0);
}

TEST_CASE("A, B, C and the norm are degree-one homogeneous in each symbol") {
    const Tree tree(3);
    const Symbol b = make_random(tree, 500, 0.75);
    const Symbol d = make_random(tree, 501, 0.75);
    const ConditionsReport base = full_report(b, d);
    for (const Complex lambda : {Complex{2.0, 0.0}, Complex{0.0, 1.0}, Complex{0.5, 0.0}}) {
        const double m = std::abs(lambda);
        const ConditionsReport rb = full_report(scale(b, lambda), d);
        CHECK(rb.A == Catch::Approx(m * base.A).epsilon(1e-10));
        CHECK(rb.B == Catch::Approx(m * base.B).epsilon(1e-10));
        CHECK(rb.C == Catch::Approx(m * base.C).epsilon(1e-10));
        CHECK(rb.op_norm == Catch::Approx(m * base.op_norm).epsilon(1e-10));
        const ConditionsReport rd = full_report(b, scale(d, lambda));
        CHECK(rd.A == Catch::Approx(m * base.A).epsilon(1e-10));
        CHECK(rd.B == Catch::Approx(m * base.B).epsilon(1e-10));
        CHECK(rd.C == Catch::Approx(m * base.C).epsilon(1e-10));
        CHECK(rd.op_norm == Catch::Approx(m * base.op_norm).epsilon(1e-10));
    }
}

TEST_CASE("full report is deterministic") {
    const Tree tree(4);
    const Symbol b = make_random(tree, 600, 0.75);
    const Symbol d = make_random(tree, 601, 0.75);
    const ConditionsReport r1 = full_report(b, d, 600);
    const ConditionsReport r2 = full_report(b, d, 600);
    CHECK(r1.A == r2.A);
    CHECK(r1.B == r2.B);
    CHECK(r1.C == r2.C);
    CHECK(r1.op_norm == r2.op_norm);
    CHECK(r1.b_hash == r2.b_hash);
    CHECK(r1.witness_B == r2.witness_B);
}

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "dyadic/paraproduct.hpp"

using namespace dyadic;

namespace {

GridFunction random_grid(std::uint32_t depth, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    const auto unit = [&eng] { return static_cast<double>(eng() >> 11) * 0x1.0p-53 - 0.5; };
    GridFunction f = GridFunction::zero(depth);
    for (auto& v : f.samples) v = {unit(), unit()};
    return f;
}

}  // namespace

TEST_CASE("martingale transform with unit symbol removes the mean") {
    const std::uint32_t D = 3;
    const Symbol one = make_constant(Tree(D), 1.0);
    const GridFunction f = random_grid(D, 17);
    const GridFunction g = apply_paraproduct(one, 0, 0, f);
    const Complex mean = node_integrals(f).at(0, 0);
    for (std::size_t c = 0; c < f.samples.size(); ++c)
        CHECK(std::abs(g.samples[c] - (f.samples[c] - mean)) <= 1e-12);
}

TEST_CASE("zero symbol annihilates, single-coefficient symbol picks one Haar term") {
    const std::uint32_t D = 2;
    const Tree tree(D);
    const GridFunction f = random_grid(D, 3);
    const GridFunction z = apply_paraproduct(make_zero(tree), 0, 1, f);
    for (const auto& v : z.samples) CHECK(v == Complex{});

    Symbol b = make_zero(tree);
    b.set({0, 0}, 1.0);
    GridFunction ones = GridFunction::zero(D);
    for (auto& v : ones.samples) v = 1.0;
    const GridFunction g = apply_paraproduct(b, 0, 1, ones);
    const GridFunction h = haar_grid({0, 0}, D, 0);
    for (std::size_t c = 0; c < g.samples.size(); ++c)
        CHECK(std::abs(g.samples[c] - h.samples[c]) <= 1e-14);
}

TEST_CASE("apply_paraproduct rejects mismatched resolutions") {
    const Symbol b = make_constant(Tree(3), 1.0);
    CHECK_THROWS_AS(apply_paraproduct(b, 0, 1, GridFunction::zero(2)), std::invalid_argument);
}

TEST_CASE("(0,1) and (1,0) with conjugate symbols are mutual adjoints") {
    const std::uint32_t D = 4;
    const Symbol b = make_random(Tree(D), 11, 0.75);
    const GridFunction f = random_grid(D, 21);
    const GridFunction g = random_grid(D, 22);
    const Complex lhs = grid_inner(apply_paraproduct(b, 0, 1, f), g);
    const Complex rhs = grid_inner(f, apply_paraproduct(conjugate(b), 1, 0, g));
    CHECK(std::abs(lhs - rhs) <= 1e-10);
}

TEST_CASE("composition Gram worked instances") {
    {  // two levels cannot hold a chain of three nested scales
        const Symbol one = make_constant(Tree(1), 1.0);
        CHECK(max_abs(composition_gram_direct(one, one)) == 0.0);
        CHECK(max_abs(composition_gram_closed(one, one)) == 0.0);
    }
    {
        const Tree tree(2);
        const Symbol one = make_constant(tree, 1.0);
        const OperatorMatrix g = composition_gram_direct(one, one);
        const double r2 = std::sqrt(2.0);
        for (std::size_t i = 0; i < g.dim(); ++i)
            for (std::size_t j = 1; j < g.dim(); ++j) CHECK(std::abs(g(i, j)) <= 1e-13);
        CHECK(g(tree.id({2, 0}), 0).real() == Catch::Approx(r2).epsilon(1e-13));
        CHECK(g(tree.id({2, 1}), 0).real() == Catch::Approx(-r2).epsilon(1e-13));
        CHECK(g(tree.id({2, 2}), 0).real() == Catch::Approx(-r2).epsilon(1e-13));
        CHECK(g(tree.id({2, 3}), 0).real() == Catch::Approx(r2).epsilon(1e-13));
    }
    {
        const Tree tree(2);
        const Symbol zero = make_zero(tree);
        const Symbol one = make_constant(tree, 1.0);
        CHECK(max_abs(composition_gram_direct(zero, one)) == 0.0);
        CHECK(max_abs(composition_gram_closed(zero, one)) == 0.0);
    }
}

TEST_CASE("closed form picks out single chains") {
    const Tree tree(2);
    const Symbol one = make_constant(tree, 1.0);
    Symbol d = make_zero(tree);
    d.set({1, 0}, 1.0);
    const OperatorMatrix g = composition_gram_closed(one, d);
    const double r2 = std::sqrt(2.0);
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < g.dim(); ++i)
        for (std::size_t j = 0; j < g.dim(); ++j)
            if (std::abs(g(i, j)) > 0.0) ++nonzero;
    CHECK(nonzero == 2);
    CHECK(g(tree.id({2, 0}), 0).real() == Catch::Approx(r2).epsilon(1e-14));
    CHECK(g(tree.id({2, 1}), 0).real() == Catch::Approx(-r2).epsilon(1e-14));
}

TEST_CASE("closed Gram equals the grid oracle on random symbols") {
    for (const std::uint32_t D : {2u, 3u, 4u, 5u}) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const Tree tree(D);
            const Symbol b = make_random(tree, 2 * seed, 0.75);
            const Symbol d = make_random(tree, 2 * seed + 1, 0.75);
            CHECK(normalized_diff(composition_gram_closed(b, d),
                                  composition_gram_direct(b, d)) <= 1e-10);
        }
    }
}

TEST_CASE("Gram sparsity: entries need two strictly nested scales") {
    const std::uint32_t D = 4;
    const Tree tree(D);
    const Symbol b = make_random(tree, 5, 0.75);
    const Symbol d = make_random(tree, 6, 0.75);
    const OperatorMatrix g = composition_gram_closed(b, d);
    for (std::size_t i = 0; i < g.dim(); ++i) {
        const DyadicIndex I = tree.node(i);
        for (std::size_t j = 0; j < g.dim(); ++j) {
            const DyadicIndex J = tree.node(j);
            if (!(contains(J, I) && I.level >= J.level + 2)) CHECK(g(i, j) == Complex{});
        }
    }
}

TEST_CASE("Gram is linear in each symbol and the norm scales by the modulus") {
    const Tree tree(3);
    const Symbol b = make_random(tree, 31, 0.75);
    const Symbol d = make_random(tree, 32, 0.75);
    const Complex lambda{0.8, 1.1};
    const OperatorMatrix base = composition_gram_closed(b, d);

    CHECK(normalized_diff(composition_gram_closed(scale(b, lambda), d), scaled(base, lambda)) <= 1e-13);
    CHECK(normalized_diff(composition_gram_closed(b, scale(d, lambda)), scaled(base, lambda)) <= 1e-13);

    const double n0 = operator_norm_dense_svd(base);
    CHECK(operator_norm_dense_svd(composition_gram_closed(scale(b, lambda), d)) ==
          Catch::Approx(std::abs(lambda) * n0).epsilon(1e-10));
}

TEST_CASE("operator norm methods") {
    CHECK(operator_norm_dense_svd(OperatorMatrix(3)) == 0.0);
    CHECK(operator_norm_power(OperatorMatrix(3)) == 0.0);

    const Symbol one = make_constant(Tree(2), 1.0);
    const OperatorMatrix g = composition_gram_closed(one, one);
    CHECK(operator_norm_dense_svd(g) == Catch::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));

    for (const std::uint32_t D : {3u, 5u, 8u}) {
        const Tree tree(D);
        const Symbol b = make_random(tree, D, 0.75);
        const Symbol d = make_random(tree, D + 100, 0.75);
        const OperatorMatrix m = composition_gram_closed(b, d);
        const double s = operator_norm_dense_svd(m);
        const double p = operator_norm_power(m, {1e-12, 20000, 9});
        CHECK(p == Catch::Approx(s).epsilon(1e-9));
    }

    CHECK_THROWS_AS(operator_norm_power(g, PowerIterationOptions{1e-12, 1, 1}), ConvergenceError);
    CHECK_THROWS_AS(operator_norm_power(g, PowerIterationOptions{0.0, 10, 1}), std::invalid_argument);
}

TEST_CASE("dense storage stops at the depth-11 envelope") {
    CHECK_NOTHROW(OperatorMatrix(11));
    CHECK_THROWS_AS(OperatorMatrix(12), std::invalid_argument);
}

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "dyadic/grid.hpp"
#include "dyadic/tree.hpp"

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

TEST_CASE("children split intervals left/right") {
    CHECK(children({0, 0}) == std::pair<DyadicIndex, DyadicIndex>{{1, 0}, {1, 1}});
    CHECK(children({1, 1}) == std::pair<DyadicIndex, DyadicIndex>{{2, 2}, {2, 3}});
    CHECK(children({3, 5}) == std::pair<DyadicIndex, DyadicIndex>{{4, 10}, {4, 11}});
    CHECK(parent(DyadicIndex{4, 11}) == DyadicIndex{3, 5});
}

TEST_CASE("delta orients halves") {
    CHECK(delta({0, 0}, {2, 3}) == +1);
    CHECK(delta({0, 0}, {1, 0}) == -1);
    CHECK(delta({1, 0}, {1, 1}) == 0);
    CHECK(delta({0, 0}, {1, 1}) == +1);  // the child itself counts
    CHECK_THROWS_AS(delta({1, 0}, {1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(delta({2, 1}, {0, 0}), std::invalid_argument);
}

TEST_CASE("haar_value on strictly nested or disjoint intervals") {
    CHECK(haar_value({0, 0}, {1, 1}) == 1.0);
    CHECK(haar_value({1, 0}, {2, 0}) == Catch::Approx(-std::sqrt(2.0)));
    CHECK(haar_value({1, 0}, {2, 2}) == 0.0);
    CHECK_THROWS_AS(haar_value({1, 0}, {1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(haar_value({1, 0}, {0, 0}), std::invalid_argument);
}

TEST_CASE("haar_value agrees with the sampled Haar function") {
    const std::uint32_t D = 3;
    const Tree tree(D);
    for (std::size_t i = 0; i < tree.node_count(); ++i) {
        const DyadicIndex I = tree.node(i);
        const GridFunction g = haar_grid(I, D, 0);
        for (std::size_t j = 0; j < tree.node_count(); ++j) {
            const DyadicIndex J = tree.node(j);
            if (contains(J, I)) continue;
            const std::size_t cell = static_cast<std::size_t>(J.position) *
                                     (grid_resolution(D) >> J.level);
            CHECK(haar_value(I, J) == Catch::Approx(g.samples[cell].real()).margin(1e-14));
        }
    }
}

TEST_CASE("haar_grid worked samples") {
    const GridFunction h0 = haar_grid({0, 0}, 1, 0);
    CHECK(h0.samples == std::vector<Complex>{-1.0, -1.0, 1.0, 1.0});
    const GridFunction h1 = haar_grid({0, 0}, 1, 1);
    CHECK(h1.samples == std::vector<Complex>{1.0, 1.0, 1.0, 1.0});
    const GridFunction g = haar_grid({1, 0}, 1, 0);
    CHECK(grid_inner(g, g).real() == Catch::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Haar system is orthonormal on the grid") {
    const std::uint32_t D = 4;
    const Tree tree(D);
    double worst = 0.0;
    for (std::size_t i = 0; i < tree.node_count(); ++i) {
        const GridFunction gi = haar_grid(tree.node(i), D, 0);
        for (std::size_t j = i; j < tree.node_count(); ++j) {
            const Complex ip = grid_inner(gi, haar_grid(tree.node(j), D, 0));
            worst = std::max(worst, std::abs(ip - (i == j ? 1.0 : 0.0)));
        }
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("constant plus Haar span reconstructs any grid function") {
    for (const std::uint32_t D : {3u, 5u}) {
        const Tree tree(D);
        const GridFunction f = random_grid(D, 99 + D);
        const LevelSums sums = node_integrals(f);
        GridFunction rec = GridFunction::zero(D);
        const Complex mean = sums.at(0, 0);
        for (auto& v : rec.samples) v = mean;
        for (std::size_t i = 0; i < tree.node_count(); ++i) {
            const DyadicIndex I = tree.node(i);
            const Complex c = haar_coefficient(sums, I, 0);
            const GridFunction h = haar_grid(I, D, 0);
            for (std::size_t cell = 0; cell < rec.samples.size(); ++cell)
                rec.samples[cell] += c * h.samples[cell];
        }
        double err = 0.0;
        for (std::size_t cell = 0; cell < rec.samples.size(); ++cell)
            err = std::max(err, std::abs(rec.samples[cell] - f.samples[cell]));
        CHECK(err / grid_norm(f) <= 1e-10);
    }
}

TEST_CASE("delta is constant on each half, over all strict descendants") {
    const std::uint32_t D = 5;
    const Tree tree(D);
    for (std::size_t i = 0; i < tree.node_count(); ++i) {
        const DyadicIndex I = tree.node(i);
        for (std::size_t j = 0; j < tree.node_count(); ++j) {
            const DyadicIndex J = tree.node(j);
            if (J == I || !contains(I, J)) continue;
            const int expected = contains(right_child(I), J) ? +1 : -1;
            CHECK(delta(I, J) == expected);
        }
    }
}

TEST_CASE("canonical node order round-trips") {
    const Tree tree(6);
    CHECK(tree.node_count() == 127);
    for (std::size_t id = 0; id < tree.node_count(); ++id) {
        const DyadicIndex I = tree.node(id);
        CHECK(tree.id(I) == id);
        CHECK(tree.member(I));
    }
    CHECK(tree.id({0, 0}) == 0);
    CHECK(tree.id({1, 0}) == 1);
    CHECK(tree.id({1, 1}) == 2);
    CHECK(tree.id({2, 0}) == 3);
    CHECK(to_string(DyadicIndex{2, 3}) == "2:3");
    CHECK(parse_index("2:3") == DyadicIndex{2, 3});
    CHECK_THROWS_AS(parse_index("2-3"), std::invalid_argument);
    CHECK_THROWS_AS(parse_index("a:3"), std::invalid_argument);
}

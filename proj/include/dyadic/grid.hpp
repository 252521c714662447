#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "dyadic/tree.hpp"

// Uniform sampling grid for functions on [0,1). A tree of depth D uses
// 2^(D+1) cells so that every Haar function of level <= D is exactly
// representable as a step function on the grid.

namespace dyadic {

inline std::size_t grid_resolution(std::uint32_t depth) {
    return std::size_t{1} << (depth + 1);
}

inline double cell_width(std::uint32_t depth) {
    return std::ldexp(1.0, -static_cast<int>(depth) - 1);
}

struct GridFunction {
    std::uint32_t depth = 0;
    std::vector<Complex> samples;  // cell i covers [i*w, (i+1)*w), w = 2^-(D+1)

    static GridFunction zero(std::uint32_t depth) {
        return {depth, std::vector<Complex>(grid_resolution(depth))};
    }
};

inline Complex grid_inner(const GridFunction& f, const GridFunction& g) {
    if (f.depth != g.depth) throw std::invalid_argument("grid_inner: resolution mismatch");
    Complex acc{};
    for (std::size_t i = 0; i < f.samples.size(); ++i) acc += f.samples[i] * std::conj(g.samples[i]);
    return acc * cell_width(f.depth);
}

inline double grid_norm(const GridFunction& f) {
    double acc = 0.0;
    for (const auto& v : f.samples) acc += std::norm(v);
    return std::sqrt(acc * cell_width(f.depth));
}

// Integrals of f over every dyadic interval down to the cell level D+1.
struct LevelSums {
    std::uint32_t depth = 0;
    std::vector<std::vector<Complex>> sums;  // sums[l][k] = integral over (l,k), l = 0..D+1

    Complex at(std::uint32_t level, std::uint64_t position) const {
        return sums[level][static_cast<std::size_t>(position)];
    }
    Complex at(DyadicIndex i) const { return at(i.level, i.position); }
};

inline LevelSums node_integrals(const GridFunction& f) {
    const auto D = f.depth;
    LevelSums s;
    s.depth = D;
    s.sums.resize(D + 2);
    const double w = cell_width(D);
    auto& cells = s.sums[D + 1];
    cells.resize(grid_resolution(D));
    for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = f.samples[i] * w;
    for (int l = static_cast<int>(D); l >= 0; --l) {
        auto& row = s.sums[l];
        const auto& below = s.sums[l + 1];
        row.resize(std::size_t{1} << l);
        for (std::size_t k = 0; k < row.size(); ++k) row[k] = below[2 * k] + below[2 * k + 1];
    }
    return s;
}

inline Complex node_average(const LevelSums& s, DyadicIndex i) {
    return s.at(i) / interval_length(i);
}

// <f, h_I^kind> under the grid inner product.
inline Complex haar_coefficient(const LevelSums& s, DyadicIndex i, int kind) {
    const double len = interval_length(i);
    if (kind == 1) return s.at(i) / len;
    return (s.at(right_child(i)) - s.at(left_child(i))) / std::sqrt(len);
}

// Exact sampled h_I^0 (mean-zero Haar) or h_I^1 (averaging kernel 1_I/|I|).
inline GridFunction haar_grid(DyadicIndex i, std::uint32_t depth, int kind) {
    if (i.level > depth) throw std::invalid_argument("haar_grid: node level exceeds tree depth");
    if (kind != 0 && kind != 1) throw std::invalid_argument("haar_grid: kind must be 0 or 1");
    GridFunction f = GridFunction::zero(depth);
    const std::size_t span = grid_resolution(depth) >> i.level;
    const std::size_t lo = static_cast<std::size_t>(i.position) * span;
    const double len = interval_length(i);
    if (kind == 1) {
        const double v = 1.0 / len;
        for (std::size_t c = lo; c < lo + span; ++c) f.samples[c] = v;
    } else {
        const double v = 1.0 / std::sqrt(len);
        for (std::size_t c = lo; c < lo + span / 2; ++c) f.samples[c] = -v;
        for (std::size_t c = lo + span / 2; c < lo + span; ++c) f.samples[c] = v;
    }
    return f;
}

}  // namespace dyadic

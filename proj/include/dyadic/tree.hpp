#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

// Finite dyadic tree on [0,1).
//
// Orientation convention, fixed globally: for an interval I the minus child
// I- is the left half and the plus child I+ is the right half, so the Haar
// function h_I is negative on the left half of I.

namespace dyadic {

using Complex = std::complex<double>;

struct DyadicIndex {
    std::uint32_t level = 0;
    std::uint64_t position = 0;

    friend bool operator==(const DyadicIndex&, const DyadicIndex&) = default;
};

inline double interval_length(DyadicIndex i) {
    return std::ldexp(1.0, -static_cast<int>(i.level));
}

inline double left_endpoint(DyadicIndex i) {
    return static_cast<double>(i.position) * interval_length(i);
}

inline DyadicIndex left_child(DyadicIndex i) {
    return {i.level + 1, 2 * i.position};
}

inline DyadicIndex right_child(DyadicIndex i) {
    return {i.level + 1, 2 * i.position + 1};
}

// (I-, I+) = (left, right). Children may lie outside a given tree; callers
// check the level.
inline std::pair<DyadicIndex, DyadicIndex> children(DyadicIndex i) {
    return {left_child(i), right_child(i)};
}

inline DyadicIndex parent(DyadicIndex i) {
    if (i.level == 0) throw std::invalid_argument("parent: root has no parent");
    return {i.level - 1, i.position >> 1};
}

// Inclusive containment: J lies inside I (including J == I).
inline bool contains(DyadicIndex outer, DyadicIndex inner) {
    if (inner.level < outer.level) return false;
    return (inner.position >> (inner.level - outer.level)) == outer.position;
}

// +1 if J sits in the right half of I (J included), -1 in the left half,
// 0 if I and J are disjoint. Undefined (and rejected) for J == I and for
// I strictly inside J.
inline int delta(DyadicIndex i, DyadicIndex j) {
    if (i == j) throw std::invalid_argument("delta: undefined for J = I");
    if (contains(j, i)) throw std::invalid_argument("delta: undefined for I strictly inside J");
    if (!contains(i, j)) return 0;
    const auto bit = (j.position >> (j.level - i.level - 1)) & 1u;
    return bit ? +1 : -1;
}

// Constant value of h_I on J. Requires J strictly inside I or disjoint from
// it; h_I is not constant on any J containing I.
inline double haar_value(DyadicIndex i, DyadicIndex j) {
    if (contains(j, i)) throw std::invalid_argument("haar_value: h_I is not constant on J when J contains I");
    const int d = delta(i, j);
    if (d == 0) return 0.0;
    return static_cast<double>(d) / std::sqrt(interval_length(i));
}

inline std::string to_string(DyadicIndex i) {
    return std::to_string(i.level) + ":" + std::to_string(i.position);
}

inline DyadicIndex parse_index(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == text.size())
        throw std::invalid_argument("parse_index: expected \"level:position\", got \"" + text + "\"");
    for (std::size_t k = 0; k < text.size(); ++k) {
        if (k == colon) continue;
        if (text[k] < '0' || text[k] > '9')
            throw std::invalid_argument("parse_index: expected \"level:position\", got \"" + text + "\"");
    }
    const unsigned long lvl = std::stoul(text.substr(0, colon));
    const unsigned long long pos = std::stoull(text.substr(colon + 1));
    if (lvl > 62) throw std::invalid_argument("parse_index: level out of range in \"" + text + "\"");
    return {static_cast<std::uint32_t>(lvl), pos};
}

// All dyadic intervals of [0,1) with level <= depth. Canonical enumeration
// (node ids, matrix index order) is level-major, position-ascending.
class Tree {
public:
    explicit Tree(std::uint32_t depth) : depth_(depth) {
        if (depth > 30) throw std::invalid_argument("Tree: depth too large");
    }

    std::uint32_t depth() const { return depth_; }

    std::size_t node_count() const { return (std::size_t{1} << (depth_ + 1)) - 1; }

    bool member(DyadicIndex i) const {
        return i.level <= depth_ && i.position < (std::uint64_t{1} << i.level);
    }

    bool is_leaf(DyadicIndex i) const { return i.level == depth_; }

    std::size_t id(DyadicIndex i) const {
        return (std::size_t{1} << i.level) - 1 + static_cast<std::size_t>(i.position);
    }

    DyadicIndex node(std::size_t id) const {
        const auto lvl = static_cast<std::uint32_t>(std::bit_width(id + 1) - 1);
        return {lvl, id + 1 - (std::uint64_t{1} << lvl)};
    }

    friend bool operator==(const Tree&, const Tree&) = default;

private:
    std::uint32_t depth_;
};

}  // namespace dyadic

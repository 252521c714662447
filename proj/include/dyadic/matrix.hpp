#pragma once

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "dyadic/tree.hpp"

// Dense operator matrices indexed by the canonical node order: entry (i,j)
// represents <T h_J, h_I> for the i-th node I and j-th node J.

namespace dyadic {

class OperatorMatrix {
public:
    explicit OperatorMatrix(std::uint32_t depth)
        : depth_(depth), dim_(Tree(depth).node_count()), a_(dim_ * dim_) {
        // dense-storage envelope: dimension 4095 at depth 11
        if (depth > 11)
            throw std::invalid_argument("OperatorMatrix: depth > 11 exceeds the dense-storage envelope");
    }

    std::uint32_t depth() const { return depth_; }
    std::size_t dim() const { return dim_; }

    Complex operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }
    Complex& operator()(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }

    const std::vector<Complex>& data() const { return a_; }

private:
    std::uint32_t depth_;
    std::size_t dim_;
    std::vector<Complex> a_;
};

inline double max_abs(const OperatorMatrix& m) {
    double best = 0.0;
    for (const auto& v : m.data()) best = std::max(best, std::abs(v));
    return best;
}

inline double max_abs_diff(const OperatorMatrix& a, const OperatorMatrix& b) {
    double best = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) best = std::max(best, std::abs(a(i, j) - b(i, j)));
    return best;
}

// max |a - b| normalized by the largest entry of either matrix; zero for a
// pair of zero matrices.
inline double normalized_diff(const OperatorMatrix& a, const OperatorMatrix& b) {
    const double scale = std::max(max_abs(a), max_abs(b));
    if (scale == 0.0) return 0.0;
    return max_abs_diff(a, b) / scale;
}

inline OperatorMatrix scaled(const OperatorMatrix& m, Complex lambda) {
    OperatorMatrix out = m;
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j) out(i, j) = lambda * m(i, j);
    return out;
}

inline std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// "re+imi" with 17 significant digits; negative zero imaginary normalized.
inline std::string format_complex(Complex z) {
    char buf[96];
    const double im = z.imag() == 0.0 ? 0.0 : z.imag();
    std::snprintf(buf, sizeof(buf), "%.17g%+.17gi", z.real(), im);
    return buf;
}

inline void write_matrix_csv(const OperatorMatrix& m, std::ostream& os) {
    const Tree tree(m.depth());
    os << "node";
    for (std::size_t j = 0; j < m.dim(); ++j) os << ',' << to_string(tree.node(j));
    os << '\n';
    for (std::size_t i = 0; i < m.dim(); ++i) {
        os << to_string(tree.node(i));
        for (std::size_t j = 0; j < m.dim(); ++j) os << ',' << format_complex(m(i, j));
        os << '\n';
    }
}

}  // namespace dyadic

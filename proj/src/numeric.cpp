#include "tindex/numeric.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace tindex {

namespace {

// Row echelon over Q, returning the pivot row indices in input order.
std::vector<i64> echelon_rows(const IMat& m) {
    const i64 rows = m.rows(), cols = m.cols();
    std::vector<RatVec> basis; // reduced independent rows found so far
    std::vector<i64> picked;
    for (i64 r = 0; r < rows; ++r) {
        RatVec v(cols);
        for (i64 c = 0; c < cols; ++c) v(c) = m(r, c);
        for (const RatVec& b : basis) {
            i64 p = 0;
            while (p < cols && b(p) == 0) ++p;
            if (p < cols && v(p) != 0) {
                Rational f = v(p) / b(p);
                for (i64 c = p; c < cols; ++c) v(c) -= f * b(c);
            }
        }
        bool nonzero = false;
        for (i64 c = 0; c < cols; ++c)
            if (v(c) != 0) { nonzero = true; break; }
        if (nonzero) {
            basis.push_back(v);
            // keep basis rows sorted by pivot position
            for (i64 k = static_cast<i64>(basis.size()) - 1; k > 0; --k) {
                auto pivot = [&](const RatVec& w) {
                    i64 p = 0;
                    while (p < cols && w(p) == 0) ++p;
                    return p;
                };
                if (pivot(basis[k - 1]) > pivot(basis[k])) std::swap(basis[k - 1], basis[k]);
            }
            picked.push_back(r);
        }
    }
    return picked;
}

} // namespace

i64 rational_rank(const IMat& m) { return static_cast<i64>(echelon_rows(m).size()); }

std::vector<i64> greedy_row_basis(const IMat& m) { return echelon_rows(m); }

Int integer_det(const IMat& m) {
    // Bareiss fraction-free elimination.
    const i64 n = m.rows();
    if (n != m.cols()) throw std::invalid_argument("integer_det: square matrix required");
    if (n == 0) return 1;
    Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic> a(n, n);
    for (i64 i = 0; i < n; ++i)
        for (i64 j = 0; j < n; ++j) a(i, j) = m(i, j);
    Int sign = 1, prev = 1;
    for (i64 k = 0; k < n - 1; ++k) {
        if (a(k, k) == 0) {
            i64 swap_row = -1;
            for (i64 i = k + 1; i < n; ++i)
                if (a(i, k) != 0) { swap_row = i; break; }
            if (swap_row < 0) return 0;
            for (i64 j = 0; j < n; ++j) std::swap(a(k, j), a(swap_row, j));
            sign = -sign;
        }
        for (i64 i = k + 1; i < n; ++i)
            for (i64 j = k + 1; j < n; ++j)
                a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

IVec primitive_integer_direction(const RatVec& v) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    using boost::multiprecision::gcd;
    using boost::multiprecision::lcm;
    Int l = 1;
    for (Eigen::Index i = 0; i < v.size(); ++i) l = lcm(l, denominator(v(i)));
    std::vector<Int> scaled(static_cast<std::size_t>(v.size()));
    Int g = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        scaled[static_cast<std::size_t>(i)] = numerator(v(i)) * (l / denominator(v(i)));
        g = gcd(g, scaled[static_cast<std::size_t>(i)]);
    }
    IVec out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        Int q = g == 0 ? Int(0) : scaled[static_cast<std::size_t>(i)] / g;
        out(i) = static_cast<i64>(q);
    }
    return out;
}

} // namespace tindex

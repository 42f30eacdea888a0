#pragma once

// Scalar types and dense matrix typedefs shared across the library.
// All exact arithmetic runs on boost::multiprecision integers/rationals;
// matrix storage is Eigen templated on the scalar.

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

namespace tindex {

using i64 = std::int64_t;
using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using IMat = Eigen::Matrix<i64, Eigen::Dynamic, Eigen::Dynamic>;
using IVec = Eigen::Matrix<i64, Eigen::Dynamic, 1>;
using RatMat = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RatVec = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

// Eigen's generic operator* for multiprecision scalars trips a boost SFINAE
// bug (is_byte_container on matrix types), so products go through lazyProduct.
inline RatVec mat_vec(const RatMat& m, const RatVec& v) { return m.lazyProduct(v); }
inline RatMat mat_mul(const RatMat& a, const RatMat& b) { return a.lazyProduct(b); }

inline RatMat to_rational(const IMat& m) {
    RatMat r(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
    return r;
}

inline RatVec to_rational(const IVec& v) {
    RatVec r(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) r(i) = v(i);
    return r;
}

i64 rational_rank(const IMat& m);

// Indices of the lexicographically first maximal linearly independent row
// subset (greedy Gaussian elimination over the rationals). Deterministic.
std::vector<i64> greedy_row_basis(const IMat& m);

Int integer_det(const IMat& m);

// Least common multiple of the denominators, then cleared and reduced by the
// gcd of the numerators; maps a nonzero rational direction to a primitive
// integer vector with the same orientation.
IVec primitive_integer_direction(const RatVec& v);

} // namespace tindex

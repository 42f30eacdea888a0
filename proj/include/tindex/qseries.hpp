#pragma once

// Exact truncated Laurent series in q^(1/2) with integer coefficients, plus a
// bivariate extension in an auxiliary variable x. Every value carries the
// order it is valid to: a series "f + O(q^order)" knows nothing at or above
// `order`, and all operations propagate the tightest valid order.

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "tindex/errors.hpp"
#include "tindex/numeric.hpp"

namespace tindex {

// Exponent on the half-integer lattice (1/2)Z. Stores twice the value so all
// arithmetic stays integral: q^(3/2) has twice == 3.
struct HalfExp {
    i64 twice = 0;

    constexpr HalfExp() = default;
    constexpr explicit HalfExp(i64 t) : twice(t) {}
    static constexpr HalfExp whole(i64 n) { return HalfExp(2 * n); }

    constexpr bool is_integer() const { return twice % 2 == 0; }

    friend constexpr HalfExp operator+(HalfExp a, HalfExp b) { return HalfExp(a.twice + b.twice); }
    friend constexpr HalfExp operator-(HalfExp a, HalfExp b) { return HalfExp(a.twice - b.twice); }
    constexpr HalfExp operator-() const { return HalfExp(-twice); }
    HalfExp& operator+=(HalfExp o) { twice += o.twice; return *this; }
    HalfExp& operator-=(HalfExp o) { twice -= o.twice; return *this; }
    friend constexpr auto operator<=>(HalfExp a, HalfExp b) = default;

    // reduced fraction over 2: "3", "-1", "1/2", "-7/2"
    std::string str() const;
};

class TruncatedQSeries {
public:
    // Stored slots step by 1/2 from offset() (inclusive) to order()
    // (exclusive); coefficients at or above order() are unknown.
    TruncatedQSeries() : offset_(0), order_(0) {}

    static TruncatedQSeries zero(HalfExp order);
    static TruncatedQSeries one(HalfExp order) { return monomial(Int(1), HalfExp(0), order); }
    static TruncatedQSeries monomial(Int coeff, HalfExp exp, HalfExp order);

    HalfExp offset() const { return offset_; }
    HalfExp order() const { return order_; }
    const std::vector<Int>& coeffs() const { return coeffs_; }

    bool is_zero() const { return coeffs_.empty(); }

    // Least exponent with nonzero coefficient; nullopt if zero up to order
    // (the caller must treat that as "valuation >= order").
    std::optional<HalfExp> valuation() const;

    // Coefficient at exponent e; requires e < order().
    Int coeff_at(HalfExp e) const;

    friend TruncatedQSeries add(const TruncatedQSeries& a, const TruncatedQSeries& b);
    friend TruncatedQSeries sub(const TruncatedQSeries& a, const TruncatedQSeries& b);
    friend TruncatedQSeries mul(const TruncatedQSeries& a, const TruncatedQSeries& b);
    friend TruncatedQSeries monomial_shift(const TruncatedQSeries& a, HalfExp h, int sign);
    friend TruncatedQSeries truncate(const TruncatedQSeries& a, HalfExp order);
    friend TruncatedQSeries negate(const TruncatedQSeries& a);

    // Reciprocal of a series with constant term +-1 and valuation 0.
    friend TruncatedQSeries invert_unit(const TruncatedQSeries& a);
    friend TruncatedQSeries extend_as_polynomial(const TruncatedQSeries& a, HalfExp order);

    friend bool operator==(const TruncatedQSeries& a, const TruncatedQSeries& b) = default;

private:
    HalfExp offset_;
    HalfExp order_;
    std::vector<Int> coeffs_; // size == order_.twice - offset_.twice

    void canonicalize();
};

inline TruncatedQSeries operator+(const TruncatedQSeries& a, const TruncatedQSeries& b) { return add(a, b); }
inline TruncatedQSeries operator-(const TruncatedQSeries& a, const TruncatedQSeries& b) { return sub(a, b); }
inline TruncatedQSeries operator*(const TruncatedQSeries& a, const TruncatedQSeries& b) { return mul(a, b); }

std::optional<HalfExp> valuation(const TruncatedQSeries& a);

// (q)_n = prod_{i=1}^{n} (1 - q^i), truncated; n >= 0.
TruncatedQSeries pochhammer(i64 n, HalfExp order);
// 1/(q)_n as a power series (constant term 1), truncated; n >= 0.
// The convention 1/(q)_n = 0 for n < 0 is the caller's: lattice sums skip
// those terms instead of calling this.
TruncatedQSeries inv_pochhammer(i64 n, HalfExp order);

// Pad the unknown tail with zeros up to `order`. Only meaningful where the
// series is known to be an exact polynomial (BiSeries slot bookkeeping);
// ordinary truncated-series code never raises an order.
TruncatedQSeries extend_as_polynomial(const TruncatedQSeries& a, HalfExp order);

// True when both series are valid to at least `order` and agree strictly
// below it.
bool equal_below(const TruncatedQSeries& a, const TruncatedQSeries& b, HalfExp order);
// True when the series is valid to at least `order` and vanishes below it.
bool zero_below(const TruncatedQSeries& a, HalfExp order);

// Canonical rendering, e.g. "-3*q^(1/2) + 1 - q + O(q^(7/2))". Bit-exact
// format shared by the CLI and the golden files.
std::string render(const TruncatedQSeries& a);

// Laurent series in x whose coefficients are TruncatedQSeries sharing one
// q-order; slots cover x-exponents x_min..x_max inclusive. Slots carry
// polynomial semantics: arithmetic treats content outside the window or at or
// above the q-order as zero, so callers pick windows and orders wide enough
// for what they compare.
class BiSeries {
public:
    BiSeries(int x_min, int x_max, HalfExp q_order);

    int x_min() const { return x_min_; }
    int x_max() const { return x_max_; }
    HalfExp q_order() const { return q_order_; }

    const TruncatedQSeries& at(int x_exp) const; // WindowError outside
    void set(int x_exp, const TruncatedQSeries& s); // truncated to q_order
    void add_to(int x_exp, const TruncatedQSeries& s);

    static BiSeries one(int x_min, int x_max, HalfExp q_order);

private:
    int x_min_, x_max_;
    HalfExp q_order_;
    std::vector<TruncatedQSeries> slots_;
};

BiSeries bi_mul(const BiSeries& a, const BiSeries& b);
BiSeries bi_add(const BiSeries& a, const BiSeries& b); // window intersection
BiSeries bi_sub(const BiSeries& a, const BiSeries& b);
TruncatedQSeries bi_extract(const BiSeries& a, int x_exp); // WindowError outside

// In-place multiply by (1 + sign * q^c * x^d).
void bi_mul_binomial(BiSeries& p, int sign, HalfExp c, int d);
// In-place multiply by 1/(1 - q^c x^d) = sum_j q^(cj) x^(dj); d != 0 so the
// window bounds the expansion even when c <= 0.
void bi_mul_inv_binomial(BiSeries& p, HalfExp c, int d);
// x -> q^c x: slot e picks up a factor q^(c*e).
BiSeries bi_scale_x(const BiSeries& a, HalfExp c);
BiSeries bi_clip(const BiSeries& a, int x_min, int x_max);
// Multiply every slot by sign * q^h.
BiSeries bi_shift_q(const BiSeries& a, HalfExp h, int sign);

bool bi_equal_below(const BiSeries& a, const BiSeries& b, int x_min, int x_max, HalfExp order);

} // namespace tindex

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tindex/qseries.hpp"

using namespace tindex;

namespace {

// series from (twice_exponent, coefficient) pairs
TruncatedQSeries make(std::initializer_list<std::pair<i64, i64>> terms, i64 order_twice) {
    TruncatedQSeries s = TruncatedQSeries::zero(HalfExp(order_twice));
    for (auto& [t, c] : terms) s = add(s, TruncatedQSeries::monomial(Int(c), HalfExp(t), HalfExp(order_twice)));
    return s;
}

TruncatedQSeries random_series(std::mt19937& rng) {
    std::uniform_int_distribution<i64> coeff(-5, 5);
    std::uniform_int_distribution<i64> off(-6, 2);
    std::uniform_int_distribution<i64> len(0, 10);
    i64 o = off(rng);
    i64 n = len(rng);
    TruncatedQSeries s = TruncatedQSeries::zero(HalfExp(o + n));
    for (i64 i = 0; i < n; ++i)
        s = add(s, TruncatedQSeries::monomial(Int(coeff(rng)), HalfExp(o + i), HalfExp(o + n)));
    return s;
}

} // namespace

TEST_CASE("addition: cancellation, order, doubling") {
    auto a = make({{0, 1}, {2, -1}}, 4); // 1 - q + O(q^2)
    auto b = make({{2, 1}}, 4);          // q + O(q^2)
    auto r = add(a, b);
    CHECK(r.order() == HalfExp(4));
    CHECK(equal_below(r, make({{0, 1}}, 4), HalfExp(4)));

    auto one3 = make({{0, 1}}, 6);
    auto zero1 = TruncatedQSeries::zero(HalfExp(2));
    auto r2 = add(one3, zero1);
    CHECK(r2.order() == HalfExp(2)); // min of the orders
    CHECK(r2.coeff_at(HalfExp(0)) == 1);

    auto h = make({{1, 1}}, 10); // q^(1/2) + O(q^5)
    auto r3 = add(h, h);
    CHECK(r3.coeff_at(HalfExp(1)) == 2);
    CHECK(r3.order() == HalfExp(10));
}

TEST_CASE("multiplication: geometric inverse, annihilator, half exponents") {
    const HalfExp N(20);
    auto geom = inv_pochhammer(1, N); // 1 + q + q^2 + ...
    auto lhs = mul(make({{0, 1}, {2, -1}}, 20), geom);
    CHECK(equal_below(lhs, TruncatedQSeries::one(N), N));

    auto z = TruncatedQSeries::zero(HalfExp(6));
    auto a = make({{-2, 3}, {0, 1}}, 6);
    auto r = mul(z, a);
    CHECK(r.is_zero());
    // order: zero factor contributes its order as valuation bound
    CHECK(r.order() == HalfExp(6 + (-2)));

    auto h = make({{1, 1}}, 9);
    auto hh = mul(h, h);
    CHECK(hh.coeff_at(HalfExp(2)) == 1);
    CHECK(*valuation(hh) == HalfExp(2));
}

TEST_CASE("monomial_shift") {
    auto one = TruncatedQSeries::one(HalfExp(4));
    auto s = monomial_shift(one, HalfExp(1), +1);
    CHECK(*valuation(s) == HalfExp(1));
    CHECK(s.order() == HalfExp(5));

    auto a = make({{0, 1}, {2, -1}}, 4); // 1 - q
    auto sh = monomial_shift(a, HalfExp(-2), +1);
    CHECK(sh.coeff_at(HalfExp(-2)) == 1);
    CHECK(sh.coeff_at(HalfExp(0)) == -1);

    // (-q^(1/2))^2 = q
    auto tw = monomial_shift(monomial_shift(one, HalfExp(1), -1), HalfExp(1), -1);
    CHECK(equal_below(tw, make({{2, 1}}, 4), HalfExp(4)));
}

TEST_CASE("valuation") {
    CHECK(*valuation(make({{2, 1}, {4, -1}}, 10)) == HalfExp(2));
    CHECK(!valuation(TruncatedQSeries::zero(HalfExp(10))).has_value());
    CHECK(*valuation(make({{-1, 1}, {0, 1}}, 10)) == HalfExp(-1));
}

TEST_CASE("pochhammer and inverse") {
    CHECK(equal_below(pochhammer(0, HalfExp(10)), TruncatedQSeries::one(HalfExp(10)), HalfExp(10)));
    auto p2 = pochhammer(2, HalfExp(10));
    CHECK(equal_below(p2, make({{0, 1}, {2, -1}, {4, -1}, {6, 1}}, 10), HalfExp(10)));
    auto ip1 = inv_pochhammer(1, HalfExp(8));
    CHECK(equal_below(ip1, make({{0, 1}, {2, 1}, {4, 1}, {6, 1}}, 8), HalfExp(8)));

    for (i64 n = 0; n <= 20; ++n) {
        auto prod = mul(pochhammer(n, HalfExp(24)), inv_pochhammer(n, HalfExp(24)));
        CHECK(equal_below(prod, TruncatedQSeries::one(HalfExp(24)), HalfExp(24)));
    }
}

TEST_CASE("ring laws up to truncation on random series") {
    std::mt19937 rng(20260809);
    for (int trial = 0; trial < 200; ++trial) {
        auto a = random_series(rng), b = random_series(rng), c = random_series(rng);
        auto lhs = add(add(a, b), c);
        auto rhs = add(a, add(b, c));
        HalfExp o = std::min(lhs.order(), rhs.order());
        CHECK(equal_below(lhs, rhs, o));

        auto d1 = mul(a, add(b, c));
        auto d2 = add(mul(a, b), mul(a, c));
        HalfExp od = std::min(d1.order(), d2.order());
        CHECK(equal_below(truncate(d1, od), truncate(d2, od), od));

        auto m1 = mul(a, b), m2 = mul(b, a);
        CHECK(m1 == m2);
        if (!a.is_zero() && !b.is_zero()) CHECK(*valuation(m1) == *valuation(a) + *valuation(b));
    }
}

TEST_CASE("rendering is canonical") {
    CHECK(render(make({{0, 1}, {2, -1}, {4, -2}, {6, -2}}, 8)) == "1 - q - 2*q^2 - 2*q^3 + O(q^4)");
    CHECK(render(make({{1, -3}, {0, 1}, {2, -1}}, 7)) == "1 - 3*q^(1/2) - q + O(q^(7/2))");
    CHECK(render(make({{1, -3}, {2, -1}}, 7)) == "-3*q^(1/2) - q + O(q^(7/2))");
    CHECK(render(TruncatedQSeries::zero(HalfExp(8))) == "O(q^4)");
    CHECK(render(make({{-2, 1}}, 3)) == "q^(-1) + O(q^(3/2))");
}

TEST_CASE("bivariate basics") {
    const HalfExp ord(10);
    BiSeries p(0, 3, ord);
    p.set(1, TruncatedQSeries::one(ord));                              // x
    p.set(2, TruncatedQSeries::monomial(Int(1), HalfExp(2), ord));     // q x^2
    CHECK(equal_below(bi_extract(p, 2), make({{2, 1}}, 10), ord));
    CHECK_THROWS_AS(bi_extract(p, 4), WindowError);

    BiSeries x(0, 1, ord);
    x.set(1, TruncatedQSeries::one(ord));
    auto x2 = bi_mul(x, x);
    CHECK(equal_below(bi_extract(x2, 2), TruncatedQSeries::one(ord), ord));
    CHECK(bi_extract(x2, 1).is_zero());
    CHECK(bi_extract(x2, 0).is_zero());
}

TEST_CASE("bivariate binomial and geometric factors") {
    const HalfExp ord(12);
    // (1 - qx) * 1/(1 - qx) == 1 within the window
    auto p = BiSeries::one(0, 6, ord);
    bi_mul_binomial(p, -1, HalfExp(2), 1);
    bi_mul_inv_binomial(p, HalfExp(2), 1);
    CHECK(equal_below(bi_extract(p, 0), TruncatedQSeries::one(ord), ord));
    for (int e = 1; e <= 6; ++e) CHECK(bi_extract(p, e).is_zero());

    // x -> q^(1/2) x on x^2 gives factor q
    BiSeries s(0, 2, ord);
    s.set(2, TruncatedQSeries::one(ord));
    auto scaled = bi_scale_x(s, HalfExp(1));
    CHECK(equal_below(bi_extract(scaled, 2), make({{2, 1}}, 12), ord));
}

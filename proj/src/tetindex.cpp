#include "tindex/tetindex.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace tindex {

namespace {

constexpr i64 pos(i64 v) { return v > 0 ? v : 0; }

// 1 + q^k + q^{2k} + ... truncated (k >= 1)
TruncatedQSeries geometric(i64 k, HalfExp order) {
    TruncatedQSeries r = TruncatedQSeries::zero(order);
    for (i64 j = 0; HalfExp::whole(j * k) < order; ++j)
        r = add(r, TruncatedQSeries::monomial(Int(1), HalfExp::whole(j * k), order));
    return r;
}

// inv_poch[k] = 1/(q)_k for k = 0..kmax, all at `order`
std::vector<TruncatedQSeries> inv_poch_table(i64 kmax, HalfExp order) {
    std::vector<TruncatedQSeries> t;
    t.reserve(static_cast<std::size_t>(kmax + 1));
    t.push_back(TruncatedQSeries::one(order));
    for (i64 k = 1; k <= kmax; ++k) {
        if (HalfExp::whole(k) >= order) t.push_back(t.back());
        else t.push_back(mul(t.back(), geometric(k, order)));
    }
    return t;
}

} // namespace

HalfExp tet_degree(Charge c) {
    const i64 m = c.m, e = c.e;
    return HalfExp(pos(m) * pos(m + e) + pos(-m) * pos(e) + pos(-e) * pos(-e - m) +
                   std::max<i64>({0, m, -e}));
}

TruncatedQSeries tet_index(Charge c, HalfExp order) {
    const i64 m = c.m, e = c.e;
    const i64 n0 = std::max<i64>(0, -e);
    auto phi2 = [&](i64 n) { return n * (n + 1) - (2 * n + e) * m; }; // doubled term valuation

    i64 min_phi2 = phi2(std::max(n0, m - 1));
    min_phi2 = std::min(min_phi2, phi2(std::max(n0, m)));
    min_phi2 = std::min(min_phi2, phi2(n0));
    if (min_phi2 >= order.twice) return TruncatedQSeries::zero(order);

    i64 n_end = std::max(n0, m);
    while (phi2(n_end) < order.twice) ++n_end;

    const HalfExp table_order(order.twice - min_phi2);
    const i64 kmax = std::max(n_end, n_end + e);
    const auto invp = inv_poch_table(kmax, table_order);

    TruncatedQSeries result = TruncatedQSeries::zero(order);
    for (i64 n = n0; n < n_end; ++n) {
        const i64 p2 = phi2(n);
        if (p2 >= order.twice) continue;
        const HalfExp rel(order.twice - p2);
        TruncatedQSeries term = mul(truncate(invp[static_cast<std::size_t>(n)], rel),
                                    truncate(invp[static_cast<std::size_t>(n + e)], rel));
        result = add(result, monomial_shift(term, HalfExp(p2), n % 2 ? -1 : +1));
    }
    return result;
}

TruncatedQSeries TetIndexCache::at(Charge c, HalfExp order) {
    auto it = memo_.find(c);
    if (it == memo_.end() || it->second.order() < order)
        it = memo_.insert_or_assign(c, tet_index(c, order)).first;
    return truncate(it->second, order);
}

BiSeries dilog_series(i64 m, int x_min, int x_max, HalfExp q_order) {
    const int pad = 8 + static_cast<int>(std::llabs(m)) +
                    static_cast<int>(std::ceil(std::sqrt(2.0 * std::max<i64>(q_order.twice, 1))));
    const int lo = x_min - pad, hi = x_max + pad;

    // Factors with negative q-exponent pull truncated content back down, so
    // they run first (against small content) and the internal order carries
    // slack for their one-shot pull-down.
    std::vector<i64> num_bad, num_good, den_bad, den_good; // doubled exponents
    for (i64 i = 0;; ++i) {
        i64 c2 = 2 - m + 2 * i; // numerator factor (1 - q^(c2/2) x^(-1))
        if (c2 >= 0) break;
        num_bad.push_back(c2);
    }
    for (i64 i = 0;; ++i) {
        i64 c2 = -m + 2 * i; // denominator factor 1/(1 - q^(c2/2) x)
        if (c2 >= 0) break;
        den_bad.push_back(c2);
    }
    i64 slack2 = 4;
    for (i64 c2 : num_bad) slack2 += -c2;
    const HalfExp internal_order(q_order.twice + slack2);

    BiSeries p = BiSeries::one(lo, hi, internal_order);
    for (i64 c2 : den_bad) bi_mul_inv_binomial(p, HalfExp(c2), +1);
    for (i64 c2 : num_bad) bi_mul_binomial(p, -1, HalfExp(c2), -1);

    auto min_offset2 = [&]() {
        i64 v = internal_order.twice;
        for (int e = lo; e <= hi; ++e)
            if (!p.at(e).is_zero()) v = std::min(v, p.at(e).offset().twice);
        return v;
    };
    for (i64 i = static_cast<i64>(num_bad.size());; ++i) {
        i64 c2 = 2 - m + 2 * i;
        if (c2 >= internal_order.twice - min_offset2()) break;
        bi_mul_binomial(p, -1, HalfExp(c2), -1);
    }
    for (i64 i = static_cast<i64>(den_bad.size());; ++i) {
        i64 c2 = -m + 2 * i;
        if (c2 >= internal_order.twice - min_offset2()) break;
        bi_mul_inv_binomial(p, HalfExp(c2), +1);
    }

    BiSeries out(x_min, x_max, q_order);
    for (int e = x_min; e <= x_max; ++e) out.set(e, truncate(p.at(e), q_order));
    return out;
}

BiSeries f_series(i64 e, int x_max, HalfExp q_order) {
    BiSeries out(0, x_max, q_order);
    for (i64 n = std::max<i64>(0, -e); n <= x_max; ++n) {
        const i64 p2 = n * (n + 1); // doubled valuation of the x^n slot
        if (p2 >= q_order.twice) break;
        const HalfExp rel(q_order.twice - p2);
        TruncatedQSeries slot = mul(inv_pochhammer(n, rel), inv_pochhammer(n + e, rel));
        out.set(static_cast<int>(n), monomial_shift(slot, HalfExp(p2), n % 2 ? -1 : +1));
    }
    return out;
}

PentagonResult verify_pentagon(i64 m1, i64 m2, i64 e1, i64 e2, HalfExp order,
                               TetIndexCache& cache, int clip) {
    // doubled valuation of the e3-summand
    auto w2 = [&](i64 e3) {
        return 2 * e3 + tet_degree({m1, e1 + e3}).twice + tet_degree({m2, e2 + e3}).twice +
               tet_degree({m1 + m2, e3}).twice;
    };
    // Outside the breakpoints of the piecewise-quadratic w2 the function is a
    // single convex quadratic, so "above order and non-decreasing outward"
    // certifies the window is complete.
    const i64 bps[] = {-e1, -e1 - m1, -e2, -e2 - m2, 0, -m1 - m2};
    i64 lo = *std::min_element(std::begin(bps), std::end(bps)) - 1;
    i64 hi = *std::max_element(std::begin(bps), std::end(bps)) + 1;
    while (!(w2(lo) >= order.twice && w2(lo - 1) >= w2(lo))) --lo;
    while (!(w2(hi) >= order.twice && w2(hi + 1) >= w2(hi))) ++hi;

    PentagonResult res;
    res.e3_min = lo + 1 + clip;
    res.e3_max = hi - 1 - clip;

    TruncatedQSeries lhs = truncate(mul(cache.at({m1 - e2, e1}, order), cache.at({m2 - e1, e2}, order)), order);
    TruncatedQSeries rhs = TruncatedQSeries::zero(order);
    for (i64 e3 = res.e3_min; e3 <= res.e3_max; ++e3) {
        if (w2(e3) >= order.twice) continue;
        const HalfExp fo(order.twice + 2 * std::max<i64>(0, -e3));
        TruncatedQSeries t = mul(cache.at({m1, e1 + e3}, fo), cache.at({m2, e2 + e3}, fo));
        t = mul(t, cache.at({m1 + m2, e3}, fo));
        rhs = add(rhs, truncate(monomial_shift(t, HalfExp::whole(e3), +1), order));
    }
    res.residual = truncate(sub(lhs, rhs), order);
    res.ok = zero_below(res.residual, order);
    return res;
}

TruncatedQSeries rec1_residual(Charge c, HalfExp order, TetIndexCache& cache) {
    // q^(e/2) f(m+1,e) + q^(-m/2) f(m,e+1) - f(m,e)
    auto a = monomial_shift(cache.at({c.m + 1, c.e}, order - HalfExp(c.e)), HalfExp(c.e), +1);
    auto b = monomial_shift(cache.at({c.m, c.e + 1}, order + HalfExp(c.m)), HalfExp(-c.m), +1);
    return add(add(a, b), negate(cache.at(c, order)));
}

TruncatedQSeries rec2_residual(Charge c, HalfExp order, TetIndexCache& cache) {
    // q^(e/2) f(m-1,e) + q^(-m/2) f(m,e-1) - f(m,e)
    auto a = monomial_shift(cache.at({c.m - 1, c.e}, order - HalfExp(c.e)), HalfExp(c.e), +1);
    auto b = monomial_shift(cache.at({c.m, c.e - 1}, order + HalfExp(c.m)), HalfExp(-c.m), +1);
    return add(add(a, b), negate(cache.at(c, order)));
}

namespace {

// f multiplied by a sum of signed monomials sum_j sign_j q^(h2_j / 2)
TruncatedQSeries mul_monomials(Charge c, HalfExp order, TetIndexCache& cache,
                               std::initializer_list<std::pair<i64, int>> monomials) {
    i64 min_h2 = 0;
    for (auto& [h2, s] : monomials) min_h2 = std::min(min_h2, h2);
    TruncatedQSeries f = cache.at(c, order - HalfExp(min_h2));
    TruncatedQSeries r = TruncatedQSeries::zero(order);
    for (auto& [h2, s] : monomials) r = add(r, truncate(monomial_shift(f, HalfExp(h2), s), order));
    return r;
}

} // namespace

TruncatedQSeries rec1_3term_residual(Charge c, HalfExp order, TetIndexCache& cache) {
    // f(m,e+1) + (q^(e+m/2) - q^(-m/2) - q^(m/2)) f(m,e) + f(m,e-1)
    auto mid = mul_monomials(c, order, cache, {{2 * c.e + c.m, +1}, {-c.m, -1}, {c.m, -1}});
    return add(add(cache.at({c.m, c.e + 1}, order), mid), cache.at({c.m, c.e - 1}, order));
}

TruncatedQSeries rec2_3term_residual(Charge c, HalfExp order, TetIndexCache& cache) {
    // f(m+1,e) + (q^(-e/2-m) - q^(-e/2) - q^(e/2)) f(m,e) + f(m-1,e)
    auto mid = mul_monomials(c, order, cache, {{-c.e - 2 * c.m, +1}, {-c.e, -1}, {c.e, -1}});
    return add(add(cache.at({c.m + 1, c.e}, order), mid), cache.at({c.m - 1, c.e}, order));
}

TruncatedQSeries rec_e3term_residual(i64 e, HalfExp order, TetIndexCache& cache) {
    // f(0,e) - (2 - q^(e-1)) f(0,e-1) + f(0,e-2)
    auto mid = mul_monomials({0, e - 1}, order, cache, {{0, -1}, {0, -1}, {2 * (e - 1), +1}});
    return add(add(cache.at({0, e}, order), mid), cache.at({0, e - 2}, order));
}

TruncatedQSeries triality1_residual(Charge c, HalfExp order, TetIndexCache& cache) {
    // f(m,e) - (-q^(1/2))^(-e) f(e,-e-m)
    auto g = cache.at({c.e, -c.e - c.m}, order + HalfExp(c.e));
    auto shifted = monomial_shift(g, HalfExp(-c.e), c.e % 2 ? -1 : +1);
    return sub(cache.at(c, order), shifted);
}

TruncatedQSeries triality2_residual(Charge c, HalfExp order, TetIndexCache& cache) {
    // f(m,e) - (-q^(1/2))^m f(-e-m,m)
    auto g = cache.at({-c.e - c.m, c.m}, order - HalfExp(c.m));
    auto shifted = monomial_shift(g, HalfExp(c.m), c.m % 2 ? -1 : +1);
    return sub(cache.at(c, order), shifted);
}

bool parity_holds(Charge c, const TruncatedQSeries& s) {
    const i64 want = ((c.e * c.m) % 2 + 2) % 2;
    for (std::size_t i = 0; i < s.coeffs().size(); ++i) {
        if (s.coeffs()[i] == 0) continue;
        i64 t = s.offset().twice + static_cast<i64>(i);
        if (((t % 2) + 2) % 2 != want) return false;
    }
    return true;
}

IdentityCheck check_dilog_expansion(i64 m, int e_window, HalfExp q_order) {
    BiSeries L = dilog_series(m, -e_window, e_window, q_order);
    for (int e = -e_window; e <= e_window; ++e)
        if (!equal_below(bi_extract(L, e), tet_index({m, e}, q_order), q_order))
            return {false, "dilog coefficient mismatch at (m,e) = (" + std::to_string(m) + "," +
                               std::to_string(e) + ")"};
    return {};
}

namespace {

// prod_{i >= start} (1 - u q^i) on [0, window]; factors with i >= order act
// trivially on nonnegative-valuation content
BiSeries qpoch_inf(int start, int window, HalfExp order) {
    BiSeries p = BiSeries::one(0, window, order);
    for (i64 i = start;; ++i) {
        if (i >= 1 && HalfExp::whole(i) >= order) break;
        bi_mul_binomial(p, -1, HalfExp::whole(i), +1);
    }
    return p;
}

// prod_{i >= start} 1/(1 - u q^i) on [0, window]
BiSeries inv_qpoch_inf(int start, int window, HalfExp order) {
    BiSeries p = BiSeries::one(0, window, order);
    for (i64 i = start;; ++i) {
        if (i >= 1 && HalfExp::whole(i) >= order) break;
        bi_mul_inv_binomial(p, HalfExp::whole(i), +1);
    }
    return p;
}

// (y)_n = prod_{k=0}^{n-1} (1 - y q^k) as a polynomial in y
BiSeries qpoch_finite(i64 n, int window, HalfExp order) {
    BiSeries p = BiSeries::one(0, window, order);
    for (i64 k = 0; k < n; ++k) bi_mul_binomial(p, -1, HalfExp::whole(k), +1);
    return p;
}

} // namespace

IdentityCheck check_classical_qseries_identities(int x_window, HalfExp q_order) {
    const int X = x_window;
    const HalfExp T = q_order;
    auto fail = [](int id, int i, int j) {
        return IdentityCheck{false, "identity " + std::to_string(id) + " fails at x^" +
                                        std::to_string(i) + " y^" + std::to_string(j)};
    };

    // 1: 1/(x)_inf = sum_n x^n / (q)_n
    BiSeries inv_x = inv_qpoch_inf(0, X, T);
    for (int n = 0; n <= X; ++n)
        if (!equal_below(bi_extract(inv_x, n), inv_pochhammer(n, T), T)) return fail(1, n, 0);

    // 2: (xq)_inf = sum_n (-1)^n q^(n(n+1)/2) x^n / (q)_n
    BiSeries xq = qpoch_inf(1, X, T);
    for (int n = 0; n <= X; ++n) {
        TruncatedQSeries rhs = TruncatedQSeries::zero(T);
        i64 v2 = static_cast<i64>(n) * (n + 1);
        if (v2 < T.twice)
            rhs = monomial_shift(truncate(inv_pochhammer(n, HalfExp(T.twice - v2)), HalfExp(T.twice - v2)),
                                 HalfExp(v2), n % 2 ? -1 : +1);
        if (!equal_below(bi_extract(xq, n), rhs, T)) return fail(2, n, 0);
    }

    // 3: (xy)_inf / (x)_inf = sum_n (y)_n x^n / (q)_n
    BiSeries u_inf = qpoch_inf(0, X, T);
    for (int i = 0; i <= X; ++i) {
        BiSeries yp = qpoch_finite(i, X, T);
        for (int j = 0; j <= X; ++j) {
            TruncatedQSeries lhs = j <= i ? truncate(mul(bi_extract(u_inf, j), bi_extract(inv_x, i - j)), T)
                                          : TruncatedQSeries::zero(T);
            TruncatedQSeries rhs = truncate(mul(bi_extract(yp, j), inv_pochhammer(i, T)), T);
            if (!equal_below(lhs, rhs, T)) return fail(3, i, j);
        }
    }

    // 4: (xy)_inf / ((x)_inf (y)_inf) = sum_{r,s} q^(rs) x^r y^s / ((q)_r (q)_s)
    for (int i = 0; i <= X; ++i)
        for (int j = 0; j <= X; ++j) {
            TruncatedQSeries lhs = TruncatedQSeries::zero(T);
            for (int a = 0; a <= std::min(i, j); ++a)
                lhs = add(lhs, truncate(mul(mul(bi_extract(u_inf, a), bi_extract(inv_x, i - a)),
                                            bi_extract(inv_x, j - a)),
                                        T));
            i64 v2 = 2 * static_cast<i64>(i) * j;
            TruncatedQSeries rhs = TruncatedQSeries::zero(T);
            if (v2 < T.twice) {
                HalfExp rel(T.twice - v2);
                rhs = monomial_shift(mul(inv_pochhammer(i, rel), inv_pochhammer(j, rel)), HalfExp(v2), +1);
            }
            if (!equal_below(lhs, truncate(rhs, T), T)) return fail(4, i, j);
        }

    // 5: (xq)_inf (yq)_inf / (xyq)_inf
    //    = sum_{r,s} (-1)^(r+s) q^((r-s)^2/2 + (r+s)/2) x^r y^s / ((q)_r (q)_s)
    BiSeries inv_uq = inv_qpoch_inf(1, X, T);
    for (int i = 0; i <= X; ++i)
        for (int j = 0; j <= X; ++j) {
            TruncatedQSeries lhs = TruncatedQSeries::zero(T);
            for (int a = 0; a <= std::min(i, j); ++a)
                lhs = add(lhs, truncate(mul(mul(bi_extract(inv_uq, a), bi_extract(xq, i - a)),
                                            bi_extract(xq, j - a)),
                                        T));
            i64 v2 = static_cast<i64>(i - j) * (i - j) + i + j;
            TruncatedQSeries rhs = TruncatedQSeries::zero(T);
            if (v2 < T.twice) {
                HalfExp rel(T.twice - v2);
                rhs = monomial_shift(mul(inv_pochhammer(i, rel), inv_pochhammer(j, rel)), HalfExp(v2),
                                     (i + j) % 2 ? -1 : +1);
            }
            if (!equal_below(lhs, truncate(rhs, T), T)) return fail(5, i, j);
        }

    return {};
}

IdentityCheck check_f_generating(i64 e1, i64 e2, int n_window, HalfExp q_order) {
    const int N = n_window;
    const i64 big2 = q_order.twice + 2 * (std::llabs(e1) + std::llabs(e2)) * (N + 2) + 2;
    const HalfExp big(big2);

    // e3 below this cannot reach q_order: the F_{e3}(x1 x2) factor alone has
    // valuation e3 + (-e3)(-e3+1)/2
    i64 e3_min = 0;
    while (2 * e3_min + (-e3_min) * (-e3_min + 1) < q_order.twice) --e3_min;
    // diagonal slots beyond the window must all sit above q_order
    if (2 * e3_min + (N + 1) * (N + 2) < q_order.twice)
        throw std::invalid_argument("check_f_generating: n_window too small for this q_order");

    std::map<i64, BiSeries> ftab;
    for (i64 e = std::min({e1 + e3_min, e2 + e3_min, e3_min}); e <= std::max<i64>({e1, e2, 0}) + N; ++e)
        ftab.emplace(e, f_series(e, N, big));

    for (int n1 = 0; n1 <= N; ++n1)
        for (int n2 = 0; n2 <= N; ++n2) {
            i64 shift2 = 2 * (e1 * e2 + e2 * n1 + e1 * n2);
            TruncatedQSeries lhs = monomial_shift(
                mul(bi_extract(ftab.at(e1), n1), bi_extract(ftab.at(e2), n2)), HalfExp(shift2), +1);
            if (lhs.order() < q_order) throw std::logic_error("check_f_generating: base order too small");
            lhs = truncate(lhs, q_order);
            TruncatedQSeries rhs = TruncatedQSeries::zero(q_order);
            for (i64 e3 = e3_min; e3 <= std::min(n1, n2); ++e3)
                for (i64 j = std::max<i64>(0, -e3); e3 + j <= std::min(n1, n2) && j <= N; ++j) {
                    auto t = mul(mul(bi_extract(ftab.at(e1 + e3), static_cast<int>(n1 - e3 - j)),
                                     bi_extract(ftab.at(e2 + e3), static_cast<int>(n2 - e3 - j))),
                                 bi_extract(ftab.at(e3), static_cast<int>(j)));
                    t = monomial_shift(t, HalfExp::whole(e3), +1);
                    if (t.order() < q_order) throw std::logic_error("check_f_generating: term order too small");
                    rhs = add(rhs, truncate(t, q_order));
                }
            if (!equal_below(lhs, rhs, q_order))
                return {false, "generating pentagon fails at (e1,e2,n1,n2) = (" + std::to_string(e1) +
                                   "," + std::to_string(e2) + "," + std::to_string(n1) + "," +
                                   std::to_string(n2) + ")"};
        }
    return {};
}

} // namespace tindex

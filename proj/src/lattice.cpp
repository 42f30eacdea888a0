#include "tindex/lattice.hpp"

#include <algorithm>

#include "tindex/simplex.hpp"

namespace tindex {

namespace {

constexpr i64 pos(i64 v) { return v > 0 ? v : 0; }

// Valuation-pruned enumeration over integer boxes. All degree arithmetic is
// in doubled units so it stays integral.
struct BoxAccumulator {
    const IndexInput& M;
    const IVec& cm;
    const IVec& ce;
    HalfExp order;
    TetIndexCache& cache;
    TruncatedQSeries acc;
    i64 contributions = 0;

    BoxAccumulator(const IndexInput& m, const IVec& mm, const IVec& ee, HalfExp ord,
                   TetIndexCache& c)
        : M(m), cm(mm), ce(ee), order(ord), cache(c), acc(TruncatedQSeries::zero(ord)) {}

    // lower bound for 2*delta(M_i, E_i) over the rectangle [ml,mh] x [el,eh];
    // each of the four summands is coordinatewise monotone, so its minimum
    // sits at a known corner
    static i64 delta2_lb(i64 ml, i64 mh, i64 el, i64 eh) {
        return pos(ml) * pos(ml + el) + pos(-mh) * pos(el) + pos(-eh) * pos(-eh - mh) +
               std::max<i64>({0, ml, -eh});
    }

    i64 lower_bound2(const std::vector<i64>& lo, const std::vector<i64>& hi) const {
        const i64 R = M.rows(), s = M.cols();
        i64 bound = 0;
        for (i64 r = 0; r < R; ++r)
            bound += M.nu(r) * (M.nu(r) > 0 ? lo[static_cast<std::size_t>(r)] : hi[static_cast<std::size_t>(r)]);
        for (i64 i = 0; i < s; ++i) {
            i64 blo = 0, bhi = 0, alo = 0, ahi = 0;
            for (i64 r = 0; r < R; ++r) {
                i64 bc = M.B(r, i), ac = M.A(r, i);
                blo += bc * (bc > 0 ? lo[static_cast<std::size_t>(r)] : hi[static_cast<std::size_t>(r)]);
                bhi += bc * (bc > 0 ? hi[static_cast<std::size_t>(r)] : lo[static_cast<std::size_t>(r)]);
                alo += ac * (ac > 0 ? lo[static_cast<std::size_t>(r)] : hi[static_cast<std::size_t>(r)]);
                ahi += ac * (ac > 0 ? hi[static_cast<std::size_t>(r)] : lo[static_cast<std::size_t>(r)]);
            }
            bound += delta2_lb(cm(i) - bhi, cm(i) - blo, ce(i) + alo, ce(i) + ahi);
        }
        return bound;
    }

    void add_point(const std::vector<i64>& k) {
        const i64 R = M.rows(), s = M.cols();
        i64 weight2 = 0;
        for (i64 r = 0; r < R; ++r) weight2 += M.nu(r) * k[static_cast<std::size_t>(r)];
        std::vector<Charge> charges(static_cast<std::size_t>(s));
        std::vector<i64> d2(static_cast<std::size_t>(s));
        i64 total2 = weight2;
        for (i64 i = 0; i < s; ++i) {
            i64 bk = 0, ak = 0;
            for (i64 r = 0; r < R; ++r) {
                bk += M.B(r, i) * k[static_cast<std::size_t>(r)];
                ak += M.A(r, i) * k[static_cast<std::size_t>(r)];
            }
            charges[static_cast<std::size_t>(i)] = {cm(i) - bk, ce(i) + ak};
            d2[static_cast<std::size_t>(i)] = tet_degree(charges[static_cast<std::size_t>(i)]).twice;
            total2 += d2[static_cast<std::size_t>(i)];
        }
        if (total2 >= order.twice) return;
        ++contributions;
        i64 sum_d2 = total2 - weight2;
        TruncatedQSeries term;
        bool first = true;
        for (i64 i = 0; i < s; ++i) {
            HalfExp fo(order.twice - weight2 - (sum_d2 - d2[static_cast<std::size_t>(i)]));
            TruncatedQSeries factor = cache.at(charges[static_cast<std::size_t>(i)], fo);
            term = first ? factor : mul(term, factor);
            first = false;
        }
        // weight (-q^(1/2))^(nu.k): the sign is what makes the sum invariant
        // under the cyclic column action (the triality prefactors of the
        // rotated factors cancel against it)
        acc = add(acc, truncate(monomial_shift(term, HalfExp(weight2), weight2 % 2 != 0 ? -1 : +1), order));
    }

    void run(std::vector<i64>& lo, std::vector<i64>& hi) {
        if (lower_bound2(lo, hi) >= order.twice) return;
        i64 widest = -1, width = 0;
        for (std::size_t j = 0; j < lo.size(); ++j)
            if (hi[j] - lo[j] > width) {
                width = hi[j] - lo[j];
                widest = static_cast<i64>(j);
            }
        if (widest < 0) {
            add_point(lo);
            return;
        }
        std::size_t j = static_cast<std::size_t>(widest);
        i64 mid = lo[j] + (hi[j] - lo[j]) / 2;
        i64 saved_hi = hi[j], saved_lo = lo[j];
        hi[j] = mid;
        run(lo, hi);
        hi[j] = saved_hi;
        lo[j] = mid + 1;
        run(lo, hi);
        lo[j] = saved_lo;
    }

    // the faces with |k|_inf == t exactly, tiled disjointly
    void run_shell(i64 t) {
        const i64 R = M.rows();
        if (t == 0) {
            std::vector<i64> k(static_cast<std::size_t>(R), 0);
            add_point(k);
            return;
        }
        for (i64 j = 0; j < R; ++j)
            for (int sign : {-1, +1}) {
                std::vector<i64> lo(static_cast<std::size_t>(R)), hi(static_cast<std::size_t>(R));
                for (i64 l = 0; l < R; ++l) {
                    if (l < j) { lo[static_cast<std::size_t>(l)] = -t; hi[static_cast<std::size_t>(l)] = t; }
                    else if (l > j) { lo[static_cast<std::size_t>(l)] = -(t - 1); hi[static_cast<std::size_t>(l)] = t - 1; }
                    else { lo[static_cast<std::size_t>(l)] = hi[static_cast<std::size_t>(l)] = sign * t; }
                }
                run(lo, hi);
            }
    }
};

// smallest radius beyond which the strict-witness degree bound exceeds order
i64 certified_radius(const IndexInput& m, const IVec& cm, const IVec& ce,
                     const StructureWitness& w, HalfExp order) {
    const i64 R = m.rows(), s = m.cols();
    // gamma' = (1/2) min_i min(alpha_i, beta_i, gamma_i)
    Rational gp = w.alpha(0);
    for (i64 i = 0; i < s; ++i) gp = std::min({gp, w.alpha(i), w.beta(i), w.gamma(i)});
    gp /= 2;
    if (gp <= 0) throw std::logic_error("certified_radius: witness not strict");
    // constant C = (1/2) sum_i (gamma_i m_i - alpha_i e_i)
    Rational c_const = 0;
    for (i64 i = 0; i < s; ++i) c_const += w.gamma(i) * cm(i) - w.alpha(i) * ce(i);
    c_const /= 2;
    // c = min over the 2R faces |k_j| = 1 of sum_i (|a_i.k| + |b_i.k|),
    // each face an exact LP in (k, u, v)
    Rational c_norm;
    bool have_c = false;
    for (i64 j = 0; j < R; ++j)
        for (int sign : {-1, +1}) {
            lp::Problem p;
            p.num_vars = R + 2 * s;
            auto zero = [&]() { return RatVec::Zero(R + 2 * s); };
            for (i64 i = 0; i < s; ++i)
                for (int dir : {-1, +1}) {
                    RatVec ua = zero(); // u_i -+ a_i.k >= 0
                    ua(R + i) = 1;
                    for (i64 r = 0; r < R; ++r) ua(r) = dir * m.A(r, i);
                    p.constraints.push_back({ua, lp::Rel::Ge, Rational(0)});
                    RatVec ub = zero(); // v_i -+ b_i.k >= 0
                    ub(R + s + i) = 1;
                    for (i64 r = 0; r < R; ++r) ub(r) = dir * m.B(r, i);
                    p.constraints.push_back({ub, lp::Rel::Ge, Rational(0)});
                }
            for (i64 l = 0; l < R; ++l) {
                RatVec low = zero();
                low(l) = 1;
                if (l == j) {
                    p.constraints.push_back({low, lp::Rel::Eq, Rational(sign)});
                } else {
                    p.constraints.push_back({low, lp::Rel::Ge, Rational(-1)});
                    RatVec up = zero();
                    up(l) = -1;
                    p.constraints.push_back({up, lp::Rel::Ge, Rational(-1)});
                }
            }
            p.objective = RatVec::Zero(R + 2 * s);
            for (i64 i = 0; i < 2 * s; ++i) p.objective(R + i) = 1;
            auto sol = lp::solve(p);
            if (sol.status != lp::Status::Optimal)
                throw std::logic_error("certified_radius: face LP not solvable");
            if (!have_c || sol.value < c_norm) {
                c_norm = sol.value;
                have_c = true;
            }
        }
    if (!have_c || c_norm <= 0)
        throw std::logic_error("certified_radius: degenerate norm bound (rank?)");
    Rational c0 = 0;
    for (i64 i = 0; i < s; ++i) c0 += std::abs(cm(i)) + std::abs(ce(i));
    // degree(k) >= C + (gp/2) (c |k| - c0); enumerate |k| < t* where the
    // bound reaches the order
    Rational order_r(order.twice, 2);
    Rational t_star = ((order_r - c_const) * 2 / gp + c0) / c_norm;
    using boost::multiprecision::numerator;
    using boost::multiprecision::denominator;
    Int num = numerator(t_star), den = denominator(t_star);
    Int fl = num / den; // toward zero
    if (num < 0 && fl * den != num) fl -= 1;
    i64 radius = static_cast<i64>(fl);
    if (fl * den == num) radius -= 1; // strict inequality t < t*
    return std::max<i64>(radius, -1);
}

void gate_convergence(const IndexInput& m) {
    auto report = index_structure(m, /*full=*/false);
    if (!report.exists) {
        const QuadOutcome* fail = report.first_failure();
        throw DivergentError(fail->quad, *fail->ray);
    }
}

} // namespace

TruncatedQSeries index_sum_box(const IndexInput& m, const IVec& cm, const IVec& ce, HalfExp order,
                               i64 radius, TetIndexCache* cache) {
    TetIndexCache local;
    BoxAccumulator box(m, cm, ce, order, cache ? *cache : local);
    if (radius >= 0) {
        std::vector<i64> lo(static_cast<std::size_t>(m.rows()), -radius);
        std::vector<i64> hi(static_cast<std::size_t>(m.rows()), radius);
        box.run(lo, hi);
    }
    return box.acc;
}

IndexSumResult index_sum(const IndexInput& m, const IVec& cm, const IVec& ce,
                         const TruncationPolicy& policy, TetIndexCache* cache) {
    if (cm.size() != m.cols() || ce.size() != m.cols())
        throw std::invalid_argument("index_sum: charge vectors must have one entry per column");
    if (policy.window < 1) throw std::invalid_argument("index_sum: shell window must be at least 1");
    gate_convergence(m);

    TetIndexCache local;
    TetIndexCache& c = cache ? *cache : local;
    IndexSumResult result;

    if (policy.mode == TruncationMode::Certified) {
        if (auto w = strict_index_structure(m)) {
            i64 radius = certified_radius(m, cm, ce, *w, policy.order);
            result.series = index_sum_box(m, cm, ce, policy.order, radius, &c);
            result.certified = true;
            result.radius = radius;
            return result;
        }
        result.note = "no strict index structure; heuristic shell summation instead";
    }

    BoxAccumulator box(m, cm, ce, policy.order, c);
    int empty_streak = 0;
    i64 t = 0;
    for (; empty_streak < policy.window; ++t) {
        i64 before = box.contributions;
        box.run_shell(t);
        empty_streak = (box.contributions == before) ? empty_streak + 1 : 0;
    }
    result.series = box.acc;
    result.certified = false;
    result.radius = t - 1;
    return result;
}

IndexSumResult manifold_index(const GluingData& g, const QuadChoice& quad, const IVec& m,
                              const IVec& e, const TruncationPolicy& policy, TetIndexCache* cache) {
    if (m.size() != g.num_cusps || e.size() != g.num_cusps)
        throw std::invalid_argument("manifold_index: charges must have one entry per cusp");
    auto rs = reduce(g, quad);
    IndexInput M = select_rows(rs, g.num_cusps);
    auto p = reduce_peripheral(g, quad);
    IVec mm = p.d * m - p.b * e;
    IVec ee = -(p.c * m) + p.a * e;
    return index_sum(M, mm, ee, policy, cache);
}

IndexInput row_act(const IMat& p, const IndexInput& m) {
    if (p.rows() != m.rows() || p.cols() != m.rows())
        throw UnimodularError("row_act: square matrix matching the row count required");
    Int det = integer_det(p);
    if (det != 1 && det != -1)
        throw UnimodularError("row_act: determinant is " + det.str() + ", need a unit");
    IndexInput r;
    r.A = p * m.A;
    r.B = p * m.B;
    r.nu = p * m.nu;
    return r;
}

IndexInput col_act_S(const IndexInput& m, i64 col, int times) {
    if (col < 0 || col >= m.cols()) throw std::out_of_range("col_act_S: column out of range");
    IndexInput r = m;
    apply_col_s(r.A, r.B, r.nu, col, times);
    return r;
}

} // namespace tindex

#include "tindex/simplex.hpp"

#include <stdexcept>

namespace tindex::lp {

namespace {

// Dense tableau: rows 0..m-1 are constraints, row m is the objective
// (reduced costs); the last column is the right-hand side.
struct Tableau {
    RatMat t;
    std::vector<i64> basis; // basis[i] = column basic in row i
    i64 m = 0, n = 0;       // constraint rows, structural columns

    Rational& at(i64 r, i64 c) { return t(r, c); }
    Rational& rhs(i64 r) { return t(r, n); }

    void pivot(i64 r, i64 c) {
        Rational p = t(r, c);
        for (i64 j = 0; j <= n; ++j) t(r, j) /= p;
        for (i64 i = 0; i <= m; ++i) {
            if (i == r) continue;
            Rational f = t(i, c);
            if (f == 0) continue;
            for (i64 j = 0; j <= n; ++j) t(i, j) -= f * t(r, j);
        }
        basis[static_cast<std::size_t>(r)] = c;
    }

    // Bland: entering = lowest-index negative reduced cost among allowed
    // columns; leaving = min-ratio row, ties by lowest basis index.
    // Returns Optimal or Unbounded.
    Status run(const std::vector<bool>& allowed) {
        for (;;) {
            i64 enter = -1;
            for (i64 j = 0; j < n; ++j)
                if (allowed[static_cast<std::size_t>(j)] && t(m, j) < 0) { enter = j; break; }
            if (enter < 0) return Status::Optimal;
            i64 leave = -1;
            Rational best;
            for (i64 i = 0; i < m; ++i) {
                if (t(i, enter) <= 0) continue;
                Rational ratio = rhs(i) / t(i, enter);
                if (leave < 0 || ratio < best ||
                    (ratio == best && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave < 0) return Status::Unbounded;
            pivot(leave, enter);
        }
    }
};

} // namespace

Solution solve(const Problem& p) {
    const i64 nv = p.num_vars;
    const i64 m = static_cast<i64>(p.constraints.size());
    i64 slacks = 0;
    for (const Constraint& c : p.constraints)
        if (c.rel == Rel::Ge) ++slacks;

    // structural columns: x = pos - neg per variable, then slacks
    const i64 nstruct = 2 * nv + slacks;
    const i64 ntotal = nstruct + m; // + artificials
    Tableau tb;
    tb.m = m;
    tb.n = ntotal;
    tb.t = RatMat::Zero(m + 1, ntotal + 1);
    tb.basis.assign(static_cast<std::size_t>(m), -1);

    i64 slack_at = 2 * nv;
    for (i64 i = 0; i < m; ++i) {
        const Constraint& c = p.constraints[static_cast<std::size_t>(i)];
        if (c.coeffs.size() != nv) throw std::invalid_argument("simplex: constraint width mismatch");
        for (i64 j = 0; j < nv; ++j) {
            tb.at(i, 2 * j) = c.coeffs(j);
            tb.at(i, 2 * j + 1) = -c.coeffs(j);
        }
        if (c.rel == Rel::Ge) tb.at(i, slack_at++) = -1;
        tb.rhs(i) = c.rhs;
        if (tb.rhs(i) < 0)
            for (i64 j = 0; j <= ntotal; ++j) tb.at(i, j) = -tb.at(i, j);
        tb.at(i, nstruct + i) = 1; // artificial
        tb.basis[static_cast<std::size_t>(i)] = nstruct + i;
    }

    // Phase 1: minimize the artificial sum.
    for (i64 j = 0; j <= ntotal; ++j) {
        Rational s = 0;
        for (i64 i = 0; i < m; ++i) s += tb.at(i, j);
        tb.at(m, j) = (j < nstruct || j == ntotal) ? -s : Rational(0);
    }
    std::vector<bool> allow_all(static_cast<std::size_t>(ntotal), true);
    if (tb.run(allow_all) != Status::Optimal) throw std::logic_error("simplex: phase 1 unbounded");

    Rational infeas = 0;
    for (i64 i = 0; i < m; ++i)
        if (tb.basis[static_cast<std::size_t>(i)] >= nstruct) infeas += tb.rhs(i);
    if (infeas != 0) return {Status::Infeasible, {}, {}};

    // Drive any zero-level artificials out of the basis.
    std::vector<i64> keep_rows;
    for (i64 i = 0; i < m; ++i) {
        if (tb.basis[static_cast<std::size_t>(i)] < nstruct) { keep_rows.push_back(i); continue; }
        i64 col = -1;
        for (i64 j = 0; j < nstruct; ++j)
            if (tb.at(i, j) != 0) { col = j; break; }
        if (col >= 0) {
            tb.pivot(i, col);
            keep_rows.push_back(i);
        }
        // else: redundant row, dropped below
    }

    // Rebuild without artificial columns and dropped rows.
    Tableau t2;
    t2.m = static_cast<i64>(keep_rows.size());
    t2.n = nstruct;
    t2.t = RatMat::Zero(t2.m + 1, nstruct + 1);
    t2.basis.assign(static_cast<std::size_t>(t2.m), -1);
    for (i64 i = 0; i < t2.m; ++i) {
        for (i64 j = 0; j < nstruct; ++j) t2.at(i, j) = tb.at(keep_rows[static_cast<std::size_t>(i)], j);
        t2.rhs(i) = tb.rhs(keep_rows[static_cast<std::size_t>(i)]);
        t2.basis[static_cast<std::size_t>(i)] = tb.basis[static_cast<std::size_t>(keep_rows[static_cast<std::size_t>(i)])];
    }

    Status status = Status::Optimal;
    if (p.objective.size() != 0) {
        if (p.objective.size() != nv) throw std::invalid_argument("simplex: objective width mismatch");
        for (i64 j = 0; j < nv; ++j) {
            t2.at(t2.m, 2 * j) = p.objective(j);
            t2.at(t2.m, 2 * j + 1) = -p.objective(j);
        }
        for (i64 i = 0; i < t2.m; ++i) {
            Rational cb = t2.at(t2.m, t2.basis[static_cast<std::size_t>(i)]);
            if (cb != 0)
                for (i64 j = 0; j <= nstruct; ++j) t2.at(t2.m, j) -= cb * t2.at(i, j);
        }
        std::vector<bool> allowed(static_cast<std::size_t>(nstruct), true);
        status = t2.run(allowed);
        if (status == Status::Unbounded) return {Status::Unbounded, {}, {}};
    }

    RatVec point = RatVec::Zero(nv);
    for (i64 i = 0; i < t2.m; ++i) {
        i64 b = t2.basis[static_cast<std::size_t>(i)];
        if (b < 2 * nv) {
            if (b % 2 == 0) point(b / 2) += t2.rhs(i);
            else point(b / 2) -= t2.rhs(i);
        }
    }

    // Exact self-check: the point must satisfy every constraint.
    for (const Constraint& c : p.constraints) {
        Rational lhs = 0;
        for (i64 j = 0; j < nv; ++j) lhs += c.coeffs(j) * point(j);
        if (c.rel == Rel::Eq ? lhs != c.rhs : lhs < c.rhs)
            throw std::logic_error("simplex: solution fails exact verification");
    }

    Rational value = 0;
    for (i64 j = 0; j < p.objective.size(); ++j) value += p.objective(j) * point(j);
    return {status, point, value};
}

} // namespace tindex::lp

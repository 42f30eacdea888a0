#include "tindex/structures.hpp"

#include <stdexcept>

#include "tindex/simplex.hpp"

namespace tindex {

namespace {

// Margin formulation: maximize t subject to the designated coordinates being
// >= t and t <= 1; strictly feasible iff the optimum is positive.
struct MarginLp {
    lp::Problem problem; // variables: the caller's x, then t
    i64 num_x = 0;

    explicit MarginLp(i64 nx) : num_x(nx) {
        problem.num_vars = nx + 1;
        lp::Constraint cap;
        cap.coeffs = RatVec::Zero(nx + 1);
        cap.coeffs(nx) = -1; // -t >= -1
        cap.rel = lp::Rel::Ge;
        cap.rhs = -1;
        problem.constraints.push_back(cap);
        problem.objective = RatVec::Zero(nx + 1);
        problem.objective(nx) = -1; // min -t
    }

    void equality(const RatVec& coeffs, const Rational& rhs) {
        lp::Constraint c;
        c.coeffs = RatVec::Zero(num_x + 1);
        c.coeffs.head(num_x) = coeffs;
        c.rel = lp::Rel::Eq;
        c.rhs = rhs;
        problem.constraints.push_back(c);
    }

    // coeffs . x >= rhs + t
    void margin_row(const RatVec& coeffs, const Rational& rhs) {
        lp::Constraint c;
        c.coeffs = RatVec::Zero(num_x + 1);
        c.coeffs.head(num_x) = coeffs;
        c.coeffs(num_x) = -1;
        c.rel = lp::Rel::Ge;
        c.rhs = rhs;
        problem.constraints.push_back(c);
    }

    // coeffs . x >= rhs (no margin)
    void ge_row(const RatVec& coeffs, const Rational& rhs) {
        lp::Constraint c;
        c.coeffs = RatVec::Zero(num_x + 1);
        c.coeffs.head(num_x) = coeffs;
        c.rel = lp::Rel::Ge;
        c.rhs = rhs;
        problem.constraints.push_back(c);
    }

    // nullopt if no strictly-interior point exists
    std::optional<RatVec> solve_strict() {
        auto sol = lp::solve(problem);
        if (sol.status != lp::Status::Optimal || sol.value >= 0) return std::nullopt;
        return RatVec(sol.point.head(num_x));
    }
};

RatVec unit(i64 n, i64 i) {
    RatVec v = RatVec::Zero(n);
    v(i) = 1;
    return v;
}

} // namespace

bool is_strict(const StructureWitness& w) {
    for (i64 i = 0; i < w.alpha.size(); ++i)
        if (w.alpha(i) <= 0 || w.beta(i) <= 0 || w.gamma(i) <= 0) return false;
    return true;
}

bool is_nonnegative(const StructureWitness& w) {
    for (i64 i = 0; i < w.alpha.size(); ++i)
        if (w.alpha(i) < 0 || w.beta(i) < 0 || w.gamma(i) < 0) return false;
    return true;
}

bool witness_satisfies_quad(const StructureWitness& w, const std::vector<int>& quad) {
    for (i64 i = 0; i < static_cast<i64>(quad.size()); ++i) {
        const Rational& v = quad[static_cast<std::size_t>(i)] == 1   ? w.alpha(i)
                            : quad[static_cast<std::size_t>(i)] == 2 ? w.beta(i)
                                                                     : w.gamma(i);
        if (v <= 0) return false;
    }
    return true;
}

bool witness_valid(const IndexInput& m, const StructureWitness& w) {
    const i64 s = m.cols();
    if (w.alpha.size() != s || w.beta.size() != s || w.gamma.size() != s) return false;
    for (i64 i = 0; i < s; ++i)
        if (w.alpha(i) + w.beta(i) + w.gamma(i) != 1) return false;
    for (i64 r = 0; r < m.rows(); ++r) {
        Rational lhs = 0;
        for (i64 i = 0; i < s; ++i) lhs += m.A(r, i) * w.alpha(i) + m.B(r, i) * w.gamma(i);
        if (lhs != m.nu(r)) return false;
    }
    return true;
}

bool witness_valid_angles(const GluingData& g, const StructureWitness& w) {
    const i64 n = g.num_tet;
    if (w.alpha.size() != n || w.beta.size() != n || w.gamma.size() != n) return false;
    for (i64 i = 0; i < n; ++i)
        if (w.alpha(i) + w.beta(i) + w.gamma(i) != 1) return false;
    for (i64 r = 0; r < n; ++r) {
        Rational lhs = 0;
        for (i64 i = 0; i < n; ++i)
            lhs += g.edge_A(r, i) * w.alpha(i) + g.edge_B(r, i) * w.beta(i) + g.edge_C(r, i) * w.gamma(i);
        if (lhs != 2) return false;
    }
    return true;
}

StructureWitness witness_col_s(const StructureWitness& w, i64 col, int times) {
    StructureWitness r = w;
    times = ((times % 3) + 3) % 3;
    for (int k = 0; k < times; ++k) {
        Rational a = r.alpha(col), b = r.beta(col), c = r.gamma(col);
        r.alpha(col) = b;
        r.beta(col) = c;
        r.gamma(col) = a;
    }
    return r;
}

std::optional<StructureWitness> angle_structure(const GluingData& g, Positivity pos) {
    const i64 n = g.num_tet;
    const i64 nx = 3 * n; // alpha_0.., beta_0.., gamma_0..
    MarginLp mlp(nx);
    for (i64 r = 0; r < n; ++r) {
        RatVec row = RatVec::Zero(nx);
        for (i64 i = 0; i < n; ++i) {
            row(i) = g.edge_A(r, i);
            row(n + i) = g.edge_B(r, i);
            row(2 * n + i) = g.edge_C(r, i);
        }
        mlp.equality(row, 2);
    }
    for (i64 i = 0; i < n; ++i) {
        RatVec row = RatVec::Zero(nx);
        row(i) = row(n + i) = row(2 * n + i) = 1;
        mlp.equality(row, 1);
    }
    if (pos == Positivity::NonNegative)
        for (i64 j = 0; j < nx; ++j) mlp.ge_row(unit(nx, j), 0);
    if (pos == Positivity::Strict)
        for (i64 j = 0; j < nx; ++j) mlp.margin_row(unit(nx, j), 0);

    std::optional<RatVec> point;
    if (pos == Positivity::Strict) {
        point = mlp.solve_strict();
    } else {
        auto sol = lp::solve(mlp.problem);
        if (sol.status == lp::Status::Optimal) point = RatVec(sol.point.head(nx));
    }
    if (!point) return std::nullopt;
    StructureWitness w{point->segment(0, n), point->segment(n, n), point->segment(2 * n, n)};
    if (!witness_valid_angles(g, w)) throw std::logic_error("angle_structure: witness failed re-verification");
    if (pos == Positivity::NonNegative && !is_nonnegative(w))
        throw std::logic_error("angle_structure: witness not nonnegative");
    if (pos == Positivity::Strict && !is_strict(w))
        throw std::logic_error("angle_structure: witness not strict");
    return w;
}

namespace {

// Index-structure LP for one quad: variables (alpha, gamma), beta eliminated.
std::optional<StructureWitness> solve_quad(const IndexInput& m, const std::vector<int>& quad,
                                           bool all_strict) {
    const i64 s = m.cols();
    const i64 nx = 2 * s;
    MarginLp mlp(nx);
    for (i64 r = 0; r < m.rows(); ++r) {
        RatVec row = RatVec::Zero(nx);
        for (i64 i = 0; i < s; ++i) {
            row(i) = m.A(r, i);
            row(s + i) = m.B(r, i);
        }
        mlp.equality(row, m.nu(r));
    }
    auto strict_coord = [&](int which, i64 i) {
        RatVec row = RatVec::Zero(nx);
        Rational rhs = 0;
        if (which == 1) row(i) = 1;
        else if (which == 3) row(s + i) = 1;
        else { // beta_i = 1 - alpha_i - gamma_i
            row(i) = -1;
            row(s + i) = -1;
            rhs = -1;
        }
        mlp.margin_row(row, rhs);
    };
    for (i64 i = 0; i < s; ++i) {
        if (all_strict) {
            strict_coord(1, i);
            strict_coord(2, i);
            strict_coord(3, i);
        } else {
            strict_coord(quad[static_cast<std::size_t>(i)], i);
        }
    }
    auto point = mlp.solve_strict();
    if (!point) return std::nullopt;
    StructureWitness w;
    w.alpha = point->segment(0, s);
    w.gamma = point->segment(s, s);
    w.beta = RatVec::Ones(s) - w.alpha - w.gamma;
    if (!witness_valid(m, w)) throw std::logic_error("quad_structure: witness failed re-verification");
    return w;
}

void check_rank(const IndexInput& m) {
    IMat ab(m.rows(), 2 * m.cols());
    ab << m.A, m.B;
    i64 rk = rational_rank(ab);
    if (rk != m.rows())
        throw RankError("rank of (A|B) is " + std::to_string(rk) + ", expected " +
                        std::to_string(m.rows()));
}

// Dual/alternative system for an infeasible quad, solved exactly: multipliers
// lambda_i >= 0 (one per strict row) and mu (one per equality) with
//   sum_i lambda_i g_i + [A B]^T mu = 0,   nu.mu + sum_i h_i lambda_i >= 0,
// normalized by sum lambda = 1; k0 = -mu then satisfies the ray conditions.
RayCertificate farkas_ray(const IndexInput& m, const std::vector<int>& quad) {
    const i64 s = m.cols(), R = m.rows();
    lp::Problem p;
    p.num_vars = s + R; // lambda, mu
    auto row0 = [&]() { return RatVec::Zero(s + R); };
    for (i64 i = 0; i < s; ++i) { // alpha_i column
        RatVec c = row0();
        int q = quad[static_cast<std::size_t>(i)];
        if (q == 1) c(i) = 1;
        else if (q == 2) c(i) = -1;
        for (i64 r = 0; r < R; ++r) c(s + r) = m.A(r, i);
        p.constraints.push_back({c, lp::Rel::Eq, Rational(0)});
    }
    for (i64 i = 0; i < s; ++i) { // gamma_i column
        RatVec c = row0();
        int q = quad[static_cast<std::size_t>(i)];
        if (q == 2) c(i) = -1;
        else if (q == 3) c(i) = 1;
        for (i64 r = 0; r < R; ++r) c(s + r) = m.B(r, i);
        p.constraints.push_back({c, lp::Rel::Eq, Rational(0)});
    }
    for (i64 i = 0; i < s; ++i) {
        RatVec c = row0();
        c(i) = 1;
        p.constraints.push_back({c, lp::Rel::Ge, Rational(0)});
    }
    {
        RatVec c = row0(); // affine row: nu.mu - sum_{Q=2} lambda_i >= 0
        for (i64 r = 0; r < R; ++r) c(s + r) = m.nu(r);
        for (i64 i = 0; i < s; ++i)
            if (quad[static_cast<std::size_t>(i)] == 2) c(i) = -1;
        p.constraints.push_back({c, lp::Rel::Ge, Rational(0)});
    }
    {
        RatVec c = row0(); // normalization sum lambda = 1
        for (i64 i = 0; i < s; ++i) c(i) = 1;
        p.constraints.push_back({c, lp::Rel::Eq, Rational(1)});
    }
    auto sol = lp::solve(p);
    if (sol.status != lp::Status::Optimal)
        throw std::logic_error("farkas_ray: alternative system unexpectedly infeasible");
    RatVec mu = sol.point.tail(R);
    RayCertificate cert;
    cert.k0 = primitive_integer_direction(RatVec(-mu));
    cert.quad = quad;
    if (!cert.verify(m)) throw std::logic_error("farkas_ray: certificate failed verification");
    return cert;
}

} // namespace

bool RayCertificate::verify(const IndexInput& m) const {
    const i64 s = m.cols(), R = m.rows();
    if (k0.size() != R || static_cast<i64>(quad.size()) != s) return false;
    if (k0.isZero()) return false;
    auto dot_col = [&](const IMat& mat, i64 i) {
        Int acc = 0;
        for (i64 r = 0; r < R; ++r) acc += Int(mat(r, i)) * Int(k0(r));
        return acc;
    };
    Int slope = 0;
    for (i64 r = 0; r < R; ++r) slope += Int(m.nu(r)) * Int(k0(r));
    for (i64 i = 0; i < s; ++i) {
        Int a = dot_col(m.A, i), b = dot_col(m.B, i);
        switch (quad[static_cast<std::size_t>(i)]) {
            case 1:
                if (b != 0 || a < 0) return false;
                break;
            case 2:
                if (a != b || b > 0) return false;
                slope -= b;
                break;
            case 3:
                if (a != 0 || b < 0) return false;
                break;
            default:
                return false;
        }
    }
    return slope <= 0;
}

std::optional<StructureWitness> quad_structure(const IndexInput& m, const std::vector<int>& quad) {
    return solve_quad(m, quad, false);
}

const QuadOutcome* IndexStructureReport::first_failure() const {
    for (const QuadOutcome& o : outcomes)
        if (o.ray) return &o;
    return nullptr;
}

IndexStructureReport index_structure(const IndexInput& m, bool full) {
    check_rank(m);
    const i64 s = m.cols();
    IndexStructureReport report;
    report.exists = true;
    std::vector<StructureWitness> cache;
    std::vector<int> quad(static_cast<std::size_t>(s), 1);
    for (;;) {
        QuadOutcome outcome;
        outcome.quad = quad;
        const StructureWitness* hit = nullptr;
        for (const StructureWitness& w : cache)
            if (witness_satisfies_quad(w, quad)) { hit = &w; break; }
        if (hit) {
            outcome.witness = *hit;
        } else if (auto w = solve_quad(m, quad, false)) {
            cache.push_back(*w);
            outcome.witness = *w;
        } else {
            outcome.ray = farkas_ray(m, quad);
            report.exists = false;
        }
        bool failed = !report.exists && !full;
        report.outcomes.push_back(std::move(outcome));
        if (failed) break;
        // odometer over {1,2,3}^s
        i64 pos = 0;
        while (pos < s && quad[static_cast<std::size_t>(pos)] == 3) {
            quad[static_cast<std::size_t>(pos)] = 1;
            ++pos;
        }
        if (pos == s) break;
        ++quad[static_cast<std::size_t>(pos)];
    }
    return report;
}

std::optional<StructureWitness> strict_index_structure(const IndexInput& m) {
    check_rank(m);
    std::vector<int> dummy(static_cast<std::size_t>(m.cols()), 1);
    auto w = solve_quad(m, dummy, true);
    if (w && !is_strict(*w)) throw std::logic_error("strict_index_structure: witness not strict");
    return w;
}

} // namespace tindex

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "tindex/simplex.hpp"
#include "tindex/structures.hpp"

using namespace tindex;

namespace {

std::string fixture(const char* name) { return std::string(TINDEX_FIXTURE_DIR) + "/" + name; }

IndexInput make_input(std::initializer_list<std::initializer_list<i64>> a,
                      std::initializer_list<std::initializer_list<i64>> b,
                      std::initializer_list<i64> nu) {
    IndexInput m;
    i64 rows = static_cast<i64>(a.size());
    i64 cols = static_cast<i64>(a.begin()->size());
    m.A.resize(rows, cols);
    m.B.resize(rows, cols);
    m.nu.resize(rows);
    i64 r = 0;
    for (auto& row : a) {
        i64 c = 0;
        for (i64 v : row) m.A(r, c++) = v;
        ++r;
    }
    r = 0;
    for (auto& row : b) {
        i64 c = 0;
        for (i64 v : row) m.B(r, c++) = v;
        ++r;
    }
    r = 0;
    for (i64 v : nu) m.nu(r++) = v;
    return m;
}

// ---- Fourier-Motzkin oracle (independent of the simplex path) ----

enum class FmRel { Eq, Ge, Gt };
struct FmRow {
    RatVec c;
    FmRel rel;
    Rational rhs; // c . x REL rhs
};

bool fm_feasible(std::vector<FmRow> rows, i64 nvars) {
    for (i64 v = 0; v < nvars; ++v) {
        // substitute using an equality when possible
        i64 eq = -1;
        for (i64 i = 0; i < static_cast<i64>(rows.size()); ++i)
            if (rows[static_cast<std::size_t>(i)].rel == FmRel::Eq && rows[static_cast<std::size_t>(i)].c(v) != 0) {
                eq = i;
                break;
            }
        if (eq >= 0) {
            FmRow pivot = rows[static_cast<std::size_t>(eq)];
            rows.erase(rows.begin() + eq);
            for (FmRow& r : rows) {
                if (r.c(v) == 0) continue;
                Rational f = r.c(v) / pivot.c(v);
                r.c -= (pivot.c * f).eval();
                r.rhs -= f * pivot.rhs;
            }
            continue;
        }
        std::vector<FmRow> lower, upper, rest;
        for (FmRow& r : rows) {
            if (r.c(v) > 0) lower.push_back(r);      // x_v >= (...) / c
            else if (r.c(v) < 0) upper.push_back(r); // x_v <= (...) / c
            else rest.push_back(r);
        }
        for (const FmRow& lo : lower)
            for (const FmRow& up : upper) {
                // lo: c x >= rhs with c(v) > 0 ; up: c x >= rhs with c(v) < 0
                Rational cl = lo.c(v), cu = -up.c(v);
                FmRow combo;
                combo.c = (lo.c * cu + up.c * cl).eval();
                combo.rhs = lo.rhs * cu + up.rhs * cl;
                combo.c(v) = 0;
                combo.rel = (lo.rel == FmRel::Gt || up.rel == FmRel::Gt) ? FmRel::Gt : FmRel::Ge;
                rest.push_back(std::move(combo));
            }
        rows = std::move(rest);
    }
    for (const FmRow& r : rows) {
        if (r.rel == FmRel::Eq && r.rhs != 0) return false;
        if (r.rel == FmRel::Ge && r.rhs > 0) return false;
        if (r.rel == FmRel::Gt && r.rhs >= 0) return false;
    }
    return true;
}

bool fm_quad_feasible(const IndexInput& m, const std::vector<int>& quad) {
    const i64 s = m.cols();
    std::vector<FmRow> rows;
    for (i64 r = 0; r < m.rows(); ++r) {
        FmRow row;
        row.c = RatVec::Zero(2 * s);
        for (i64 i = 0; i < s; ++i) {
            row.c(i) = m.A(r, i);
            row.c(s + i) = m.B(r, i);
        }
        row.rel = FmRel::Eq;
        row.rhs = m.nu(r);
        rows.push_back(std::move(row));
    }
    for (i64 i = 0; i < s; ++i) {
        FmRow row;
        row.c = RatVec::Zero(2 * s);
        row.rel = FmRel::Gt;
        row.rhs = 0;
        int q = quad[static_cast<std::size_t>(i)];
        if (q == 1) row.c(i) = 1;
        else if (q == 3) row.c(s + i) = 1;
        else {
            row.c(i) = -1;
            row.c(s + i) = -1;
            row.rhs = -1;
        }
        rows.push_back(std::move(row));
    }
    return fm_feasible(std::move(rows), 2 * s);
}

GluingData one_tet(i64 a, i64 b, i64 c) {
    GluingData g;
    g.name = "synthetic";
    g.num_tet = 1;
    g.num_cusps = 1;
    g.edge_A = IMat::Constant(1, 1, a);
    g.edge_B = IMat::Constant(1, 1, b);
    g.edge_C = IMat::Constant(1, 1, c);
    PeripheralRow z{IVec::Zero(1), IVec::Zero(1), IVec::Zero(1)};
    g.cusps.push_back(Cusp{z, z});
    return g;
}

} // namespace

TEST_CASE("margin LP: x = 1 with x > 0 is strictly feasible") {
    lp::Problem p;
    p.num_vars = 2; // x, t
    RatVec eq(2);
    eq << 1, 0;
    p.constraints.push_back({eq, lp::Rel::Eq, Rational(1)});
    RatVec strict(2);
    strict << 1, -1;
    p.constraints.push_back({strict, lp::Rel::Ge, Rational(0)});
    RatVec cap(2);
    cap << 0, -1;
    p.constraints.push_back({cap, lp::Rel::Ge, Rational(-1)});
    p.objective = RatVec(2);
    p.objective << 0, -1;
    auto sol = lp::solve(p);
    REQUIRE(sol.status == lp::Status::Optimal);
    CHECK(sol.value < 0);
    CHECK(sol.point(0) == 1);
}

TEST_CASE("simplex status edges: unbounded objective and contradictory equalities") {
    lp::Problem p;
    p.num_vars = 1;
    RatVec pos(1);
    pos << 1;
    p.constraints.push_back({pos, lp::Rel::Ge, Rational(0)});
    p.objective = RatVec(1);
    p.objective << -1; // min -x with x >= 0
    CHECK(lp::solve(p).status == lp::Status::Unbounded);

    lp::Problem q;
    q.num_vars = 1;
    RatVec one(1);
    one << 1;
    q.constraints.push_back({one, lp::Rel::Eq, Rational(1)});
    q.constraints.push_back({one, lp::Rel::Eq, Rational(2)});
    CHECK(lp::solve(q).status == lp::Status::Infeasible);

    // redundant duplicated equality is not infeasible
    lp::Problem r;
    r.num_vars = 1;
    r.constraints.push_back({one, lp::Rel::Eq, Rational(1)});
    r.constraints.push_back({one, lp::Rel::Eq, Rational(1)});
    auto sol = lp::solve(r);
    REQUIRE(sol.status == lp::Status::Optimal);
    CHECK(sol.point(0) == 1);
}

TEST_CASE("x = -1 with x > 0 is infeasible and yields a verified ray") {
    auto m = make_input({{1}}, {{0}}, {-1});
    auto report = index_structure(m);
    CHECK(!report.exists);
    REQUIRE(report.first_failure() != nullptr);
    REQUIRE(report.first_failure()->ray.has_value());
    CHECK(report.first_failure()->ray->verify(m));
}

TEST_CASE("alpha + 2 beta + 2 gamma = 2 forces alpha = 0") {
    auto g = one_tet(1, 2, 2);
    CHECK(!strict_angle_structure(g).has_value());
    auto semi = semi_angle_structure(g);
    REQUIRE(semi.has_value());
    CHECK(semi->alpha(0) == 0);
}

TEST_CASE("degenerate-edge fixture admits no strict angle structure") {
    auto g = load_gluing_file(fixture("degenerate_edge.json"));
    CHECK(!strict_angle_structure(g).has_value());
    CHECK(semi_angle_structure(g).has_value());
}

TEST_CASE("m136: semi-strict yes, strict no") {
    auto g = load_gluing_file(fixture("m136.json"));
    auto semi = semi_angle_structure(g);
    REQUIRE(semi.has_value());
    CHECK(is_nonnegative(*semi));
    CHECK(!strict_angle_structure(g).has_value());
    CHECK(generalized_angle_structure(g).has_value());
}

TEST_CASE("m064: no semi-angle structure, but generalized exists") {
    auto g = load_gluing_file(fixture("m064.json"));
    CHECK(!semi_angle_structure(g).has_value());
    CHECK(generalized_angle_structure(g).has_value());
}

TEST_CASE("the eleven m136 vertices satisfy the angle equations exactly") {
    auto g = load_gluing_file(fixture("m136.json"));
    const char* table[11] = {
        "0,0,1, 1,0,0, 0,0,1, 1,0,0, 0,0,1, 0,1,0, 0,0,1",
        "0,1,0, 0,1,0, 0,0,1, 1,0,0, 1,0,0, 0,1,0, 1,0,0",
        "1,0,0, 1,0,0, 0,1,0, 1,0,0, 0,0,1, 0,1,0, 0,1,0",
        "1,0,0, 1,0,0, 0,0,1, 1,0,0, 0,1,0, 0,1,0, 0,0,1",
        "1/2,1/2,0, 1,0,0, 0,1/2,1/2, 1/2,1/2,0, 0,0,1, 0,1,0, 1/2,0,1/2",
        "1/2,1/2,0, 1,0,0, 0,1/2,1/2, 1/2,0,1/2, 0,0,1, 0,1,0, 1/2,0,1/2",
        "1/2,1/2,0, 1,0,0, 1/2,0,1/2, 1/2,1/2,0, 0,0,1, 0,1,0, 0,0,1",
        "1/2,1/2,0, 1,0,0, 1/2,0,1/2, 1/2,0,1/2, 0,0,1, 0,1,0, 0,0,1",
        "1/2,1/2,0, 1/2,0,1/2, 0,0,1, 1,0,0, 1/2,0,1/2, 0,1,0, 1/2,0,1/2",
        "1/2,1/2,0, 1/2,1/2,0, 1/2,0,1/2, 1,0,0, 1/2,0,1/2, 0,1,0, 0,1/2,1/2",
        "2/3,1/3,0, 2/3,0,1/3, 1/3,0,2/3, 1,0,0, 1/3,0,2/3, 0,1,0, 0,1/3,2/3",
    };
    for (int v = 0; v < 11; ++v) {
        StructureWitness w;
        w.alpha.resize(7);
        w.beta.resize(7);
        w.gamma.resize(7);
        std::string row(table[v]);
        for (char& ch : row)
            if (ch == ',') ch = ' ';
        std::istringstream in(row);
        for (int t = 0; t < 7; ++t) {
            std::string a, b, c;
            in >> a >> b >> c;
            w.alpha(t) = Rational(a);
            w.beta(t) = Rational(b);
            w.gamma(t) = Rational(c);
        }
        CAPTURE(v);
        CHECK(witness_valid_angles(g, w));
        CHECK(is_nonnegative(w));
        // tetrahedron 6 pins (alpha, beta, gamma) = (t, 1, -t); at vertices t = 0
        CHECK(w.beta(5) == 1);
    }
}

TEST_CASE("pentagon input (1 1 1 | 0 0 0 | 2) supports strict and full index structures") {
    auto m = make_input({{1, 1, 1}}, {{0, 0, 0}}, {2});
    StructureWitness manual;
    manual.alpha = RatVec::Constant(3, Rational(2, 3));
    manual.beta = RatVec::Constant(3, Rational(1, 6));
    manual.gamma = RatVec::Constant(3, Rational(1, 6));
    CHECK(witness_valid(m, manual));
    CHECK(is_strict(manual));
    auto strict = strict_index_structure(m);
    REQUIRE(strict.has_value());
    CHECK(is_strict(*strict));
    CHECK(witness_valid(m, *strict));
    auto report = index_structure(m, /*full=*/true);
    CHECK(report.exists);
    CHECK(report.outcomes.size() == 27);
}

TEST_CASE("intro example: (1 | 0 | 2v) accepted iff v > 0") {
    for (i64 v = -2; v <= 3; ++v) {
        auto m = make_input({{1}}, {{0}}, {2 * v});
        auto report = index_structure(m);
        CAPTURE(v);
        CHECK(report.exists == (v > 0));
        if (v <= 0) {
            REQUIRE(report.first_failure());
            CHECK(report.first_failure()->ray->verify(m));
        }
    }
}

TEST_CASE("m136 supports an index structure but not a strict one") {
    auto g = load_gluing_file(fixture("m136.json"));
    auto m = index_input(g, default_quad(g.num_tet));
    CHECK(!strict_index_structure(m).has_value());
    auto report = index_structure(m, /*full=*/true);
    CHECK(report.exists);
    CHECK(report.outcomes.size() == 2187);
    for (const auto& o : report.outcomes) {
        REQUIRE(o.witness.has_value());
        CHECK(witness_valid(m, *o.witness));
        CHECK(witness_satisfies_quad(*o.witness, o.quad));
    }
}

TEST_CASE("rank-deficient input raises RankError") {
    auto m = make_input({{1, 1}, {2, 2}}, {{0, 0}, {0, 0}}, {2, 4});
    CHECK_THROWS_AS(index_structure(m), RankError);
    CHECK_THROWS_AS(strict_index_structure(m), RankError);
}

TEST_CASE("LP feasibility agrees with Fourier-Motzkin on random systems") {
    std::mt19937 rng(424242);
    std::uniform_int_distribution<i64> entry(-2, 2), rhs(-3, 3);
    int systems = 0;
    for (int trial = 0; systems < 40 && trial < 500; ++trial) {
        IndexInput m;
        m.A.resize(2, 3);
        m.B.resize(2, 3);
        m.nu.resize(2);
        for (i64 r = 0; r < 2; ++r) {
            for (i64 c = 0; c < 3; ++c) {
                m.A(r, c) = entry(rng);
                m.B(r, c) = entry(rng);
            }
            m.nu(r) = rhs(rng);
        }
        IMat ab(2, 6);
        ab << m.A, m.B;
        if (rational_rank(ab) != 2) continue;
        ++systems;
        std::vector<int> quad(3, 1);
        for (;;) {
            bool lp_ok = quad_structure(m, quad).has_value();
            bool fm_ok = fm_quad_feasible(m, quad);
            CAPTURE(systems);
            CHECK(lp_ok == fm_ok);
            i64 pos = 0;
            while (pos < 3 && quad[static_cast<std::size_t>(pos)] == 3) {
                quad[static_cast<std::size_t>(pos)] = 1;
                ++pos;
            }
            if (pos == 3) break;
            ++quad[static_cast<std::size_t>(pos)];
        }
    }
    CHECK(systems == 40);
}

TEST_CASE("strict index structure implies index structure; rays verify") {
    std::mt19937 rng(777);
    std::uniform_int_distribution<i64> entry(-2, 2), rhs(-2, 2);
    int checked = 0;
    for (int trial = 0; trial < 300 && checked < 60; ++trial) {
        IndexInput m;
        m.A.resize(1, 2);
        m.B.resize(1, 2);
        m.nu.resize(1);
        for (i64 c = 0; c < 2; ++c) {
            m.A(0, c) = entry(rng);
            m.B(0, c) = entry(rng);
        }
        m.nu(0) = rhs(rng);
        IMat ab(1, 4);
        ab << m.A, m.B;
        if (rational_rank(ab) != 1) continue;
        ++checked;
        auto report = index_structure(m, /*full=*/true);
        if (strict_index_structure(m).has_value()) CHECK(report.exists);
        for (const auto& o : report.outcomes)
            if (o.ray) CHECK(o.ray->verify(m));
    }
    CHECK(checked == 60);
}

TEST_CASE("witness column action produces a witness of the rotated input") {
    auto m = make_input({{1, 1, 1}}, {{0, 0, 0}}, {2});
    auto w = strict_index_structure(m);
    REQUIRE(w.has_value());
    IndexInput sm = m;
    apply_col_s(sm.A, sm.B, sm.nu, 1, 1);
    auto sw = witness_col_s(*w, 1, 1);
    CHECK(witness_valid(sm, sw));
}

#pragma once

// Minimal exact-rational two-phase simplex with Bland's rule. Problem sizes
// here are tiny (tens of rows/columns), so clarity and exactness win over
// sparse cleverness. All variables are free; sign restrictions are encoded by
// the caller as inequality rows.

#include <vector>

#include "tindex/numeric.hpp"

namespace tindex::lp {

enum class Rel { Eq, Ge };

struct Constraint {
    RatVec coeffs; // length num_vars
    Rel rel = Rel::Eq;
    Rational rhs;
};

struct Problem {
    i64 num_vars = 0;
    std::vector<Constraint> constraints;
    RatVec objective; // minimized; empty = pure feasibility
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
    Status status = Status::Infeasible;
    RatVec point;   // a feasible/optimal assignment when not Infeasible
    Rational value; // objective at point (0 for feasibility problems)
};

Solution solve(const Problem& p);

// Convenience: is there any x with the given constraints?
inline bool feasible(const Problem& p) { return solve(p).status != Status::Infeasible; }

} // namespace tindex::lp

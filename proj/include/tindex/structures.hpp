#pragma once

// Exact rational feasibility for angle structures on gluing data and
// index structures on (A | B | nu) inputs, with dual ray certificates for the
// divergent case.

#include <optional>
#include <vector>

#include "tindex/nzdata.hpp"
#include "tindex/numeric.hpp"

namespace tindex {

struct StructureWitness {
    RatVec alpha, beta, gamma; // length s each
};

enum class Positivity { None, NonNegative, Strict };

// Solutions of the edge equations (sum of angles around every edge is 2,
// angles of each tetrahedron sum to 1) with the requested positivity.
std::optional<StructureWitness> angle_structure(const GluingData& g, Positivity pos);
inline std::optional<StructureWitness> generalized_angle_structure(const GluingData& g) {
    return angle_structure(g, Positivity::None);
}
inline std::optional<StructureWitness> semi_angle_structure(const GluingData& g) {
    return angle_structure(g, Positivity::NonNegative);
}
inline std::optional<StructureWitness> strict_angle_structure(const GluingData& g) {
    return angle_structure(g, Positivity::Strict);
}

// Integer direction along which the lattice sum fails to converge. The sign
// conditions per quad value, all on the columns a_i, b_i of the input:
//   1: b.k0 = 0 and a.k0 >= 0
//   2: (a-b).k0 = 0 and b.k0 <= 0
//   3: a.k0 = 0 and b.k0 >= 0
// plus the slope condition nu.k0 - sum_{Q(i)=2} b_i.k0 <= 0.
struct RayCertificate {
    IVec k0;               // nonzero, length R
    std::vector<int> quad; // length s, values in {1,2,3}
    bool verify(const IndexInput& m) const;
};

struct QuadOutcome {
    std::vector<int> quad;
    std::optional<StructureWitness> witness;
    std::optional<RayCertificate> ray;
};

struct IndexStructureReport {
    bool exists = false;
    // One outcome per enumerated quad: all 3^s of them under `full`,
    // otherwise up to and including the first infeasible quad.
    std::vector<QuadOutcome> outcomes;
    const QuadOutcome* first_failure() const;
};

// Requires rank(A|B) == rows (RankError otherwise). exists == true iff every
// quad admits a witness; infeasible quads carry a verified RayCertificate.
IndexStructureReport index_structure(const IndexInput& m, bool full = false);

// One solution with all 3s coordinates positive, if any (RankError as above).
std::optional<StructureWitness> strict_index_structure(const IndexInput& m);

// Single-quad solve: witness positive in the quad-selected coordinates.
std::optional<StructureWitness> quad_structure(const IndexInput& m, const std::vector<int>& quad);

bool witness_satisfies_quad(const StructureWitness& w, const std::vector<int>& quad);
bool is_strict(const StructureWitness& w);
bool is_nonnegative(const StructureWitness& w);
// Exact substitution: A alpha + B gamma = nu and alpha + beta + gamma = 1.
bool witness_valid(const IndexInput& m, const StructureWitness& w);
// Exact substitution into the unreduced angle equations.
bool witness_valid_angles(const GluingData& g, const StructureWitness& w);

// Cyclic action on one tetrahedron's coordinates: (a,b,c) -> (b,c,a).
StructureWitness witness_col_s(const StructureWitness& w, i64 col, int times);

} // namespace tindex

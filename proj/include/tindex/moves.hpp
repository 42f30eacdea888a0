#pragma once

// 2-3 and 3-2 moves on gluing data, the angle-structure maps between the two
// sides, and the special-structure predicate that governs 2->3 invariance.
// Everything operates at the exponent-matrix level; face-pairing
// combinatorics are the caller's responsibility via the site's alignment
// rotations.

#include <optional>

#include "tindex/nzdata.hpp"
#include "tindex/structures.hpp"

namespace tindex {

struct MoveSite {
    std::vector<i64> tets;  // two (2->3) or three (3->2) distinct indices
    std::vector<int> align; // cyclic relabeling per site tetrahedron, mod 3
};

// Replaces the two site tetrahedra by three around a new internal edge.
// Output layout: the new tetrahedra are columns 0,1,2; the new edge row comes
// first; remaining columns/rows keep their order.
GluingData two_three(const GluingData& g, const MoveSite& site);

// Inverse move: the three site tetrahedra must surround an internal edge
// whose row matches the 1,1,1 pattern on their middle variables (after
// alignment); PatternError otherwise, or when the free variable fails to drop
// out of a row. Output: the two replacement tetrahedra are columns 0,1; the
// internal edge row is removed.
GluingData three_two(const GluingData& g, const MoveSite& site);

// Angle map from two_three(g, site) back to g: the bipyramid's longitudinal
// sums. Strictness is preserved.
StructureWitness mu_32(const GluingData& g, const MoveSite& site, const StructureWitness& on_output);

// Section of mu_32: lifts a witness of g to two_three(g, site) given the free
// top angle w1. With require_strict, returns nullopt unless every resulting
// angle is positive.
std::optional<StructureWitness> mu_23(const GluingData& g, const MoveSite& site,
                                      const StructureWitness& w, const Rational& w1,
                                      bool require_strict = true);

// The three equatorial angle sums of the bipyramid are all < 1. Requires a
// strict witness to be meaningful.
bool special_strict(const StructureWitness& w, const MoveSite& site);

// For a strict witness satisfying the special condition, the open interval of
// valid w1 values for mu_23; empty otherwise.
std::optional<std::pair<Rational, Rational>> mu_23_interval(const StructureWitness& w,
                                                            const MoveSite& site);

// Canonical form deciding equality of gluing data up to integer row
// operations on the edge system, per-row shifts by tetrahedron-sum
// differences, and the cyclic column action.
struct GluingNormalForm {
    IMat edge_lattice;  // Hermite form of the augmented edge rows plus the
                        // tetrahedron-sum shift generators
    IMat peripherals;   // gauge-reduced peripheral rows, augmented
    friend bool operator==(const GluingNormalForm& x, const GluingNormalForm& y) {
        return same(x.edge_lattice, y.edge_lattice) && same(x.peripherals, y.peripherals);
    }
};

GluingNormalForm normal_form(const GluingData& g);

// Integer Hermite normal form (row lattice canonical form).
IMat hermite_normal_form(IMat m);

} // namespace tindex

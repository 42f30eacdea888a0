#pragma once

// Lattice sums: the convergence-gated series I_M over Z^R, the manifold index
// through the peripheral charge map, and the row/column actions the sums are
// invariant under.

#include <optional>
#include <string>

#include "tindex/nzdata.hpp"
#include "tindex/structures.hpp"
#include "tindex/tetindex.hpp"

namespace tindex {

// The input admits no index structure; carries the failing quad's ray.
class DivergentError : public std::runtime_error {
public:
    DivergentError(std::vector<int> failing_quad, RayCertificate certificate)
        : std::runtime_error("lattice sum diverges: no index structure"),
          quad(std::move(failing_quad)),
          ray(std::move(certificate)) {}
    std::vector<int> quad;
    RayCertificate ray;
};

enum class TruncationMode { Certified, Shell };

struct TruncationPolicy {
    TruncationMode mode = TruncationMode::Shell;
    HalfExp order;
    int window = 4; // Shell: stop after this many empty shells
};

struct IndexSumResult {
    TruncatedQSeries series;
    bool certified = false; // false = heuristic shell stop
    i64 radius = 0;         // certified bound or the last shell scanned
    std::string note;
};

// sum_{k in Z^R} q^{(nu.k)/2} prod_i I(m_i - b_i.k, e_i + a_i.k), truncated.
// Convergence is gated by index_structure first (DivergentError otherwise).
// Certified mode needs a strict index structure: the witness turns the degree
// bound into an enumeration radius; without one it falls back to Shell with a
// note. Shell mode scans L-infinity shells and stops heuristically.
IndexSumResult index_sum(const IndexInput& m, const IVec& charges_m, const IVec& charges_e,
                         const TruncationPolicy& policy, TetIndexCache* cache = nullptr);

// Exact sum over the box |k|_inf <= radius (valuation-pruned); the
// enumeration core of both modes and the radius-doubling oracle.
TruncatedQSeries index_sum_box(const IndexInput& m, const IVec& charges_m, const IVec& charges_e,
                               HalfExp order, i64 radius, TetIndexCache* cache = nullptr);

// I_T(m,e) = I_M(d m - b e, -c m + a e) with (a,b,c,d) from the peripheral
// reduction and M from reduce + select_rows.
IndexSumResult manifold_index(const GluingData& g, const QuadChoice& quad, const IVec& m,
                              const IVec& e, const TruncationPolicy& policy,
                              TetIndexCache* cache = nullptr);

// (PA | PB | P nu) for unimodular P (UnimodularError otherwise).
IndexInput row_act(const IMat& p, const IndexInput& m);

// Cyclic action on column i; three applications are the identity.
IndexInput col_act_S(const IndexInput& m, i64 col, int times = 1);

} // namespace tindex

#pragma once

// Gluing data of an ideal triangulation: the Neumann-Zagier exponent
// matrices, quad reduction to the (A | B | nu) form, deterministic row
// selection, and peripheral-curve reduction.

#include <string>
#include <vector>

#include "tindex/errors.hpp"
#include "tindex/numeric.hpp"

namespace tindex {

inline bool same(const IMat& a, const IMat& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}
inline bool same(const IVec& a, const IVec& b) {
    return a.size() == b.size() && (a.array() == b.array()).all();
}

// One peripheral curve's exponents, grouped by the Z / Z' / Z'' variables.
struct PeripheralRow {
    IVec on_z, on_zp, on_zpp; // each length N
    friend bool operator==(const PeripheralRow& x, const PeripheralRow& y) {
        return same(x.on_z, y.on_z) && same(x.on_zp, y.on_zp) && same(x.on_zpp, y.on_zpp);
    }
};

struct Cusp {
    PeripheralRow meridian;
    PeripheralRow longitude;
    friend bool operator==(const Cusp& x, const Cusp& y) {
        return x.meridian == y.meridian && x.longitude == y.longitude;
    }
};

struct GluingData {
    std::string name;
    i64 num_tet = 0;   // N
    i64 num_cusps = 0; // r
    // rows = edges (N of them for torus boundary), columns = tetrahedra
    IMat edge_A, edge_B, edge_C;
    std::vector<Cusp> cusps;

    friend bool operator==(const GluingData& x, const GluingData& y) {
        return x.name == y.name && x.num_tet == y.num_tet && x.num_cusps == y.num_cusps &&
               same(x.edge_A, y.edge_A) && same(x.edge_B, y.edge_B) && same(x.edge_C, y.edge_C) &&
               x.cusps == y.cusps;
    }
};

GluingData parse_gluing(const std::string& bytes); // SchemaError on malformed input
std::string serialize_gluing(const GluingData& g);
GluingData load_gluing_file(const std::string& path);

// Non-fatal data checks (a genuine triangulation has six edge slots per
// tetrahedron).
std::vector<std::string> lint_gluing(const GluingData& g);

// Per-tetrahedron number of cyclic rotations away from the default quad
// (which keeps Z and Z'' and eliminates Z'). Values taken mod 3.
using QuadChoice = std::vector<int>;

inline QuadChoice default_quad(i64 n) { return QuadChoice(static_cast<std::size_t>(n), 0); }

// Full quad-reduced edge system: A alpha + B gamma = nu over all N rows.
struct ReducedSystem {
    IMat A, B; // N x N
    IVec nu;   // length N
};

struct IndexInput {
    IMat A, B; // R x s
    IVec nu;   // length R
    i64 rows() const { return A.rows(); }
    i64 cols() const { return A.cols(); }
    friend bool operator==(const IndexInput& x, const IndexInput& y) {
        return same(x.A, y.A) && same(x.B, y.B) && same(x.nu, y.nu);
    }
};

// Meridian columns give (a|b), longitude columns give (c|d); all N x r so the
// charge map (m,e) -> (d m - b e, -c m + a e) lands in Z^N x Z^N.
struct PeripheralReduced {
    IMat a, b, c, d;                       // N x r
    IVec meridian_const, longitude_const;  // length r, diagnostics only
};

// Default quad: A = edge_A - edge_B, B = edge_C - edge_B,
// nu = 2*1 - edge_B*1 (forced by eliminating beta = 1 - alpha - gamma);
// other quads post-compose the cyclic column action.
ReducedSystem reduce(const GluingData& g, const QuadChoice& quad);

// Lexicographically first maximal independent row subset of (A|B); requires
// rank N - r, else RankError. `selected` (optional) receives the row indices.
IndexInput select_rows(const ReducedSystem& rs, i64 num_cusps, std::vector<i64>* selected = nullptr);

IndexInput index_input(const GluingData& g, const QuadChoice& quad);

PeripheralReduced reduce_peripheral(const GluingData& g, const QuadChoice& quad);

// The cyclic column action (a_i | b_i | v) -> (-b_i | a_i - b_i | v - b_i)
// applied `times` to column `col`; shared by quad reduction and the lattice
// module's column action.
void apply_col_s(IMat& A, IMat& B, IVec& nu, i64 col, int times);
// Same action on a row-vector system (peripheral rows carry their own
// constant).
void apply_col_s_row(IVec& arow, IVec& brow, i64& cst, i64 col, int times);

} // namespace tindex

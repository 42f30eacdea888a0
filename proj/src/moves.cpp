#include "tindex/moves.hpp"

#include <algorithm>
#include <stdexcept>

namespace tindex {

namespace {

int norm3(int r) { return ((r % 3) + 3) % 3; }

i64 floor_div(i64 a, i64 b) {
    i64 q = a / b, rem = a % b;
    return (rem != 0 && ((rem < 0) != (b < 0))) ? q - 1 : q;
}

void validate_site(const GluingData& g, const MoveSite& site, std::size_t arity) {
    if (site.tets.size() != arity) throw std::invalid_argument("move site: wrong number of tetrahedra");
    if (!site.align.empty() && site.align.size() != arity)
        throw std::invalid_argument("move site: alignment length mismatch");
    for (std::size_t i = 0; i < arity; ++i) {
        if (site.tets[i] < 0 || site.tets[i] >= g.num_tet)
            throw std::out_of_range("move site: tetrahedron index out of range");
        for (std::size_t j = i + 1; j < arity; ++j)
            if (site.tets[i] == site.tets[j])
                throw std::invalid_argument("move site: tetrahedra must be distinct");
    }
}

// cyclic relabeling (a|b|c) -> (b|c|a), applied to columns and witnesses alike
GluingData rotate_site(const GluingData& g, const MoveSite& site) {
    GluingData h = g;
    for (std::size_t idx = 0; idx < site.tets.size(); ++idx) {
        int r = site.align.empty() ? 0 : norm3(site.align[idx]);
        i64 t = site.tets[idx];
        for (int k = 0; k < r; ++k) {
            IVec a = h.edge_A.col(t), b = h.edge_B.col(t), c = h.edge_C.col(t);
            h.edge_A.col(t) = b;
            h.edge_B.col(t) = c;
            h.edge_C.col(t) = a;
            for (Cusp& cu : h.cusps)
                for (PeripheralRow* p : {&cu.meridian, &cu.longitude}) {
                    i64 az = p->on_z(t), bz = p->on_zp(t), cz = p->on_zpp(t);
                    p->on_z(t) = bz;
                    p->on_zp(t) = cz;
                    p->on_zpp(t) = az;
                }
        }
    }
    return h;
}

StructureWitness rotate_witness(const StructureWitness& w, const MoveSite& site, int direction) {
    StructureWitness r = w;
    for (std::size_t idx = 0; idx < site.tets.size(); ++idx) {
        int rot = site.align.empty() ? 0 : norm3(site.align[idx] * direction);
        r = witness_col_s(r, site.tets[idx], rot);
    }
    return r;
}

std::vector<i64> complement_columns(i64 n, const std::vector<i64>& site) {
    std::vector<i64> rest;
    for (i64 t = 0; t < n; ++t)
        if (std::find(site.begin(), site.end(), t) == site.end()) rest.push_back(t);
    return rest;
}

} // namespace

GluingData two_three(const GluingData& g, const MoveSite& site) {
    validate_site(g, site, 2);
    GluingData h = rotate_site(g, site);
    const i64 n = g.num_tet, i = site.tets[0], j = site.tets[1];
    std::vector<i64> rest = complement_columns(n, site.tets);

    GluingData out;
    out.name = g.name;
    out.num_tet = n + 1;
    out.num_cusps = g.num_cusps;
    out.edge_A = IMat::Zero(n + 1, n + 1);
    out.edge_B = IMat::Zero(n + 1, n + 1);
    out.edge_C = IMat::Zero(n + 1, n + 1);

    // new internal edge: the three middle variables sum to 2
    out.edge_B(0, 0) = out.edge_B(0, 1) = out.edge_B(0, 2) = 1;

    // longitudinal substitution of one row's site coefficients into the
    // three new columns
    auto substitute = [&](i64 x1, i64 x1p, i64 x1pp, i64 x2, i64 x2p, i64 x2pp, i64 row,
                          IMat& A, IMat& B, IMat& C) {
        A(row, 0) += x1pp + x2pp;
        A(row, 1) += x1 + x2p;
        A(row, 2) += x1p + x2;
        C(row, 0) += x1p + x2p;
        C(row, 1) += x1pp + x2;
        C(row, 2) += x1 + x2pp;
        (void)B;
    };

    for (i64 r = 0; r < n; ++r) {
        substitute(h.edge_A(r, i), h.edge_B(r, i), h.edge_C(r, i), h.edge_A(r, j), h.edge_B(r, j),
                   h.edge_C(r, j), r + 1, out.edge_A, out.edge_B, out.edge_C);
        for (std::size_t c = 0; c < rest.size(); ++c) {
            out.edge_A(r + 1, 3 + static_cast<i64>(c)) = h.edge_A(r, rest[c]);
            out.edge_B(r + 1, 3 + static_cast<i64>(c)) = h.edge_B(r, rest[c]);
            out.edge_C(r + 1, 3 + static_cast<i64>(c)) = h.edge_C(r, rest[c]);
        }
    }

    for (const Cusp& cu : h.cusps) {
        Cusp nc;
        for (auto [src, dst] : {std::pair{&cu.meridian, &nc.meridian}, std::pair{&cu.longitude, &nc.longitude}}) {
            IMat A = IMat::Zero(1, n + 1), B = IMat::Zero(1, n + 1), C = IMat::Zero(1, n + 1);
            substitute(src->on_z(i), src->on_zp(i), src->on_zpp(i), src->on_z(j), src->on_zp(j),
                       src->on_zpp(j), 0, A, B, C);
            for (std::size_t c = 0; c < rest.size(); ++c) {
                A(0, 3 + static_cast<i64>(c)) = src->on_z(rest[c]);
                B(0, 3 + static_cast<i64>(c)) = src->on_zp(rest[c]);
                C(0, 3 + static_cast<i64>(c)) = src->on_zpp(rest[c]);
            }
            dst->on_z = A.row(0);
            dst->on_zp = B.row(0);
            dst->on_zpp = C.row(0);
        }
        out.cusps.push_back(std::move(nc));
    }
    return out;
}

GluingData three_two(const GluingData& g, const MoveSite& site) {
    validate_site(g, site, 3);
    GluingData h = rotate_site(g, site);
    const i64 n = g.num_tet;
    const i64 t1 = site.tets[0], t2 = site.tets[1], t3 = site.tets[2];
    std::vector<i64> rest = complement_columns(n, site.tets);

    // locate the internal edge row: exactly the middle variables of the three
    // site tetrahedra, once each
    i64 internal = -1;
    for (i64 r = 0; r < n && internal < 0; ++r) {
        if (h.edge_B(r, t1) != 1 || h.edge_B(r, t2) != 1 || h.edge_B(r, t3) != 1) continue;
        bool clean = true;
        for (i64 c = 0; c < n && clean; ++c) {
            if (h.edge_A(r, c) != 0 || h.edge_C(r, c) != 0) clean = false;
            if (h.edge_B(r, c) != 0 && c != t1 && c != t2 && c != t3) clean = false;
        }
        if (clean) internal = r;
    }
    if (internal < 0) throw PatternError("three_two: no internal-edge row at the site");

    GluingData out;
    out.name = g.name;
    out.num_tet = n - 1;
    out.num_cusps = g.num_cusps;
    out.edge_A = IMat::Zero(n - 1, n - 1);
    out.edge_B = IMat::Zero(n - 1, n - 1);
    out.edge_C = IMat::Zero(n - 1, n - 1);

    // Inverse substitution. With the top angle symbolic, every site variable
    // is an affine form in (X1, X1', X2, X2'); the free coefficient must
    // cancel row by row and the constant is pushed onto the first new
    // tetrahedron's angle-sum relation.
    auto back_substitute = [&](i64 w1, i64 w2, i64 w3, i64 w1p, i64 w2p, i64 w3p, i64 w1pp,
                               i64 w2pp, i64 w3pp, i64 row, IMat& A, IMat& B, IMat& C) {
        i64 tcoef = w1 + w2 + w3 - w1pp - w2pp - w3pp;
        if (tcoef != 0) throw PatternError("three_two: free variable does not cancel in a row");
        i64 x1 = w2 + w3 + w1p - w3p - w1pp - w2pp;
        i64 x1p = w3 + w2p - w3p - w2pp;
        i64 x2 = w2 + w3 + w1p - w2p - w1pp - w3pp;
        i64 x2p = w2 - w2p + w3p - w3pp;
        i64 kappa = -w2 - w3 + w2p + w3p + w1pp + w2pp + w3pp;
        A(row, 0) += x1 + kappa;
        B(row, 0) += x1p + kappa;
        C(row, 0) += kappa;
        A(row, 1) += x2;
        B(row, 1) += x2p;
    };

    i64 out_row = 0;
    for (i64 r = 0; r < n; ++r) {
        if (r == internal) continue;
        back_substitute(h.edge_A(r, t1), h.edge_A(r, t2), h.edge_A(r, t3), h.edge_B(r, t1),
                        h.edge_B(r, t2), h.edge_B(r, t3), h.edge_C(r, t1), h.edge_C(r, t2),
                        h.edge_C(r, t3), out_row, out.edge_A, out.edge_B, out.edge_C);
        for (std::size_t c = 0; c < rest.size(); ++c) {
            out.edge_A(out_row, 2 + static_cast<i64>(c)) = h.edge_A(r, rest[c]);
            out.edge_B(out_row, 2 + static_cast<i64>(c)) = h.edge_B(r, rest[c]);
            out.edge_C(out_row, 2 + static_cast<i64>(c)) = h.edge_C(r, rest[c]);
        }
        ++out_row;
    }

    for (const Cusp& cu : h.cusps) {
        Cusp nc;
        for (auto [src, dst] : {std::pair{&cu.meridian, &nc.meridian}, std::pair{&cu.longitude, &nc.longitude}}) {
            IMat A = IMat::Zero(1, n - 1), B = IMat::Zero(1, n - 1), C = IMat::Zero(1, n - 1);
            back_substitute(src->on_z(t1), src->on_z(t2), src->on_z(t3), src->on_zp(t1),
                            src->on_zp(t2), src->on_zp(t3), src->on_zpp(t1), src->on_zpp(t2),
                            src->on_zpp(t3), 0, A, B, C);
            for (std::size_t c = 0; c < rest.size(); ++c) {
                A(0, 2 + static_cast<i64>(c)) = src->on_z(rest[c]);
                B(0, 2 + static_cast<i64>(c)) = src->on_zp(rest[c]);
                C(0, 2 + static_cast<i64>(c)) = src->on_zpp(rest[c]);
            }
            dst->on_z = A.row(0);
            dst->on_zp = B.row(0);
            dst->on_zpp = C.row(0);
        }
        out.cusps.push_back(std::move(nc));
    }
    return out;
}

StructureWitness mu_32(const GluingData& g, const MoveSite& site, const StructureWitness& on_output) {
    validate_site(g, site, 2);
    const i64 n = g.num_tet;
    std::vector<i64> rest = complement_columns(n, site.tets);
    const RatVec &a = on_output.alpha, &b = on_output.beta, &c = on_output.gamma;
    // columns 0,1,2 of the output carry (W1,W2,W3)
    Rational X1 = a(1) + c(2), X1p = a(2) + c(0), X1pp = a(0) + c(1);
    Rational X2 = c(1) + a(2), X2p = c(0) + a(1), X2pp = c(2) + a(0);
    StructureWitness w;
    w.alpha.resize(n);
    w.beta.resize(n);
    w.gamma.resize(n);
    w.alpha(site.tets[0]) = X1;
    w.beta(site.tets[0]) = X1p;
    w.gamma(site.tets[0]) = X1pp;
    w.alpha(site.tets[1]) = X2;
    w.beta(site.tets[1]) = X2p;
    w.gamma(site.tets[1]) = X2pp;
    for (std::size_t k = 0; k < rest.size(); ++k) {
        w.alpha(rest[k]) = a(3 + static_cast<i64>(k));
        w.beta(rest[k]) = b(3 + static_cast<i64>(k));
        w.gamma(rest[k]) = c(3 + static_cast<i64>(k));
    }
    return rotate_witness(w, site, -1); // back to the caller's labels
}

std::optional<StructureWitness> mu_23(const GluingData& g, const MoveSite& site,
                                      const StructureWitness& w, const Rational& w1,
                                      bool require_strict) {
    validate_site(g, site, 2);
    const i64 n = g.num_tet;
    std::vector<i64> rest = complement_columns(n, site.tets);
    StructureWitness rw = rotate_witness(w, site, +1);
    Rational X1 = rw.alpha(site.tets[0]), X1p = rw.beta(site.tets[0]), X1pp = rw.gamma(site.tets[0]);
    Rational X2 = rw.alpha(site.tets[1]), X2p = rw.beta(site.tets[1]), X2pp = rw.gamma(site.tets[1]);

    Rational W1 = w1;
    Rational W2 = w1 + X1 + X2 + X2p - 1;
    Rational W3 = w1 + X1 + X2 + X1p - 1;
    Rational W1p = X1 + X2;
    Rational W2p = X1p + X2pp;
    Rational W3p = X1pp + X2p;
    Rational W1pp = 1 - w1 - X1 - X2;
    Rational W2pp = 1 - w1 - X1 - X1p;
    Rational W3pp = 1 - w1 - X2 - X2p;
    if (require_strict)
        for (const Rational& v : {W1, W2, W3, W1p, W2p, W3p, W1pp, W2pp, W3pp})
            if (v <= 0) return std::nullopt;

    StructureWitness out;
    out.alpha.resize(n + 1);
    out.beta.resize(n + 1);
    out.gamma.resize(n + 1);
    out.alpha(0) = W1;
    out.beta(0) = W1p;
    out.gamma(0) = W1pp;
    out.alpha(1) = W2;
    out.beta(1) = W2p;
    out.gamma(1) = W2pp;
    out.alpha(2) = W3;
    out.beta(2) = W3p;
    out.gamma(2) = W3pp;
    for (std::size_t k = 0; k < rest.size(); ++k) {
        out.alpha(3 + static_cast<i64>(k)) = rw.alpha(rest[k]);
        out.beta(3 + static_cast<i64>(k)) = rw.beta(rest[k]);
        out.gamma(3 + static_cast<i64>(k)) = rw.gamma(rest[k]);
    }
    return out;
}

bool special_strict(const StructureWitness& w, const MoveSite& site) {
    StructureWitness rw = rotate_witness(w, site, +1);
    i64 i = site.tets[0], j = site.tets[1];
    return rw.alpha(i) + rw.alpha(j) < 1 && rw.gamma(i) + rw.beta(j) < 1 &&
           rw.beta(i) + rw.gamma(j) < 1;
}

std::optional<std::pair<Rational, Rational>> mu_23_interval(const StructureWitness& w,
                                                            const MoveSite& site) {
    StructureWitness rw = rotate_witness(w, site, +1);
    i64 i = site.tets[0], j = site.tets[1];
    Rational X1 = rw.alpha(i), X1p = rw.beta(i), X1pp = rw.gamma(i);
    Rational X2 = rw.alpha(j), X2p = rw.beta(j), X2pp = rw.gamma(j);
    Rational lo = std::max({Rational(0), Rational(1 - X1 - X2 - X2p), Rational(1 - X1 - X2 - X1p)});
    Rational hi = std::min({Rational(1 - X1 - X2), X1pp, X2pp});
    if (lo < hi) return std::make_pair(lo, hi);
    return std::nullopt;
}

IMat hermite_normal_form(IMat m) {
    const i64 rows = m.rows(), cols = m.cols();
    i64 r = 0;
    for (i64 c = 0; c < cols && r < rows; ++c) {
        // clear the column below position r via Euclidean steps with a
        // positive pivot, so remainders shrink strictly
        for (;;) {
            i64 pivot = -1;
            for (i64 i = r; i < rows; ++i)
                if (m(i, c) != 0 && (pivot < 0 || std::llabs(m(i, c)) < std::llabs(m(pivot, c))))
                    pivot = i;
            if (pivot < 0) break;
            if (pivot != r) m.row(pivot).swap(m.row(r));
            if (m(r, c) < 0) m.row(r) = -m.row(r);
            bool dirty = false;
            for (i64 i = r + 1; i < rows; ++i) {
                if (m(i, c) == 0) continue;
                i64 q = floor_div(m(i, c), m(r, c));
                m.row(i) -= q * m.row(r);
                if (m(i, c) != 0) dirty = true;
            }
            if (!dirty) break;
        }
        if (m(r, c) == 0) continue;
        for (i64 i = 0; i < r; ++i) {
            i64 q = floor_div(m(i, c), m(r, c));
            if (q != 0) m.row(i) -= q * m.row(r);
        }
        ++r;
    }
    return m;
}

namespace {

// shift each row by tetrahedron-sum differences so the triple sums at the
// non-anchor tetrahedra land in {0,1,2}
void gauge_reduce_row(IMat& A, IMat& B, IMat& C, i64 row, i64 n) {
    for (i64 t = 1; t < n; ++t) {
        i64 sigma = A(row, t) + B(row, t) + C(row, t);
        i64 lam = floor_div(sigma, 3);
        if (lam == 0) continue;
        A(row, t) -= lam;
        B(row, t) -= lam;
        C(row, t) -= lam;
        A(row, 0) += lam;
        B(row, 0) += lam;
        C(row, 0) += lam;
    }
}

} // namespace

GluingNormalForm normal_form(const GluingData& g) {
    const i64 n = g.num_tet;
    GluingData h = g;
    for (i64 r = 0; r < n; ++r) gauge_reduce_row(h.edge_A, h.edge_B, h.edge_C, r, n);
    std::vector<IMat> per_rows; // 1 x 3n gauge-reduced peripheral rows
    for (Cusp& cu : h.cusps)
        for (PeripheralRow* p : {&cu.meridian, &cu.longitude}) {
            IMat A(1, n), B(1, n), C(1, n);
            A.row(0) = p->on_z;
            B.row(0) = p->on_zp;
            C.row(0) = p->on_zpp;
            gauge_reduce_row(A, B, C, 0, n);
            p->on_z = A.row(0);
            p->on_zp = B.row(0);
            p->on_zpp = C.row(0);
        }

    // canonical cyclic rotation per column: lexicographically least stacked
    // (A,B,C) triple over edge then peripheral rows
    for (i64 t = 0; t < n; ++t) {
        auto stacked = [&](int rot) {
            std::vector<i64> v;
            IVec a = h.edge_A.col(t), b = h.edge_B.col(t), c = h.edge_C.col(t);
            for (int k = 0; k < rot; ++k) {
                IVec tmp = a;
                a = b;
                b = c;
                c = tmp;
            }
            for (i64 r = 0; r < n; ++r) {
                v.push_back(a(r));
                v.push_back(b(r));
                v.push_back(c(r));
            }
            for (const Cusp& cu : h.cusps)
                for (const PeripheralRow* p : {&cu.meridian, &cu.longitude}) {
                    i64 pa = p->on_z(t), pb = p->on_zp(t), pc = p->on_zpp(t);
                    for (int k = 0; k < rot; ++k) {
                        i64 tmp = pa;
                        pa = pb;
                        pb = pc;
                        pc = tmp;
                    }
                    v.push_back(pa);
                    v.push_back(pb);
                    v.push_back(pc);
                }
            return v;
        };
        int best = 0;
        for (int rot = 1; rot < 3; ++rot)
            if (stacked(rot) < stacked(best)) best = rot;
        if (best != 0) {
            for (int k = 0; k < best; ++k) {
                IVec a = h.edge_A.col(t), b = h.edge_B.col(t), c = h.edge_C.col(t);
                h.edge_A.col(t) = b;
                h.edge_B.col(t) = c;
                h.edge_C.col(t) = a;
                for (Cusp& cu : h.cusps)
                    for (PeripheralRow* p : {&cu.meridian, &cu.longitude}) {
                        i64 pa = p->on_z(t), pb = p->on_zp(t), pc = p->on_zpp(t);
                        p->on_z(t) = pb;
                        p->on_zp(t) = pc;
                        p->on_zpp(t) = pa;
                    }
            }
        }
    }

    // edge rows + gauge generators, augmented with the right-hand side
    const i64 width = 3 * n + 1;
    IMat lattice(n + (n - 1), width);
    lattice.setZero();
    for (i64 r = 0; r < n; ++r) {
        for (i64 t = 0; t < n; ++t) {
            lattice(r, t) = h.edge_A(r, t);
            lattice(r, n + t) = h.edge_B(r, t);
            lattice(r, 2 * n + t) = h.edge_C(r, t);
        }
        lattice(r, 3 * n) = 2;
    }
    for (i64 t = 1; t < n; ++t) {
        i64 r = n + t - 1;
        lattice(r, 0) = lattice(r, n) = lattice(r, 2 * n) = 1;
        lattice(r, t) = lattice(r, n + t) = lattice(r, 2 * n + t) = -1;
    }

    GluingNormalForm nf;
    nf.edge_lattice = hermite_normal_form(std::move(lattice));
    nf.peripherals = IMat::Zero(2 * g.num_cusps, width);
    i64 pr = 0;
    for (const Cusp& cu : h.cusps)
        for (const PeripheralRow* p : {&cu.meridian, &cu.longitude}) {
            for (i64 t = 0; t < n; ++t) {
                nf.peripherals(pr, t) = p->on_z(t);
                nf.peripherals(pr, n + t) = p->on_zp(t);
                nf.peripherals(pr, 2 * n + t) = p->on_zpp(t);
            }
            ++pr;
        }
    return nf;
}

} // namespace tindex

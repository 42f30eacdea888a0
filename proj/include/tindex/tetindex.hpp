#pragma once

// The tetrahedron index I(m,e)(q), its closed-form degree, the quantum
// dilogarithm and F_e generating series, and the pentagon verifier.

#include <cstdint>
#include <map>

#include "tindex/qseries.hpp"

namespace tindex {

// Magnetic/electric charge pair.
struct Charge {
    i64 m = 0;
    i64 e = 0;
    friend auto operator<=>(const Charge&, const Charge&) = default;
};

// Valuation of I(m,e):
//   (m_+ (m+e)_+ + (-m)_+ e_+ + (-e)_+ (-e-m)_+ + max{0, m, -e}) / 2.
HalfExp tet_degree(Charge c);

// I(m,e) = sum_{n >= (-e)_+} (-1)^n q^{n(n+1)/2 - (n+e/2)m} / ((q)_n (q)_{n+e}),
// truncated at `order`. The summand's valuation grows quadratically in n, so
// the sum below any finite order is finite.
TruncatedQSeries tet_index(Charge c, HalfExp order);

// Memoizes tet_index per charge, keeping the highest order computed so far.
class TetIndexCache {
public:
    // truncated copy valid to exactly `order`
    TruncatedQSeries at(Charge c, HalfExp order);

private:
    std::map<Charge, TruncatedQSeries> memo_;
};

// Quantum dilogarithm L(m,x,q) = (q^(1-m/2) x^(-1))_inf / (q^(-m/2) x)_inf
// expanded factor by factor, returned on the x-window [x_min, x_max] with
// every slot valid to q_order. Its x^e coefficient equals I(m,e).
BiSeries dilog_series(i64 m, int x_min, int x_max, HalfExp q_order);

// F_e(x) = sum_n (-1)^n q^{n(n+1)/2} x^n / ((q)_n (q)_{n+e}) on [0, x_max].
BiSeries f_series(i64 e, int x_max, HalfExp q_order);

struct PentagonResult {
    bool ok = false;
    TruncatedQSeries residual; // lhs - rhs, valid to the requested order
    i64 e3_min = 0, e3_max = 0; // summation window actually used
};

// Checks I(m1-e2,e1) I(m2-e1,e2) = sum_{e3} q^{e3} I(m1,e1+e3) I(m2,e2+e3)
// I(m1+m2,e3) at `order`. The e3-window is derived from tet_degree, so it is
// provably complete; `clip` shrinks it artificially (harness sanity checks).
PentagonResult verify_pentagon(i64 m1, i64 m2, i64 e1, i64 e2, HalfExp order,
                               TetIndexCache& cache, int clip = 0);

// Defining two-term recursions; residuals are valid to at least `order` and
// vanish identically for the tetrahedron index.
TruncatedQSeries rec1_residual(Charge c, HalfExp order, TetIndexCache& cache);
TruncatedQSeries rec2_residual(Charge c, HalfExp order, TetIndexCache& cache);
// Three-term recursions in e and in m.
TruncatedQSeries rec1_3term_residual(Charge c, HalfExp order, TetIndexCache& cache);
TruncatedQSeries rec2_3term_residual(Charge c, HalfExp order, TetIndexCache& cache);
// f(0,e) - (2 - q^(e-1)) f(0,e-1) + f(0,e-2)
TruncatedQSeries rec_e3term_residual(i64 e, HalfExp order, TetIndexCache& cache);
// f(m,e) - (-q^(1/2))^(-e) f(e,-e-m)  and  f(m,e) - (-q^(1/2))^m f(-e-m,m)
TruncatedQSeries triality1_residual(Charge c, HalfExp order, TetIndexCache& cache);
TruncatedQSeries triality2_residual(Charge c, HalfExp order, TetIndexCache& cache);

// Every nonzero coefficient sits at exponent == em/2 (mod 1).
bool parity_holds(Charge c, const TruncatedQSeries& s);

struct IdentityCheck {
    bool ok = true;
    std::string detail; // first offending tuple when not ok
};

// x^e coefficients of the quantum dilogarithm equal tet_index(m,e) across the
// window.
IdentityCheck check_dilog_expansion(i64 m, int e_window, HalfExp q_order);

// The five classical product/sum identities behind the generating-series
// arguments (Euler's two expansions, the q-binomial theorem, and the two
// double-sum product formulas), verified coefficient-by-coefficient on
// [0, x_window]^2 below q_order.
IdentityCheck check_classical_qseries_identities(int x_window, HalfExp q_order);

// Generating-series form of the pentagon:
// q^(e1 e2) F_{e1}(q^{e2} x1) F_{e2}(q^{e1} x2)
//   = sum_{e3} (x1 x2 q)^{e3} F_{e1+e3}(x1) F_{e2+e3}(x2) F_{e3}(x1 x2),
// compared on (x1,x2)-exponents in [0, n_window]^2 below q_order.
IdentityCheck check_f_generating(i64 e1, i64 e2, int n_window, HalfExp q_order);

} // namespace tindex

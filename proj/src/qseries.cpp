#include "tindex/qseries.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace tindex {

std::string HalfExp::str() const {
    std::ostringstream os;
    if (twice % 2 == 0) os << twice / 2;
    else os << twice << "/2";
    return os.str();
}

TruncatedQSeries TruncatedQSeries::zero(HalfExp order) {
    TruncatedQSeries s;
    s.offset_ = order;
    s.order_ = order;
    return s;
}

TruncatedQSeries TruncatedQSeries::monomial(Int coeff, HalfExp exp, HalfExp order) {
    TruncatedQSeries s;
    s.order_ = order;
    if (exp >= order || coeff == 0) {
        s.offset_ = order;
        return s;
    }
    s.offset_ = exp;
    s.coeffs_.assign(static_cast<std::size_t>(order.twice - exp.twice), Int(0));
    s.coeffs_[0] = std::move(coeff);
    return s;
}

void TruncatedQSeries::canonicalize() {
    std::size_t lead = 0;
    while (lead < coeffs_.size() && coeffs_[lead] == 0) ++lead;
    if (lead == coeffs_.size()) {
        coeffs_.clear();
        offset_ = order_;
        return;
    }
    if (lead > 0) {
        coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
        offset_ = HalfExp(offset_.twice + static_cast<i64>(lead));
    }
}

std::optional<HalfExp> TruncatedQSeries::valuation() const {
    if (is_zero()) return std::nullopt;
    return offset_;
}

std::optional<HalfExp> valuation(const TruncatedQSeries& a) { return a.valuation(); }

Int TruncatedQSeries::coeff_at(HalfExp e) const {
    if (e >= order_) throw std::out_of_range("coeff_at: exponent at or above truncation order");
    if (e < offset_) return 0;
    return coeffs_[static_cast<std::size_t>(e.twice - offset_.twice)];
}

TruncatedQSeries add(const TruncatedQSeries& a, const TruncatedQSeries& b) {
    HalfExp order = std::min(a.order_, b.order_);
    HalfExp lo = std::min(std::min(a.offset_, b.offset_), order);
    TruncatedQSeries r;
    r.order_ = order;
    r.offset_ = lo;
    r.coeffs_.assign(static_cast<std::size_t>(order.twice - lo.twice), Int(0));
    auto splat = [&](const TruncatedQSeries& s) {
        i64 n = std::min<i64>(static_cast<i64>(s.coeffs_.size()), order.twice - s.offset_.twice);
        for (i64 i = 0; i < n; ++i) r.coeffs_[static_cast<std::size_t>(s.offset_.twice - lo.twice + i)] += s.coeffs_[static_cast<std::size_t>(i)];
    };
    splat(a);
    splat(b);
    r.canonicalize();
    return r;
}

TruncatedQSeries negate(const TruncatedQSeries& a) {
    TruncatedQSeries r = a;
    for (Int& c : r.coeffs_) c = -c;
    return r;
}

TruncatedQSeries sub(const TruncatedQSeries& a, const TruncatedQSeries& b) { return add(a, negate(b)); }

TruncatedQSeries mul(const TruncatedQSeries& a, const TruncatedQSeries& b) {
    // Valid order: a is f + O(q^oa), b is g + O(q^ob); the cross terms start
    // at oa + val(g) and ob + val(f). A zero factor contributes its own order
    // as the valuation lower bound.
    HalfExp va = a.is_zero() ? a.order_ : a.offset_;
    HalfExp vb = b.is_zero() ? b.order_ : b.offset_;
    HalfExp order = std::min(a.order_ + vb, b.order_ + va);
    if (a.is_zero() || b.is_zero()) return TruncatedQSeries::zero(order);
    HalfExp lo = std::min(va + vb, order);
    TruncatedQSeries r;
    r.order_ = order;
    r.offset_ = lo;
    r.coeffs_.assign(static_cast<std::size_t>(order.twice - lo.twice), Int(0));
    const i64 base = a.offset_.twice + b.offset_.twice - lo.twice;
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        if (a.coeffs_[i] == 0) continue;
        const i64 hi = std::min<i64>(static_cast<i64>(b.coeffs_.size()),
                                     static_cast<i64>(r.coeffs_.size()) - base - static_cast<i64>(i));
        for (i64 j = 0; j < hi; ++j) {
            if (b.coeffs_[static_cast<std::size_t>(j)] == 0) continue;
            r.coeffs_[static_cast<std::size_t>(base + static_cast<i64>(i) + j)] += a.coeffs_[i] * b.coeffs_[static_cast<std::size_t>(j)];
        }
    }
    r.canonicalize();
    return r;
}

TruncatedQSeries monomial_shift(const TruncatedQSeries& a, HalfExp h, int sign) {
    TruncatedQSeries r = a;
    r.offset_ += h;
    r.order_ += h;
    if (sign < 0)
        for (Int& c : r.coeffs_) c = -c;
    return r;
}

TruncatedQSeries truncate(const TruncatedQSeries& a, HalfExp order) {
    if (order >= a.order_) {
        if (order > a.order_) throw std::invalid_argument("truncate: cannot raise a series' order");
        return a;
    }
    TruncatedQSeries r;
    r.order_ = order;
    if (a.offset_ >= order) {
        r.offset_ = order;
        return r;
    }
    r.offset_ = a.offset_;
    r.coeffs_.assign(a.coeffs_.begin(), a.coeffs_.begin() + static_cast<std::ptrdiff_t>(order.twice - a.offset_.twice));
    r.canonicalize();
    return r;
}

TruncatedQSeries invert_unit(const TruncatedQSeries& a) {
    if (a.is_zero() || a.offset_ != HalfExp(0) || (a.coeffs_[0] != 1 && a.coeffs_[0] != -1))
        throw std::invalid_argument("invert_unit: series must start with +-1 at q^0");
    const Int lead = a.coeffs_[0];
    TruncatedQSeries r;
    r.order_ = a.order_;
    r.offset_ = HalfExp(0);
    r.coeffs_.assign(static_cast<std::size_t>(a.order_.twice), Int(0));
    if (r.coeffs_.empty()) { r.canonicalize(); return r; }
    r.coeffs_[0] = lead; // 1/lead == lead for +-1
    for (std::size_t k = 1; k < r.coeffs_.size(); ++k) {
        Int acc = 0;
        for (std::size_t j = 1; j <= k && j < a.coeffs_.size(); ++j)
            if (a.coeffs_[j] != 0) acc += a.coeffs_[j] * r.coeffs_[k - j];
        r.coeffs_[k] = -lead * acc;
    }
    return r;
}

TruncatedQSeries extend_as_polynomial(const TruncatedQSeries& a, HalfExp order) {
    if (order <= a.order_) return truncate(a, order);
    if (a.is_zero()) return TruncatedQSeries::zero(order);
    TruncatedQSeries r = a;
    r.order_ = order;
    r.coeffs_.resize(static_cast<std::size_t>(order.twice - r.offset_.twice), Int(0));
    return r;
}

TruncatedQSeries pochhammer(i64 n, HalfExp order) {
    if (n < 0) throw std::invalid_argument("pochhammer: n must be nonnegative");
    TruncatedQSeries r = TruncatedQSeries::one(order);
    for (i64 i = 1; i <= n; ++i) {
        if (HalfExp::whole(i) >= order) break; // remaining factors are 1 + O(q^order)
        r = sub(r, monomial_shift(r, HalfExp::whole(i), +1));
    }
    return r;
}

TruncatedQSeries inv_pochhammer(i64 n, HalfExp order) {
    if (n < 0) throw std::invalid_argument("inv_pochhammer: n must be nonnegative");
    return invert_unit(pochhammer(n, order));
}

bool equal_below(const TruncatedQSeries& a, const TruncatedQSeries& b, HalfExp order) {
    if (a.order() < order || b.order() < order) return false;
    for (i64 t = std::min(a.offset().twice, b.offset().twice); t < order.twice; ++t) {
        HalfExp e(t);
        if (a.coeff_at(e) != b.coeff_at(e)) return false;
    }
    return true;
}

bool zero_below(const TruncatedQSeries& a, HalfExp order) {
    if (a.order() < order) return false;
    return a.is_zero() || a.offset() >= order;
}

namespace {

std::string exponent_str(HalfExp e) {
    // q, q^2, q^(-1), q^(1/2), q^(-7/2)
    if (e.twice == 2) return "q";
    std::ostringstream os;
    os << "q^";
    if (e.twice % 2 == 0) {
        i64 n = e.twice / 2;
        if (n < 0) os << "(" << n << ")";
        else os << n;
    } else {
        os << "(" << e.twice << "/2)";
    }
    return os.str();
}

} // namespace

std::string render(const TruncatedQSeries& a) {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
        const Int& c = a.coeffs()[i];
        if (c == 0) continue;
        HalfExp e(a.offset().twice + static_cast<i64>(i));
        Int mag = c < 0 ? Int(-c) : c;
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        if (e.twice == 0) os << mag.str();
        else if (mag == 1) os << exponent_str(e);
        else os << mag.str() << "*" << exponent_str(e);
    }
    if (first) os << "O(" << exponent_str(a.order()) << ")";
    else os << " + O(" << exponent_str(a.order()) << ")";
    return os.str();
}

BiSeries::BiSeries(int x_min, int x_max, HalfExp q_order)
    : x_min_(x_min), x_max_(x_max), q_order_(q_order) {
    if (x_max_ < x_min_) throw WindowError("BiSeries: empty x-window");
    slots_.assign(static_cast<std::size_t>(x_max_ - x_min_ + 1), TruncatedQSeries::zero(q_order_));
}

const TruncatedQSeries& BiSeries::at(int x_exp) const {
    if (x_exp < x_min_ || x_exp > x_max_) throw WindowError("BiSeries: x-exponent outside window");
    return slots_[static_cast<std::size_t>(x_exp - x_min_)];
}

void BiSeries::set(int x_exp, const TruncatedQSeries& s) {
    if (x_exp < x_min_ || x_exp > x_max_) throw WindowError("BiSeries: x-exponent outside window");
    slots_[static_cast<std::size_t>(x_exp - x_min_)] =
        s.order() >= q_order_ ? truncate(s, q_order_) : extend_as_polynomial(s, q_order_);
}

void BiSeries::add_to(int x_exp, const TruncatedQSeries& s) {
    set(x_exp, add(at(x_exp), s.order() >= q_order_ ? truncate(s, q_order_) : extend_as_polynomial(s, q_order_)));
}

BiSeries BiSeries::one(int x_min, int x_max, HalfExp q_order) {
    BiSeries b(x_min, x_max, q_order);
    if (x_min > 0 || x_max < 0) throw WindowError("BiSeries::one: window must contain x^0");
    b.set(0, TruncatedQSeries::one(q_order));
    return b;
}

TruncatedQSeries bi_extract(const BiSeries& a, int x_exp) { return a.at(x_exp); }

BiSeries bi_mul(const BiSeries& a, const BiSeries& b) {
    HalfExp order = std::min(a.q_order(), b.q_order());
    BiSeries r(a.x_min() + b.x_min(), a.x_max() + b.x_max(), order);
    for (int i = a.x_min(); i <= a.x_max(); ++i) {
        if (a.at(i).is_zero()) continue;
        for (int j = b.x_min(); j <= b.x_max(); ++j) {
            if (b.at(j).is_zero()) continue;
            r.add_to(i + j, mul(a.at(i), b.at(j)));
        }
    }
    return r;
}

BiSeries bi_add(const BiSeries& a, const BiSeries& b) {
    int lo = std::max(a.x_min(), b.x_min());
    int hi = std::min(a.x_max(), b.x_max());
    HalfExp order = std::min(a.q_order(), b.q_order());
    BiSeries r(lo, hi, order);
    for (int i = lo; i <= hi; ++i) r.set(i, truncate(add(a.at(i), b.at(i)), order));
    return r;
}

BiSeries bi_sub(const BiSeries& a, const BiSeries& b) {
    int lo = std::max(a.x_min(), b.x_min());
    int hi = std::min(a.x_max(), b.x_max());
    HalfExp order = std::min(a.q_order(), b.q_order());
    BiSeries r(lo, hi, order);
    for (int i = lo; i <= hi; ++i) r.set(i, truncate(sub(a.at(i), b.at(i)), order));
    return r;
}

namespace {

// Polynomial-semantics fit: truncate above, zero-pad below.
TruncatedQSeries fit_order(const TruncatedQSeries& s, HalfExp order) {
    return s.order() >= order ? truncate(s, order) : extend_as_polynomial(s, order);
}

} // namespace

void bi_mul_binomial(BiSeries& p, int sign, HalfExp c, int d) {
    BiSeries r(p.x_min(), p.x_max(), p.q_order());
    for (int e = p.x_min(); e <= p.x_max(); ++e) {
        TruncatedQSeries v = p.at(e);
        if (e - d >= p.x_min() && e - d <= p.x_max() && !p.at(e - d).is_zero())
            v = add(v, fit_order(monomial_shift(p.at(e - d), c, sign), p.q_order()));
        r.set(e, v);
    }
    p = r;
}

void bi_mul_inv_binomial(BiSeries& p, HalfExp c, int d) {
    if (d == 0) throw std::invalid_argument("bi_mul_inv_binomial: x-degree must be nonzero");
    BiSeries r(p.x_min(), p.x_max(), p.q_order());
    for (int e = p.x_min(); e <= p.x_max(); ++e) {
        TruncatedQSeries acc = TruncatedQSeries::zero(p.q_order());
        for (int j = 0;; ++j) {
            int src = e - j * d;
            if (src < p.x_min() || src > p.x_max()) break;
            const TruncatedQSeries& s = p.at(src);
            if (!s.is_zero() && s.offset() + HalfExp(c.twice * j) < p.q_order())
                acc = add(acc, fit_order(monomial_shift(s, HalfExp(c.twice * j), +1), p.q_order()));
        }
        r.set(e, acc);
    }
    p = r;
}

BiSeries bi_scale_x(const BiSeries& a, HalfExp c) {
    BiSeries r(a.x_min(), a.x_max(), a.q_order());
    for (int e = a.x_min(); e <= a.x_max(); ++e) r.set(e, monomial_shift(a.at(e), HalfExp(c.twice * e), +1));
    return r;
}

BiSeries bi_clip(const BiSeries& a, int x_min, int x_max) {
    BiSeries r(x_min, x_max, a.q_order());
    for (int e = x_min; e <= x_max; ++e)
        if (e >= a.x_min() && e <= a.x_max()) r.set(e, a.at(e));
    return r;
}

BiSeries bi_shift_q(const BiSeries& a, HalfExp h, int sign) {
    BiSeries r(a.x_min(), a.x_max(), a.q_order() + h);
    for (int e = a.x_min(); e <= a.x_max(); ++e) r.set(e, monomial_shift(a.at(e), h, sign));
    return r;
}

bool bi_equal_below(const BiSeries& a, const BiSeries& b, int x_min, int x_max, HalfExp order) {
    if (x_min < a.x_min() || x_min < b.x_min() || x_max > a.x_max() || x_max > b.x_max()) return false;
    for (int e = x_min; e <= x_max; ++e)
        if (!equal_below(a.at(e), b.at(e), order)) return false;
    return true;
}

} // namespace tindex

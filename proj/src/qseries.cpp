#include "qseries.hpp"

#include <algorithm>
#include <sstream>

namespace qseries {

LaurentSeries2 LaurentSeries2::truncated(long new_order) const {
    if (new_order > order_)
        throw std::invalid_argument("truncated: cannot extend a series");
    LaurentSeries2 out(new_order);
    for (const auto& [e, c] : terms_)
        if (e.total() <= new_order) out.terms_[e] = c;
    return out;
}

LaurentSeries2 LaurentSeries2::operator+(const LaurentSeries2& o) const {
    LaurentSeries2 out(std::min(order_, o.order_));
    for (const auto& [e, c] : terms_) out.add_term(e.a, e.b, c);
    for (const auto& [e, c] : o.terms_) out.add_term(e.a, e.b, c);
    return out;
}

LaurentSeries2 LaurentSeries2::operator-(const LaurentSeries2& o) const {
    LaurentSeries2 out(std::min(order_, o.order_));
    for (const auto& [e, c] : terms_) out.add_term(e.a, e.b, c);
    for (const auto& [e, c] : o.terms_) out.add_term(e.a, e.b, -c);
    return out;
}

LaurentSeries2 LaurentSeries2::operator*(const Rational& k) const {
    LaurentSeries2 out(order_);
    if (k == 0) return out;
    for (const auto& [e, c] : terms_) out.terms_[e] = c * k;
    return out;
}

std::string LaurentSeries2::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c.get_str();
        if (e.a != 0) os << "*p^(" << e.a << "/2)";
        if (e.b != 0) os << "*q^(" << e.b << "/2)";
    }
    os << " + O(deg " << order_ + 1 << "/2)";
    return os.str();
}

LaurentSeries2 series_mul(const LaurentSeries2& x, const LaurentSeries2& y) {
    const long order = std::min(x.order(), y.order());
    LaurentSeries2 out(order);
    if (x.empty() || y.empty()) return out;
    const long ylow = y.lower_total();
    for (const auto& [ex, cx] : x.terms()) {
        if (ex.total() + ylow > order) continue;
        for (const auto& [ey, cy] : y.terms()) {
            if (ex.total() + ey.total() > order) continue;
            out.add_term(ex.a + ey.a, ex.b + ey.b, cx * cy);
        }
    }
    return out;
}

LaurentSeries2 series_pow_int(const LaurentSeries2& x, long k) {
    const long order = x.order();
    if (k == 0) return LaurentSeries2::one(order);
    if (k > 0) {
        LaurentSeries2 acc = LaurentSeries2::one(order);
        LaurentSeries2 base = x;
        long e = k;
        while (e > 0) {
            if (e & 1) acc = series_mul(acc, base);
            e >>= 1;
            if (e) base = series_mul(base, base);
        }
        return acc;
    }
    // k < 0: invert, then raise to |k|.
    if (x.empty()) throw std::domain_error("series_pow_int: zero series");
    const long low = x.lower_total();
    Exp2 lead{};
    int nlead = 0;
    for (const auto& [e, c] : x.terms())
        if (e.total() == low) {
            lead = e;
            ++nlead;
        }
    if (nlead != 1)
        throw std::domain_error("not invertible at this truncation");
    const Rational lc = x.coeff(lead.a, lead.b);
    // x = lc * m * (1 + u) with deg(u) >= 1; 1/x = (1/lc) m^{-1} sum (-u)^j.
    // geo must carry terms up to total degree order + low so that the shift
    // by m^{-1} (total degree -low) fills the full truncation window.
    const long geo_order = order + std::labs(low);
    LaurentSeries2 u(geo_order);
    for (const auto& [e, c] : x.terms()) {
        if (e == lead) continue;
        u.add_term(e.a - lead.a, e.b - lead.b, c / lc);
    }
    LaurentSeries2 geo = LaurentSeries2::one(geo_order);
    LaurentSeries2 upow = LaurentSeries2::one(geo_order);
    for (long j = 1; j <= geo_order && !upow.empty(); ++j) {
        upow = series_mul(upow, u);
        if (upow.empty()) break;
        geo = (j % 2 == 0) ? geo + upow : geo - upow;
    }
    LaurentSeries2 inv(order);
    for (const auto& [e, c] : geo.terms())
        inv.add_term(e.a - lead.a, e.b - lead.b, c / lc);
    return series_pow_int(inv, -k);
}

LaurentSeries1 LaurentSeries1::operator*(const LaurentSeries1& o) const {
    LaurentSeries1 out(std::min(order_, o.order_), offset24_ + o.offset24_);
    for (const auto& [i, ci] : terms_) {
        for (const auto& [j, cj] : o.terms_) {
            if (i + j > out.order_) break;  // o.terms_ sorted ascending
            out.add_term(i + j, ci * cj);
        }
    }
    return out;
}

LaurentSeries1 LaurentSeries1::inverse() const {
    if (coeff(0) != 1)
        throw std::domain_error("LaurentSeries1::inverse: constant term must be 1");
    for (const auto& [k, c] : terms_)
        if (k < 0) throw std::domain_error("LaurentSeries1::inverse: negative exponent");
    LaurentSeries1 inv(order_, -offset24_);
    std::vector<Rational> a(order_ + 1, Rational(0)), b(order_ + 1, Rational(0));
    for (const auto& [k, c] : terms_)
        if (k >= 0 && k <= order_) a[k] = c;
    b[0] = 1;
    for (long n = 1; n <= order_; ++n) {
        Rational s(0);
        for (long k = 1; k <= n; ++k) s += a[k] * b[n - k];
        b[n] = -s;
    }
    for (long n = 0; n <= order_; ++n) inv.add_term(n, b[n]);
    return inv;
}

LaurentSeries1 LaurentSeries1::pow_int(long k) const {
    if (k == 0) return LaurentSeries1::one(order_);
    LaurentSeries1 base = (k < 0) ? inverse() : *this;
    const long e0 = (k < 0) ? -k : k;
    LaurentSeries1 acc = LaurentSeries1::one(order_);
    long e = e0;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return acc;
}

LaurentSeries1 eta_quotient_qexp(const std::vector<std::pair<long, long>>& factors,
                                 long order) {
    if (order < 0) throw std::invalid_argument("eta_quotient_qexp: order < 0");
    long offset24 = 0;
    LaurentSeries1 out = LaurentSeries1::one(order);
    for (const auto& [scale, expo] : factors) {
        if (scale <= 0) throw std::invalid_argument("eta_quotient_qexp: scale <= 0");
        offset24 += scale * expo;
        LaurentSeries1 euler = LaurentSeries1::one(order);
        for (long n = 1; scale * n <= order; ++n) {
            LaurentSeries1 f = LaurentSeries1::one(order);
            f.add_term(scale * n, -1);
            euler = euler * f;
        }
        out = out * euler.pow_int(expo);
    }
    LaurentSeries1 res(order, offset24);
    for (const auto& [k, c] : out.terms()) res.add_term(k, c);
    return res;
}

std::map<long, Integer> c_coeffs(long n_max) {
    if (n_max < -1) throw std::invalid_argument("c_coeffs: n_max < -1");
    LaurentSeries1 s = eta_quotient_qexp({{1, -8}, {2, 8}, {4, -8}}, n_max + 1);
    // offset24 = -8 + 16 - 32 = -24, i.e. a clean q^{-1} prefactor.
    if (s.offset24() != -24)
        throw std::logic_error("c_coeffs: unexpected eta-quotient offset");
    std::map<long, Integer> out;
    for (long n = -1; n <= n_max; ++n) {
        Rational c = s.coeff(n + 1);
        if (c.get_den() != 1) throw std::logic_error("c_coeffs: non-integer coefficient");
        out[n] = c.get_num();
    }
    return out;
}

LaurentSeries1 j_qexp(long order) {
    if (order < -1) throw std::invalid_argument("j_qexp: order < -1");
    const long n = order + 1;  // body order (body = j * q)
    // E4 = 1 + 240 sum sigma_3(k) q^k
    LaurentSeries1 e4(n);
    e4.add_term(0, 1);
    std::vector<Integer> sigma3(n + 1, Integer(0));
    for (long d = 1; d <= n; ++d) {
        Integer d3 = Integer(d) * d * d;
        for (long m = d; m <= n; m += d) sigma3[m] += d3;
    }
    for (long k = 1; k <= n; ++k) e4.add_term(k, Rational(240) * Rational(sigma3[k]));
    LaurentSeries1 e43 = e4 * e4 * e4;
    LaurentSeries1 delta_body = eta_quotient_qexp({{1, 24}}, n);  // Delta / q
    LaurentSeries1 d0(n);  // body with the symbolic offset stripped
    for (const auto& [k, c] : delta_body.terms()) d0.add_term(k, c);
    LaurentSeries1 body = e43 * d0.inverse();
    LaurentSeries1 j(order);
    for (const auto& [k, c] : body.terms()) j.add_term(k - 1, c);
    return j;
}

namespace {

// (1 - p^m q^n)^A expanded exactly to total degree <= order full units,
// multiplied into acc.  A may be a huge integer; binomials are incremental.
void mul_binomial_factor(LaurentSeries2& acc, long m, long n, const Integer& A) {
    const long order_hu = acc.order();
    const long tmax = order_hu / (2 * (m + n));
    LaurentSeries2 f(order_hu);
    Integer binom = 1;  // binom(A, t)
    f.add_term(0, 0, 1);
    for (long t = 1; t <= tmax; ++t) {
        binom = binom * (A - (t - 1)) / t;  // exact: consecutive binomials
        Rational c = Rational(binom);
        if (t % 2 == 1) c = -c;
        f.add_term(2 * m * t, 2 * n * t, c);
    }
    acc = series_mul(acc, f);
}

}  // namespace

std::pair<LaurentSeries2, LaurentSeries2> monster_denominator_series(long order) {
    if (order < 1) throw std::invalid_argument("monster_denominator_series: order < 1");
    const long T = 2 * order;       // guaranteed-exact total degree, full units
    const long order_hu = 2 * T;    // half-unit truncation for both sides
    LaurentSeries1 j = j_qexp(T);

    LaurentSeries2 lhs(order_hu);
    for (const auto& [k, c] : j.terms()) {
        lhs.add_term(2 * k, 0, c);
        lhs.add_term(0, 2 * k, -c);
    }

    // a(mn) table for the product side
    const long smax = T + 1;  // factors with m + n <= T + 1 can contribute
    long max_mn = 0;
    for (long m = 1; m < smax; ++m)
        for (long n = 1; m + n <= smax; ++n) max_mn = std::max(max_mn, m * n);
    LaurentSeries1 ja = j_qexp(max_mn);

    // Expand the product at order_hu + 2 first, then apply the (p^{-1}-q^{-1})
    // prefactor: this keeps every retained coefficient of the shifted result
    // exact up to total degree order_hu.
    LaurentSeries2 prod = LaurentSeries2::one(order_hu + 2);
    for (long m = 1; m < smax; ++m) {
        for (long n = 1; m + n <= smax; ++n) {
            Rational a = ja.coeff(m * n);
            if (a.get_den() != 1) throw std::logic_error("denominator: non-integer a(n)");
            mul_binomial_factor(prod, m, n, a.get_num());
        }
    }
    LaurentSeries2 pref(order_hu + 2);
    pref.add_term(-2, 0, 1);
    pref.add_term(0, -2, -1);
    LaurentSeries2 rhs = series_mul(pref, prod).truncated(order_hu);
    return {lhs, rhs};
}

}  // namespace qseries

#pragma once

/**
 * Exact truncated Laurent series over arbitrary-precision rationals.
 *
 * Two flavours are provided:
 *
 *  - LaurentSeries2: two-variable series in half-integer powers of
 *    p = e^{2 pi i tau}, q = e^{2 pi i tau'}.  An exponent pair (a, b)
 *    represents the monomial p^{a/2} q^{b/2}.  Truncation is by total
 *    degree a + b <= order (measured in half-units).
 *
 *  - LaurentSeries1: one-variable series in q = e^{2 pi i tau} with an
 *    optional symbolic prefactor q^{offset24/24} carried separately, so
 *    eta-quotients keep integer body exponents.
 *
 * All arithmetic is exact; no coefficient beyond the truncation order is
 * ever claimed.
 */

#include <gmpxx.h>

#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qseries {

using Rational = mpq_class;
using Integer = mpz_class;

/** Exponent pair in half-units: the monomial p^{a/2} q^{b/2}. */
struct Exp2 {
    long a = 0;
    long b = 0;
    long total() const { return a + b; }
    auto operator<=>(const Exp2&) const = default;
};

/** Two-variable truncated Laurent series; see file comment. */
class LaurentSeries2 {
  public:
    explicit LaurentSeries2(long order) : order_(order) {}

    long order() const { return order_; }
    const std::map<Exp2, Rational>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    /** Minimal stored total degree; order+1 when the series is 0. */
    long lower_total() const {
        long m = order_ + 1;
        for (const auto& [e, c] : terms_) m = std::min(m, e.total());
        return m;
    }

    /** Componentwise minimal stored exponents (0,0) for the zero series. */
    std::pair<long, long> lower() const {
        if (terms_.empty()) return {0, 0};
        long la = terms_.begin()->first.a, lb = terms_.begin()->first.b;
        for (const auto& [e, c] : terms_) {
            la = std::min(la, e.a);
            lb = std::min(lb, e.b);
        }
        return {la, lb};
    }

    Rational coeff(long a, long b) const {
        auto it = terms_.find(Exp2{a, b});
        return it == terms_.end() ? Rational(0) : it->second;
    }

    /** Adds c * p^{a/2} q^{b/2}; silently drops terms beyond the order. */
    void add_term(long a, long b, const Rational& c) {
        if (a + b > order_ || c == 0) return;
        Rational& slot = terms_[Exp2{a, b}];
        slot += c;
        if (slot == 0) terms_.erase(Exp2{a, b});
    }

    static LaurentSeries2 zero(long order) { return LaurentSeries2(order); }

    static LaurentSeries2 monomial(const Rational& c, long a, long b, long order) {
        LaurentSeries2 s(order);
        s.add_term(a, b, c);
        return s;
    }

    static LaurentSeries2 one(long order) { return monomial(1, 0, 0, order); }

    /** Re-truncates to a weaker (smaller) order. */
    LaurentSeries2 truncated(long new_order) const;

    LaurentSeries2 operator+(const LaurentSeries2& o) const;
    LaurentSeries2 operator-(const LaurentSeries2& o) const;
    LaurentSeries2 operator*(const Rational& c) const;
    bool operator==(const LaurentSeries2& o) const {
        return order_ == o.order_ && terms_ == o.terms_;
    }

    /** Canonical text form, terms sorted by (a, b): "c*p^(a/2)q^(b/2) + ...". */
    std::string to_string() const;

  private:
    std::map<Exp2, Rational> terms_;
    long order_;
};

/** Exact product, truncated to min(x.order, y.order). */
LaurentSeries2 series_mul(const LaurentSeries2& x, const LaurentSeries2& y);

/**
 * x^k for integer k.  For k < 0 the lowest-total-degree part of x must be a
 * single monomial (geometric-series inversion of the unit part); otherwise
 * throws std::domain_error("not invertible at this truncation").
 */
LaurentSeries2 series_pow_int(const LaurentSeries2& x, long k);

/** One-variable series: q^{offset24/24} * sum_k terms[k] q^k. */
class LaurentSeries1 {
  public:
    explicit LaurentSeries1(long order, long offset24 = 0)
        : order_(order), offset24_(offset24) {}

    long order() const { return order_; }
    long offset24() const { return offset24_; }
    const std::map<long, Rational>& terms() const { return terms_; }

    Rational coeff(long k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void add_term(long k, const Rational& c) {
        if (k > order_ || c == 0) return;
        Rational& slot = terms_[k];
        slot += c;
        if (slot == 0) terms_.erase(k);
    }

    static LaurentSeries1 one(long order) {
        LaurentSeries1 s(order);
        s.add_term(0, 1);
        return s;
    }

    LaurentSeries1 operator*(const LaurentSeries1& o) const;

    /** Multiplicative inverse; requires unit constant term and offset 0 body:
     *  the offset is negated. */
    LaurentSeries1 inverse() const;

    LaurentSeries1 pow_int(long k) const;

    bool operator==(const LaurentSeries1& o) const {
        return order_ == o.order_ && offset24_ == o.offset24_ && terms_ == o.terms_;
    }

  private:
    std::map<long, Rational> terms_;
    long order_;
    long offset24_;  // symbolic prefactor exponent, in 24ths
};

/**
 * prod_i eta(k_i tau)^{e_i} as a LaurentSeries1 in q = e^{2 pi i tau}:
 * body = prod_i prod_{n>0} (1 - q^{k_i n})^{e_i}, offset24 = sum_i e_i k_i.
 */
LaurentSeries1 eta_quotient_qexp(const std::vector<std::pair<long, long>>& factors,
                                 long order);

/**
 * Fourier coefficients c(n) of eta(t)^{-8} eta(2t)^{8} eta(4t)^{-8}
 * = sum_{n >= -1} c(n) q^n, for n = -1 .. n_max.
 */
std::map<long, Integer> c_coeffs(long n_max);

/** q-expansion of the j-invariant, exponents -1 .. order, integer coeffs. */
LaurentSeries1 j_qexp(long order);

/**
 * Both sides of the Monster denominator formula
 *   j(tau) - j(tau') = (p^{-1} - q^{-1}) prod_{m,n>0} (1 - p^m q^n)^{a(mn)},
 * expanded exactly so that every retained coefficient (total degree up to
 * `order` full units on each side) is final.  Returns {lhs, rhs}.
 */
std::pair<LaurentSeries2, LaurentSeries2> monster_denominator_series(long order);

}  // namespace qseries

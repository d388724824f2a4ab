#pragma once

/**
 * Arbitrary-precision evaluation of the classical modular functions used by
 * the identity suite: Dedekind eta, the theta constants theta_2/3/4, the
 * modular lambda, the j-invariant and the Hauptmodul W(z) =
 * 2^{12} eta(2z)^{24}/eta(z)^{24} for Gamma_0(2).
 *
 * Reals are MPFR floats (Boost.Multiprecision); the complex type is a thin
 * struct on top of them.  Every entry point takes a target precision in bits
 * and works internally with 32 guard bits; eta and j reduce the argument to
 * the SL(2,Z) fundamental domain first so the series converge geometrically.
 */

#include <gmpxx.h>

#include <boost/multiprecision/mpfr.hpp>

#include <stdexcept>
#include <string>

#include "qseries.hpp"

namespace modular {

using Real = boost::multiprecision::mpfr_float;

/** Sets the thread's default MPFR precision for `bits` + guard; restores on
 *  destruction.  Every public function instantiates one. */
class PrecisionGuard {
  public:
    explicit PrecisionGuard(long bits);
    ~PrecisionGuard();
    PrecisionGuard(const PrecisionGuard&) = delete;
    PrecisionGuard& operator=(const PrecisionGuard&) = delete;

  private:
    unsigned saved_digits10_;
};

/** Minimal arbitrary-precision complex number. */
struct Complex {
    Real re{0};
    Real im{0};

    Complex() = default;
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    explicit Complex(long v) : re(v), im(0) {}
    explicit Complex(const Real& r) : re(r), im(0) {}

    Complex operator+(const Complex& o) const { return {re + o.re, im + o.im}; }
    Complex operator-(const Complex& o) const { return {re - o.re, im - o.im}; }
    Complex operator-() const { return {-re, -im}; }
    Complex operator*(const Complex& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    Complex operator*(const Real& s) const { return {re * s, im * s}; }
    Complex operator/(const Complex& o) const {
        Real d = o.re * o.re + o.im * o.im;
        return {(re * o.re + im * o.im) / d, (im * o.re - re * o.im) / d};
    }
    Complex& operator+=(const Complex& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    Complex& operator*=(const Complex& o) { return *this = *this * o; }

    Real norm() const { return re * re + im * im; }
    std::string str(unsigned digits = 30) const;
};

Real pi_value();
Real abs(const Complex& z);
Complex exp(const Complex& z);
Complex log(const Complex& z);   // principal branch
Complex sqrt(const Complex& z);  // principal branch
Complex pow_int(const Complex& z, long k);

/** e^{i pi t} for rational t (exact root of unity). */
Complex unit_phase(const qseries::Rational& t);

/** A point of the upper half-plane; construction validates im > 0. */
struct HalfPlanePoint {
    Complex tau;
    explicit HalfPlanePoint(Complex t) : tau(std::move(t)) {
        if (!(tau.im > 0)) throw std::invalid_argument("HalfPlanePoint: im <= 0");
    }
};

/** Dedekind eta, with SL(2,Z) reduction and the pentagonal-number series. */
Complex eta_eval(const HalfPlanePoint& t, long prec_bits);

/** Theta constants: kind 2, 3 or 4. */
Complex theta_eval(int kind, const HalfPlanePoint& t, long prec_bits);

/** lambda = theta_2^4 / theta_3^4. */
Complex lambda_eval(const HalfPlanePoint& t, long prec_bits);

/** Klein j-invariant (SL(2,Z)-reduced, then 256(1-l+l^2)^3/(l^2(1-l)^2)). */
Complex j_eval(const HalfPlanePoint& t, long prec_bits);

/** Weber-type Hauptmodul W(z) = 2^{12} eta(2z)^{24} / eta(z)^{24}. */
Complex weber_eval(const HalfPlanePoint& t, long prec_bits);

/** Numeric value of a one-variable exact series at tau:
 *  q^{offset24/24} * sum c_k q^k with q = e^{2 pi i tau}. */
Complex eval_series1(const qseries::LaurentSeries1& s, const HalfPlanePoint& t,
                     long prec_bits);

}  // namespace modular

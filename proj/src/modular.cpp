#include "modular.hpp"

#include <mpfr.h>

#include <cmath>
#include <sstream>
#include <utility>

namespace modular {

namespace {

long bits_to_digits10(long bits) {
    // ceil(bits * log10(2)) plus slack
    return static_cast<long>(static_cast<double>(bits) * 0.30103) + 6;
}

Real rational_to_real(const qseries::Rational& r) {
    Real num(r.get_num().get_str());
    Real den(r.get_den().get_str());
    return num / den;
}

}  // namespace

PrecisionGuard::PrecisionGuard(long bits) {
    saved_digits10_ = Real::default_precision();
    Real::default_precision(
        static_cast<unsigned>(bits_to_digits10(bits + 32)));
}

PrecisionGuard::~PrecisionGuard() { Real::default_precision(saved_digits10_); }

std::string Complex::str(unsigned digits) const {
    std::ostringstream os;
    os.precision(digits);
    os << re << (im < 0 ? " - " : " + ") << boost::multiprecision::abs(im)
       << "i";
    return os.str();
}

Real pi_value() {
    Real p;
    mpfr_const_pi(p.backend().data(), MPFR_RNDN);
    return p;
}

Real abs(const Complex& z) { return boost::multiprecision::sqrt(z.norm()); }

Complex exp(const Complex& z) {
    Real m = boost::multiprecision::exp(z.re);
    return {m * boost::multiprecision::cos(z.im),
            m * boost::multiprecision::sin(z.im)};
}

Complex log(const Complex& z) {
    return {boost::multiprecision::log(abs(z)),
            boost::multiprecision::atan2(z.im, z.re)};
}

Complex sqrt(const Complex& z) {
    Real r = abs(z);
    Real u = boost::multiprecision::sqrt((r + z.re) / 2);
    Real v = boost::multiprecision::sqrt((r - z.re) / 2);
    if (z.im < 0) v = -v;
    return {u, v};
}

Complex pow_int(const Complex& z, long k) {
    if (k < 0) return Complex(1L) / pow_int(z, -k);
    Complex acc(1L);
    Complex base = z;
    unsigned long e = static_cast<unsigned long>(k);
    while (e) {
        if (e & 1UL) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

Complex unit_phase(const qseries::Rational& t) {
    Real angle = pi_value() * rational_to_real(t);
    return {boost::multiprecision::cos(angle),
            boost::multiprecision::sin(angle)};
}

namespace {

// Working-precision loss threshold for truncating exponentially small tails.
Real tail_log_threshold() {
    return Real(Real::default_precision()) * boost::multiprecision::log(Real(10)) +
           Real(8);
}

struct Reduced {
    Complex tau;      // in (a neighbourhood of) the fundamental domain
    Complex eta_mult; // eta(original) = eta_mult * eta(tau)
};

// SL(2,Z) reduction tracking the eta multiplier:
//   eta(tau + 1)  = e^{i pi/12} eta(tau)
//   eta(-1/tau)   = sqrt(-i tau) eta(tau)
Reduced reduce_sl2(Complex tau) {
    Complex mult(1L);
    const Real pi = pi_value();
    for (int iter = 0; iter < 4096; ++iter) {
        // translate re(tau) into [-1/2, 1/2]
        Real n = boost::multiprecision::floor(tau.re + Real(1) / 2);
        if (n != 0) {
            tau.re -= n;
            Real angle = pi * n / 12;
            mult *= Complex(boost::multiprecision::cos(angle),
                            boost::multiprecision::sin(angle));
        }
        if (tau.norm() >= 1) return {tau, mult};
        // tau -> -1/tau; eta(tau) = eta(-1/tau) / sqrt(-i tau)
        Complex minus_i_tau(tau.im, -tau.re);
        mult = mult / sqrt(minus_i_tau);
        Real d = tau.norm();
        tau = {-tau.re / d, tau.im / d};
    }
    throw std::runtime_error("reduce_sl2: did not converge");
}

// eta at a reduced point via the pentagonal-number series
//   eta(tau) = sum_{k in Z} (-1)^k w^{(6k+1)^2},  w = e^{2 pi i tau / 24}.
Complex eta_series(const Complex& tau) {
    const Real pi = pi_value();
    const Real logcut = tail_log_threshold();
    Complex i_pi_tau_12(-pi * tau.im / 12, pi * tau.re / 12);  // 2 pi i tau/24
    Complex sum(0L);
    for (long k = 0;; ++k) {
        // index k contributes exponent (6k+1)^2, index -k gives (6k-1)^2
        long e_hi = (6 * k + 1) * (6 * k + 1);
        long e_lo = (6 * k - 1) * (6 * k - 1);
        if (k > 0 && pi * tau.im / 12 * e_lo > logcut) break;
        Complex term = exp(i_pi_tau_12 * Real(e_hi));
        if (k > 0) term += exp(i_pi_tau_12 * Real(e_lo));
        if (k % 2) term = -term;
        sum += term;
        if (pi * tau.im / 12 * e_hi > logcut) break;
    }
    return sum;
}

}  // namespace

Complex eta_eval(const HalfPlanePoint& t, long prec_bits) {
    PrecisionGuard guard(prec_bits);
    Complex tau(Real(t.tau.re), Real(t.tau.im));
    Reduced r = reduce_sl2(tau);
    return r.eta_mult * eta_series(r.tau);
}

Complex theta_eval(int kind, const HalfPlanePoint& t, long prec_bits) {
    if (kind < 2 || kind > 4) throw std::invalid_argument("theta_eval: kind");
    PrecisionGuard guard(prec_bits);
    Complex tau(Real(t.tau.re), Real(t.tau.im));
    const Real pi = pi_value();
    const Real logcut = tail_log_threshold();
    Complex i_pi_tau(-pi * tau.im, pi * tau.re);  // i pi tau
    Complex x = exp(i_pi_tau);                    // |x| < 1

    if (kind == 2) {
        // theta_2 = 2 x^{1/4} sum_{n>=0} x^{n(n+1)}
        Complex sum(0L);
        Complex pw(1L);               // x^{n(n+1)}
        Complex step = x * x;         // ratio of consecutive even powers
        Complex run(1L);              // x^{2n}
        for (long n = 0;; ++n) {
            sum += pw;
            if (pi * tau.im * ((n + 1) * (n + 2)) > logcut) break;
            run *= step;              // x^{2(n+1)}
            pw *= run;                // x^{(n+1)(n+2)}
        }
        return exp(i_pi_tau * (Real(1) / 4)) * sum * Real(2);
    }

    // theta_3 = 1 + 2 sum x^{n^2};  theta_4 = 1 + 2 sum (-1)^n x^{n^2}
    Complex sum(1L);
    Complex pw(1L);        // x^{n^2}
    Complex odd = x;       // x^{2n+1}
    Complex step = x * x;
    for (long n = 1;; ++n) {
        pw *= odd;         // x^{n^2}
        odd *= step;
        Complex term = pw * Real(2);
        if (kind == 4 && (n % 2)) term = -term;
        sum += term;
        if (pi * tau.im * ((n + 1) * (n + 1)) > logcut) break;
    }
    return sum;
}

Complex lambda_eval(const HalfPlanePoint& t, long prec_bits) {
    PrecisionGuard guard(prec_bits);
    Complex t2 = theta_eval(2, t, prec_bits + 16);
    Complex t3 = theta_eval(3, t, prec_bits + 16);
    return pow_int(t2 / t3, 4);
}

Complex j_eval(const HalfPlanePoint& t, long prec_bits) {
    PrecisionGuard guard(prec_bits);
    Complex tau(Real(t.tau.re), Real(t.tau.im));
    Reduced r = reduce_sl2(tau);  // j is SL(2,Z)-invariant
    Complex l = lambda_eval(HalfPlanePoint(r.tau), prec_bits + 16);
    Complex one(1L);
    Complex num = pow_int(one - l + l * l, 3) * Real(256);
    Complex den = l * l * pow_int(one - l, 2);
    return num / den;
}

Complex weber_eval(const HalfPlanePoint& t, long prec_bits) {
    PrecisionGuard guard(prec_bits);
    Complex e1 = eta_eval(t, prec_bits + 16);
    Complex e2 = eta_eval(HalfPlanePoint(t.tau * Real(2)), prec_bits + 16);
    Complex ratio = pow_int(e2 / e1, 24);
    return ratio * Real(4096);
}

Complex eval_series1(const qseries::LaurentSeries1& s, const HalfPlanePoint& t,
                     long prec_bits) {
    PrecisionGuard guard(prec_bits);
    Complex tau(Real(t.tau.re), Real(t.tau.im));
    const Real pi = pi_value();
    Complex two_pi_i_tau(-2 * pi * tau.im, 2 * pi * tau.re);
    Complex sum(0L);
    for (const auto& [k, c] : s.terms())
        sum += exp(two_pi_i_tau * Real(k)) * rational_to_real(c);
    // fractional prefactor q^{offset24/24}
    qseries::Rational frac(s.offset24(), 24);
    frac.canonicalize();
    if (frac != 0) sum *= exp(two_pi_i_tau * rational_to_real(frac));
    return sum;
}

}  // namespace modular

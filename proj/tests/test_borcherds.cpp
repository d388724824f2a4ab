#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <vector>

#include "borcherds.hpp"
#include "enriques.hpp"
#include "lattice.hpp"
#include "modular.hpp"
#include "qseries.hpp"

using lattice::IVec;
using lattice::QuadLattice;
using lattice::QVec;
using lattice::Rat;
using modular::Complex;
using modular::HalfPlanePoint;
using modular::Real;
using qseries::LaurentSeries2;
using namespace borcherds;

namespace {

const long kPrec = 192;

HalfPlanePoint im_point(double v) {
    return HalfPlanePoint(Complex(Real(0), Real(v)));
}

double dbl(const Real& r) { return r.convert_to<double>(); }

Real rat_real(const Rat& q) {
    return Real(q.get_num().get_str()) / Real(q.get_den().get_str());
}

/** Numeric value of an exact half-grid series at (tau, tau'):
 *  p^{a/2} q^{b/2} = e^{pi i (a tau + b tau')}. */
Complex eval_series2(const LaurentSeries2& s, const Complex& tau,
                     const Complex& taup) {
    Complex acc(Real(0), Real(0));
    for (const auto& [e, c] : s.terms()) {
        Complex arg = (tau * Real(e.a) + taup * Real(e.b)) *
                      Complex(Real(0), modular::pi_value());
        acc += modular::exp(arg) * rat_real(c);
    }
    return acc;
}

/** Test-side reconstruction of the level-1 chart product at a point with
 *  rational imaginary part y, from the definition: enumerate the cone
 *  vectors up to the cutoff with the generic lattice walker and multiply
 *  the factors one by one. */
Complex phi1_by_definition(const std::vector<Complex>& z, const QVec& y,
                           const Rat& H, long prec) {
    modular::PrecisionGuard guard(prec);
    const QuadLattice& m1 = chart_lattice(1);
    long n = m1.rank();
    // <l, y> <= H and l^2 >= 0 force l^2 <= H^2 / y^2
    Rat yn = m1.norm(y);
    Rat nmax = H * H / yn;
    auto vecs = lattice::enumerate_vectors(m1, Rat(0), nmax, y, Rat(0), H);
    mpz_class nm2 = Rat(nmax / 2).get_num() / Rat(nmax / 2).get_den();
    auto cc = qseries::c_coeffs(nm2.get_si() + 1);
    Complex prod(Real(1), Real(0));
    Complex ipi(Real(0), modular::pi_value());
    Complex one(Real(1), Real(0));
    for (const auto& l : vecs) {
        Complex pair(Real(0), Real(0));
        Rat norm(0);
        for (long i = 0; i < n; ++i) {
            Rat gi(0);
            for (long j = 0; j < n; ++j) gi += m1.gram[i][j] * l[j];
            pair += z[i] * rat_real(gi);
            norm += gi * l[i];
        }
        Complex u = modular::exp(ipi * pair);
        Complex f = (one - u) / (one + u);
        Rat half = norm / 2;
        long e = cc.at(half.get_num().get_si()).get_si();
        prod *= modular::pow_int(f, e);
    }
    return prod;
}

}  // namespace

TEST_CASE("chart lattices: rank, hyperbolic block, doubled root block") {
    const QuadLattice& m1 = chart_lattice(1);
    const QuadLattice& m2 = chart_lattice(2);
    REQUIRE(m1.rank() == 10);
    REQUIRE(m2.rank() == 10);
    CHECK(m1.gram[0][1] == 2);  // U(2)
    CHECK(m2.gram[0][1] == 1);  // U
    CHECK(m1.gram[0][0] == 0);
    CHECK(m2.gram[1][1] == 0);
    for (int i = 2; i < 10; ++i) {
        CHECK(m1.gram[i][i] == -4);  // E8(2) diagonal
        CHECK(m1.gram[i][i] == m2.gram[i][i]);
    }
}

TEST_CASE("shifted enumeration agrees with a naive box scan") {
    std::mt19937 rng(20240817);
    std::uniform_int_distribution<int> entry(-2, 2), diag(1, 4), den(1, 3),
        num(-4, 4);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 1 + trial % 4;
        // random negative definite gram: -(A^T A + I) for a random integer A
        std::vector<std::vector<long>> a(n, std::vector<long>(n));
        for (auto& row : a)
            for (auto& v : row) v = entry(rng);
        QuadLattice l;
        l.gram.assign(n, QVec(n, Rat(0)));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) {
                long s = (i == j) ? diag(rng) : 0;
                for (int k = 0; k < n; ++k) s += a[k][i] * a[k][j];
                l.gram[i][j] = Rat(-s);
                l.gram[j][i] = Rat(-s);
            }
        QVec mu(n);
        for (int i = 0; i < n; ++i) mu[i] = Rat(num(rng)) / den(rng);
        Rat r2 = Rat(diag(rng) * 3);

        auto fast = lattice::enumerate_shifted(l, mu, r2);

        std::vector<IVec> naive;
        // box bound: -(k+mu)^2 >= k_i^2 (min eigenvalue >= 1 by construction)
        long B = 12;
        std::vector<long> idx(n, -B);
        while (true) {
            QVec w(n);
            IVec k(n);
            for (int i = 0; i < n; ++i) {
                k[i] = idx[i];
                w[i] = Rat(idx[i]) + mu[i];
            }
            if (-l.norm(w) <= r2) naive.push_back(k);
            int pos = 0;
            while (pos < n && ++idx[pos] > B) idx[pos++] = -B;
            if (pos == n) break;
        }
        std::sort(naive.begin(), naive.end());
        CHECK(fast == naive);
    }
}

TEST_CASE("level-2 chart near the cusp: 2^8 (q2 - q1)") {
    modular::PrecisionGuard guard(kPrec);
    std::vector<Complex> w(10, Complex(Real(0), Real(0)));
    w[0] = Complex(Real(0), Real(4));  // w1 = 4i
    w[1] = Complex(Real(0), Real(5));  // w2 = 5i
    ProductParams pp;
    auto pv = phi2_eval(w, pp);
    CHECK(pv.tail_bound < 1e-9);
    Real pi = modular::pi_value();
    // 2^8 (e^{2 pi i w2} - e^{2 pi i w1}), both purely real here
    Real lead = (exp(-10 * pi) - exp(-8 * pi)) * 256;
    Real rel = modular::abs(pv.value - Complex(lead, Real(0))) / abs(lead);
    CHECK(dbl(rel) < 1e-8);
}

TEST_CASE("level-1 chart deep in the cone: 1 - 16 e^{pi i <e,z>}") {
    modular::PrecisionGuard guard(kPrec);
    std::vector<Complex> z(10, Complex(Real(0), Real(0)));
    z[0] = Complex(Real(0), Real(3));
    z[1] = Complex(Real(0), Real(5));
    auto pv = phi1_eval(z, {});
    CHECK(pv.tail_bound < 1e-9);
    // dominant factor lambda = f: ((1-u)/(1+u))^8 = 1 - 16u + O(u^2),
    // u = e^{pi i <f,z>} = e^{pi i * 2 * 3i}
    Real dev = abs(Real(1) - pv.value.re) * exp(6 * modular::pi_value()) / 16;
    CHECK(dbl(dev) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(dbl(abs(pv.value.im)) < 1e-30);
}

TEST_CASE("dual route: definition-level product equals the cell evaluator") {
    modular::PrecisionGuard guard(kPrec);
    std::vector<Complex> z(10, Complex(Real(0), Real(0)));
    z[0] = Complex(Real(0), Real(3));
    z[1] = Complex(Real(0), Real(4));
    z[2] = Complex(Real(0), Real(1));  // touch the root block too
    ProductParams pp;
    pp.height_cutoff = Rat(6);
    auto fast = phi1_eval(z, pp);
    QVec y(10, Rat(0));
    y[0] = 3;
    y[1] = 4;
    y[2] = 1;
    Complex slow = phi1_by_definition(z, y, Rat(6), kPrec);
    Real rel = modular::abs(fast.value - slow) / modular::abs(slow);
    CHECK(dbl(rel) < 1e-40);  // same factors, only rounding differs
}

TEST_CASE("truncation stability: two cutoffs differ within the tail bounds") {
    modular::PrecisionGuard guard(kPrec);
    std::vector<Complex> w(10, Complex(Real(0), Real(0)));
    w[0] = Complex(Real(0), Real(3));
    w[1] = Complex(Real(0), Real(4));
    ProductParams lo, hi;
    lo.height_cutoff = Rat(4);
    hi.height_cutoff = Rat(9);
    auto a = phi2_eval(w, lo);
    auto b = phi2_eval(w, hi);
    CHECK(a.tail_bound > 0);
    CHECK(b.tail_bound < a.tail_bound);
    Real rel = modular::abs(a.value - b.value) / modular::abs(b.value);
    // |e^x - 1| <= 2|x| for the discarded log-sum x in the tail regime
    CHECK(dbl(rel) < 2 * (a.tail_bound + b.tail_bound));
}

TEST_CASE("formal and numeric expansions agree for every odd class") {
    modular::PrecisionGuard guard(kPrec);
    auto tau = im_point(3), taup = im_point(4);
    ProductParams pp;
    pp.tail_target = 1e-11;
    for (const auto& gc : enriques::gamma_classes()) {
        if (!gc.odd) continue;
        CAPTURE(gc.id());
        const auto& lg = enriques::build_lambda_gamma(gc);
        auto series = phi_gamma_leading_qexp(lg, 4);
        Complex formal = eval_series2(series, tau.tau, taup.tau);
        auto pv = phi_gamma_eval(lg, tau, taup, pp);
        Real scale = modular::abs(formal);
        Real diff = modular::abs(pv.value - formal);
        CHECK(dbl(diff / scale) < 1e-9);  // order-4 truncation ~ e^{-15 pi}
    }
}

TEST_CASE("leading expansions match the degeneration constants") {
    const auto& cs = enriques::gamma_classes();
    LaurentSeries2 oddprod = LaurentSeries2::one(4);
    int minus = 0, plus = 0;
    for (const auto& gc : cs) {
        if (!gc.odd) continue;
        const auto& lg = enriques::build_lambda_gamma(gc);
        auto s = phi_gamma_leading_qexp(lg, 4);
        if (gc.level == 1) {
            // constant term 1: the expansion is 1 + O(m)
            CHECK(s.coeff(0, 0) == 1);
            CHECK(s.lower_total() == 0);
        } else {
            // -2^8 (p^{1/2} -+ q^{1/2})^2
            CHECK(s.coeff(2, 0) == -256);
            CHECK(s.coeff(0, 2) == -256);
            CHECK((s.coeff(1, 1) == 512 || s.coeff(1, 1) == -512));
            (s.coeff(1, 1) == 512 ? minus : plus)++;
            CHECK(s.lower_total() == 2);
        }
        oddprod = qseries::series_mul(oddprod, s);
    }
    CHECK(minus == 1);  // one sign each
    CHECK(plus == 1);
    // product of the six: 2^16 (p - q)^2 + higher order
    CHECK(oddprod.lower_total() == 4);
    CHECK(oddprod.coeff(4, 0) == 65536);
    CHECK(oddprod.coeff(0, 4) == 65536);
    CHECK(oddprod.coeff(2, 2) == -131072);
    CHECK(oddprod.coeff(3, 1) == 0);
    CHECK(oddprod.coeff(1, 3) == 0);
}

TEST_CASE("diagonal parity: odd restriction vanishes, even does not") {
    modular::PrecisionGuard guard(kPrec);
    auto tau = im_point(2), taup = im_point(2);
    ProductParams pp;
    const auto& odd = enriques::build_lambda_gamma(
        enriques::gamma_by_id("0,0,1/2,1/2"));
    auto pv = phi_gamma_eval(odd, tau, taup, pp);
    CHECK(dbl(modular::abs(pv.value)) == 0.0);  // exact divisor zero
    const auto& even = enriques::build_lambda_gamma(
        enriques::gamma_by_id("1/2,0,0,0"));
    auto ev = phi_gamma_eval(even, tau, taup, pp);
    CHECK(dbl(modular::abs(ev.value)) > 1e-12);
}

TEST_CASE("petersson norm matches its definition and the weight") {
    modular::PrecisionGuard guard(kPrec);
    const auto& lg = enriques::build_lambda_gamma(
        enriques::gamma_by_id("0,0,1/2,1/2"));
    auto tau = im_point(2), taup = im_point(3);
    ProductParams pp;
    auto pv = phi_gamma_eval(lg, tau, taup, pp);
    Real n = petersson_norm(lg, tau, taup, pp);
    Real expect = pow(Real(6), 4) * pv.value.norm();
    CHECK(dbl(abs(n - expect) / expect) < 1e-20);
}

TEST_CASE("automorphy defect under Gamma(2) x Gamma(2)") {
    modular::PrecisionGuard guard(kPrec);
    const auto& lg = enriques::build_lambda_gamma(
        enriques::gamma_by_id("0,0,1/2,1/2"));
    lattice::IMat t2 = {{1, 2}, {0, 1}};
    lattice::IMat id = {{1, 0}, {0, 1}};
    lattice::IMat s2 = {{1, 0}, {2, 1}};
    auto tau = HalfPlanePoint(Complex(Real(-1) / 2, Real(1) / 2));
    auto taup = im_point(10);
    ProductParams pp;
    CHECK(dbl(automorphy_defect(lg, t2, id, tau, taup, pp)) < 1e-8);
    CHECK(dbl(automorphy_defect(lg, s2, t2, tau, taup, pp)) < 1e-8);
    lattice::IMat t1 = {{1, 1}, {0, 1}};  // not in Gamma(2)
    CHECK_THROWS_AS(automorphy_defect(lg, t1, id, tau, taup, pp),
                    std::invalid_argument);
}

TEST_CASE("positive-cone precondition is enforced") {
    modular::PrecisionGuard guard(kPrec);
    std::vector<Complex> z(10, Complex(Real(0), Real(0)));
    z[0] = Complex(Real(0), Real(1));
    z[1] = Complex(Real(0), Real(-1));  // y^2 < 0
    CHECK_THROWS_AS(phi1_eval(z, {}), std::invalid_argument);
}

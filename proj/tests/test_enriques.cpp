#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "enriques.hpp"

using lattice::IVec;
using lattice::QVec;
using lattice::Rat;
using namespace enriques;

namespace {

const Rat kHalf(1, 2);

QVec amb12(std::initializer_list<Rat> kpart,
           std::initializer_list<Rat> e8part = {}) {
    QVec x(12, Rat(0));
    size_t i = 0;
    for (const Rat& c : kpart) x[i++] = c;
    i = 4;
    for (const Rat& c : e8part) x[i++] = c;
    return x;
}

}  // namespace

TEST_CASE("the fifteen classes: count, parity, level") {
    const auto& cs = gamma_classes();
    REQUIRE(cs.size() == 15);

    int odd1 = 0, odd2 = 0, even1 = 0, even2 = 0;
    std::set<std::string> ids;
    for (const auto& g : cs) {
        ids.insert(g.id());
        if (g.odd)
            (g.level == 1 ? odd1 : odd2)++;
        else
            (g.level == 1 ? even1 : even2)++;
        // level is the divisibility of the class: 1 iff the f-coordinate
        // is a half
        CHECK(g.level == ((g.d1[1] == kHalf) ? 1 : 2));
    }
    CHECK(ids.size() == 15);  // all distinct
    CHECK(odd1 == 4);
    CHECK(odd2 == 2);
    CHECK(even1 == 4);
    CHECK(even2 == 5);

    // parity matches the K-discriminant quadratic form value
    lattice::QuadLattice k = lattice::standard_lattice("K");
    for (const auto& g : cs) {
        Rat q = k.norm(g.d1);
        CHECK((q == 1) == g.odd);
    }

    // the odd norm -1 representatives
    for (const auto& g : cs) {
        if (!g.odd) {
            CHECK(g.d1_root == g.d1);
            continue;
        }
        CHECK(k.norm(g.d1_root) == -1);
        for (int i = 0; i < 4; ++i) {
            Rat diff = g.d1_root[i] - g.d1[i];
            CHECK(diff.get_den() == 1);  // same discriminant class
        }
    }

    CHECK(gamma_by_id("0,0,1/2,1/2").level == 2);
    CHECK(gamma_by_id("0,0,1/2,1/2").odd);
    CHECK_THROWS(gamma_by_id("bogus"));
}

TEST_CASE("glue lattices: invariants and frame pairings for all classes") {
    for (const auto& g : gamma_classes()) {
        CAPTURE(g.id());
        const LambdaGamma& lg = build_lambda_gamma(g);

        // index-2 overlattice of K + E8(2), even, with the fixed invariants
        lattice::Invariants inv = lattice::invariants(lg.lambda);
        CHECK(inv == lattice::Invariants{{2, 10}, 10, 0});
        Rat det = lattice::mat_det(lg.lambda.gram);
        CHECK((det < 0 ? -det : det) == 1024);

        const long ell = g.level;
        CHECK(lg.lambda.norm(lg.v) == 0);
        CHECK(lg.lambda.norm(lg.v_prime) == 0);
        CHECK(lg.lambda.pair(lg.v, lg.v_prime) == ell);
        CHECK(lattice::isotropic_level(lg.lambda, lg.v) == ell);
        CHECK(lattice::isotropic_level(lg.lambda, lg.v_prime) == ell);

        // the orthogonal complement splits off U(ell) exactly
        Rat dm = lattice::mat_det(lg.m_gamma.gram);
        if (dm < 0) dm = -dm;
        CHECK(dm * ell * ell == 1024);
        lattice::Invariants minv = lattice::invariants(lg.m_gamma);
        CHECK(minv.sig == lattice::Signature{1, 9});
        CHECK(minv.parity == 0);
        CHECK(minv.disc_rank == (ell == 1 ? 10 : 8));

        const long rho_level = 2 / ell;
        CHECK(lg.m_gamma.norm(lg.rho) == 0);
        CHECK(lg.m_gamma.norm(lg.rho_prime) == 0);
        CHECK(lg.m_gamma.pair(lg.rho, lg.rho_prime) == rho_level);
        CHECK(lg.m_gamma.norm(lg.pos_cone) == 2 * rho_level);
    }
}

TEST_CASE("explicit level-2 odd frames match the closed-form period map") {
    // gamma = (0,0,1/2,1/2): phi = (0, 0, -tau/2, -tau'/2 | 0)
    {
        const LambdaGamma& lg = build_lambda_gamma(gamma_by_id("0,0,1/2,1/2"));
        PeriodDecomposition pd = period_decomposition(lg);
        CHECK(ambient_of(lg.m_gamma, pd.a0) == amb12({0, 0, 0, 0}));
        CHECK(ambient_of(lg.m_gamma, pd.a1) == amb12({0, 0, -kHalf, 0}));
        CHECK(ambient_of(lg.m_gamma, pd.a2) == amb12({0, 0, 0, -kHalf}));
        CHECK(ambient_of(lg.lambda, lg.v_prime) == amb12({0, 1, 0, 0}));
    }
    // gamma = (1/2,0,1/2,1/2): phi = (tau'/2, 0, (1-tau)/2, -tau'/2 | 0)
    {
        const LambdaGamma& lg = build_lambda_gamma(gamma_by_id("1/2,0,1/2,1/2"));
        PeriodDecomposition pd = period_decomposition(lg);
        CHECK(ambient_of(lg.m_gamma, pd.a0) == amb12({0, 0, kHalf, 0}));
        CHECK(ambient_of(lg.m_gamma, pd.a1) == amb12({0, 0, -kHalf, 0}));
        CHECK(ambient_of(lg.m_gamma, pd.a2) == amb12({kHalf, 0, 0, -kHalf}));
        CHECK(ambient_of(lg.lambda, lg.v_prime) == amb12({0, 1, 1, 0}));
    }
}

TEST_CASE("period decomposition: isotropic directions for every class") {
    for (const auto& g : gamma_classes()) {
        CAPTURE(g.id());
        const LambdaGamma& lg = build_lambda_gamma(g);
        PeriodDecomposition pd = period_decomposition(lg);
        CHECK(lg.m_gamma.norm(pd.a1) == 0);
        CHECK(lg.m_gamma.norm(pd.a2) == 0);
        CHECK(lg.m_gamma.pair(pd.a1, pd.a2) == kHalf);
        // level-2 classes: pairings with the lattice are half-integral at
        // worst, so 2*a1 pairs integrally (the exponents use e^{pi i <.,.>})
        for (long i = 0; i < 10; ++i) {
            IVec basis(10, 0);
            basis[i] = 1;
            Rat p1 = lg.m_gamma.pair(basis, pd.a1) * 2;
            Rat p2 = lg.m_gamma.pair(basis, pd.a2) * 2;
            CHECK(p1.get_den() == 1);
            CHECK(p2.get_den() == 1);
        }
    }
}

TEST_CASE("numeric period points land in the right component") {
    modular::PrecisionGuard guard(128);
    modular::HalfPlanePoint tau(modular::Complex(modular::Real(0),
                                                 modular::Real(2)));
    modular::HalfPlanePoint taup(modular::Complex(modular::Real(0),
                                                  modular::Real(3)));
    for (const auto& g : gamma_classes()) {
        CAPTURE(g.id());
        const LambdaGamma& lg = build_lambda_gamma(g);
        PeriodPoint pp = period_point(lg, tau, taup, 128);
        REQUIRE(pp.coords.size() == 10);
        // <Im z, Im z> = im(tau) im(tau') = 6
        CHECK(boost::multiprecision::abs(pp.im_norm - 6) <
              modular::Real("1e-30"));
    }
    // skew points exercise the cone check away from the diagonal
    modular::HalfPlanePoint t2(modular::Complex(modular::Real("0.5"),
                                                modular::Real("0.9")));
    modular::HalfPlanePoint t2p(modular::Complex(modular::Real(0),
                                                 modular::Real(7)));
    for (const auto& g : gamma_classes()) {
        CAPTURE(g.id());
        CHECK_NOTHROW(period_point(build_lambda_gamma(g), t2, t2p, 128));
    }
}

TEST_CASE("root witnesses separate the parities") {
    for (const auto& g : gamma_classes()) {
        CAPTURE(g.id());
        const LambdaGamma& lg = build_lambda_gamma(g);
        auto w = odd_root_witness(lg);
        CHECK(w.has_value() == g.odd);
        if (w) CHECK(lg.lambda.norm(*w) == -2);
    }
    // the witness for (0,0,1/2,1/2) is one of +-w' +- r from its frame
    const LambdaGamma& lg = build_lambda_gamma(gamma_by_id("0,0,1/2,1/2"));
    auto w = odd_root_witness(lg);
    REQUIRE(w.has_value());
    QVec delta = ambient_of(lg.lambda, *w);
    bool matches = false;
    for (int s1 : {1, -1})
        for (int s2 : {1, -1}) {
            QVec cand(12, Rat(0));
            for (int i = 0; i < 12; ++i)
                cand[i] = Rat(s1) * (*lg.frame.w_prime)[i] +
                          Rat(s2) * (*lg.frame.r)[i];
            if (cand == delta) matches = true;
        }
    CHECK(matches);
}

TEST_CASE("coordinate helpers round-trip and reject outsiders") {
    const LambdaGamma& lg = build_lambda_gamma(gamma_by_id("0,0,1/2,1/2"));
    QVec amb = ambient_of(lg.lambda, lg.v_prime);
    QVec coords = coords_in(lg.lambda, amb);
    for (int i = 0; i < 12; ++i) CHECK(coords[i] == lg.v_prime[i]);
    // v is not orthogonal to itself's pairing partner v', so it cannot lie
    // in the rank-10 complement
    CHECK_THROWS(coords_in(lg.m_gamma, amb12({1, 0, 0, 0})));
}

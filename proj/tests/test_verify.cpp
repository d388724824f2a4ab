#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "modular.hpp"
#include "verify.hpp"

using modular::Complex;
using modular::HalfPlanePoint;
using modular::Real;
using namespace verify;

namespace {

HalfPlanePoint im_point(double v) {
    return HalfPlanePoint(Complex(Real(0), Real(v)));
}

}  // namespace

TEST_CASE("rational and complex literal parsing") {
    CHECK(parse_rational("3") == lattice::Rat(3));
    CHECK(parse_rational("-5/10") == lattice::Rat(-1, 2));
    CHECK(parse_rational("2.25") == lattice::Rat(9, 4));
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);

    Complex z = parse_complex("1/2+3i", 128);
    CHECK(z.re.convert_to<double>() == doctest::Approx(0.5));
    CHECK(z.im.convert_to<double>() == doctest::Approx(3.0));
    z = parse_complex("5i/2", 128);
    CHECK(z.re.convert_to<double>() == 0.0);
    CHECK(z.im.convert_to<double>() == doctest::Approx(2.5));
    z = parse_complex("-i", 128);
    CHECK(z.im.convert_to<double>() == doctest::Approx(-1.0));
    z = parse_complex("2", 128);
    CHECK(z.im.convert_to<double>() == 0.0);
}

TEST_CASE("denominator formula report: exact pass and sane schema") {
    Report r = verify_denominator(6);
    CHECK(r.pass);
    CHECK(r.status == "pass");
    CHECK(r.lhs == r.rhs);  // digests of identical series
    auto j = nlohmann::json::parse(r.to_json());
    CHECK(j["check_name"] == "denominator");
    CHECK(j["inputs"]["order"] == 6);
    CHECK(j["pass"] == true);
    CHECK(j["params"]["antisymmetric"] == true);
    CHECK_THROWS_AS(verify_denominator(0), std::invalid_argument);
}

TEST_CASE("odd leading report: exact 2^16 (p-q)^2") {
    Report r = verify_odd_leading(4);
    CHECK(r.pass);
    CHECK(r.lhs == r.rhs);
    CHECK_THROWS_AS(verify_odd_leading(2), std::invalid_argument);
}

TEST_CASE("appendix report") {
    Report r = verify_appendix();
    CHECK(r.pass);
    CHECK(r.lhs == r.rhs);
}

TEST_CASE("section 8 suite at the reference point") {
    Params p;
    Report r = verify_section8(im_point(4), im_point(5), p);
    CHECK(r.pass);
    auto j = nlohmann::json::parse(r.to_json());
    CHECK(j["params"]["multiset_rel_error"].get<double>() < 1e-5);
    CHECK(j["params"]["cusp_rel_error"].get<double>() < 1e-4);
    CHECK(j["params"]["weber_rel_error"].get<double>() < 1e-3);
    // the derived relation uses the ninth power of the sublattice form
    CHECK(j["params"]["observed_exponent"].get<double>() ==
          doctest::Approx(9.0).epsilon(0.02));
}

TEST_CASE("even product and main theorem agree at (3i, 4i)") {
    Params p;
    Report even = verify_even_product(im_point(3), im_point(4), p);
    CHECK(even.pass);
    CHECK(even.rel_error < 1e-8);

    Report main = verify_main_theorem(im_point(3), im_point(4), p);
    CHECK(main.pass);
    CHECK(main.rel_error < 1e-8);
    auto j = nlohmann::json::parse(main.to_json());
    CHECK(j["params"]["rel_error_between_routes"].get<double>() < 1e-8);
    CHECK(j["params"]["max_tail_bound"].get<double>() <= 1e-9);
}

TEST_CASE("main theorem on the diagonal reports degenerate") {
    Params p;
    Report r = verify_main_theorem(im_point(2), im_point(2), p);
    CHECK(r.pass);
    CHECK(r.status == "degenerate");
    CHECK(r.abs_error == 0.0);  // both sides exactly zero
}

TEST_CASE("reports are deterministic up to the runtime field") {
    Report a = verify_denominator(5);
    Report b = verify_denominator(5);
    a.runtime_ms = b.runtime_ms = 0;
    CHECK(a.to_json() == b.to_json());
}

TEST_CASE("cli: exit codes and JSON output") {
    const char* ok[] = {"phi", "verify", "denominator", "--order", "5",
                        "--json", "/tmp/phi_cli_test.json"};
    CHECK(cli_run(7, ok) == 0);
    std::ifstream in("/tmp/phi_cli_test.json");
    nlohmann::json arr = nlohmann::json::parse(in);
    REQUIRE(arr.is_array());
    CHECK(arr.size() == 1);
    CHECK(arr[0]["check_name"] == "denominator");
    std::remove("/tmp/phi_cli_test.json");

    const char* bad[] = {"phi", "verify", "nonsense"};
    CHECK(cli_run(3, bad) == 2);
    const char* badflag[] = {"phi", "eval", "j", "--at", "not-a-number"};
    CHECK(cli_run(5, badflag) == 2);
    const char* evalj[] = {"phi", "eval", "j", "--at", "i"};
    CHECK(cli_run(5, evalj) == 0);  // j(i) = 1728
    const char* latt[] = {"phi", "lattice", "info", "--name", "E8_2"};
    CHECK(cli_run(5, latt) == 0);
    const char* qexp[] = {"phi", "qexp", "phi", "--gamma", "0,0,1/2,1/2",
                          "--order", "2"};
    CHECK(cli_run(7, qexp) == 0);
}

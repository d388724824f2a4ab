#pragma once

/**
 * Top-level identity suite and CLI driver.
 *
 * Each check computes both sides of one of the product identities
 * independently and emits a self-contained machine-readable report:
 *
 *  - main:        2^{-96} (j(tau) - j(tau'))^{12} against the odd/even
 *                 restriction products, with the even product evaluated two
 *                 ways (per-class and via the eta closed form).
 *  - even:        the nine even restriction squares against
 *                 2^{96} eta(tau)^{144} eta(tau')^{144}.
 *  - odd-leading: the exact leading part of the product of the six odd
 *                 restriction expansions against 2^{16} (p - q)^2.
 *  - denominator: the two sides of the Monster denominator formula,
 *                 coefficientwise over Z.
 *  - section8:    the theta-quotient multiset, the rank-2 sublattice form
 *                 at both cusps, and its Weber-function consistency check.
 *  - appendix:    glue-lattice invariants and SL2 isometry lifts.
 *
 * All tolerances, cutoffs, and tail bounds appear in the report; there are
 * no silent defaults.
 */

#include <string>
#include <vector>

#include "lattice.hpp"
#include "modular.hpp"

namespace verify {

struct Params {
    long prec = 192;             // working precision, bits
    double tail_target = 1e-10;  // requested product tail bound
    double tolerance = 1e-6;     // relative tolerance for numeric checks
    lattice::Rat height_cutoff{0};  // 0 = automatic from tail_target
    int threads = 1;                // concurrent checks in run_all
};

struct Report {
    std::string check_name;
    std::string inputs;  // JSON object: the evaluation point / order
    std::string lhs;     // decimal string or series digest
    std::string rhs;
    double abs_error = 0;
    double rel_error = 0;
    double tolerance = 0;
    bool pass = false;
    std::string status;  // "pass", "fail" or "degenerate"
    long runtime_ms = 0;
    std::string params;  // JSON object: cutoffs, precisions, tail bounds

    std::string to_json() const;  // one JSON object, keys in schema order
    std::string to_line() const;  // human-readable table row
};

Report verify_main_theorem(const modular::HalfPlanePoint& tau,
                           const modular::HalfPlanePoint& tau_prime,
                           const Params& params = {});

Report verify_even_product(const modular::HalfPlanePoint& tau,
                           const modular::HalfPlanePoint& tau_prime,
                           const Params& params = {});

/** order is in half-units of the expansion grid; at least 4 is required to
 *  see the full leading part. */
Report verify_odd_leading(long order);

Report verify_denominator(long order);

Report verify_section8(const modular::HalfPlanePoint& z1,
                       const modular::HalfPlanePoint& z2,
                       const Params& params = {});

Report verify_appendix();

/** All six checks at the given points/orders, sorted by check name.
 *  params.threads > 1 runs them concurrently. */
std::vector<Report> run_all(const modular::HalfPlanePoint& tau,
                            const modular::HalfPlanePoint& tau_prime,
                            const modular::HalfPlanePoint& z1,
                            const modular::HalfPlanePoint& z2,
                            long order, const Params& params = {});

/** "a+bi" / "2i" / "5i/2" / "-1/2+3i" -> Complex at the given precision. */
modular::Complex parse_complex(const std::string& text, long prec);

/** Integer, fraction "p/q", or finite decimal -> exact rational. */
lattice::Rat parse_rational(const std::string& text);

/** The `phi` command line: subcommands verify / qexp / eval / lattice.
 *  Returns 0 (all requested checks pass), 1 (a check failed) or 2 (usage). */
int cli_run(int argc, const char* const* argv);

}  // namespace verify

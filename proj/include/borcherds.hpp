#pragma once

/**
 * Infinite-product evaluation of the weight-4 automorphic form on the
 * rank-10 tube domains attached to the two cusp charts, its restrictions
 * Phi_gamma along the affine period maps of the involution classes, exact
 * leading q-expansions, Petersson norms, and automorphy defects.
 *
 * Chart conventions (Gram conventions as in lattice.hpp):
 *  - level-1 chart on M1 = U(2) + E8(2), basis (e, f | alpha_1..alpha_8):
 *      Phi1(z) = prod_{l in M1 cap closure(C+), l != 0}
 *                ((1 - e^{pi i <l,z>}) / (1 + e^{pi i <l,z>}))^{c(l^2/2)}
 *  - level-2 chart on M2 = U + E8(2), basis (e1, f1 | alpha_1..alpha_8):
 *      Phi2(w) = 2^8 e^{2 pi i <e1,w>}
 *                prod_{l in Z_{>0} e1 or <l,e1> > 0, l^2 >= -2}
 *                (1 - e^{2 pi i <l,w>})^{(-1)^{<l,e1-f1>} c(l^2/2)}
 * with c(n) the coefficients of eta(t)^{-8} eta(2t)^8 eta(4t)^{-8}.
 *
 * Phi_gamma(tau, tau') evaluates the same products intrinsically on M_gamma
 * at the period point phi_gamma(tau,tau') = a0 + a1 tau + a2 tau', using the
 * frame (rho, rho') in place of (e1, f1) for level-2 classes.
 *
 * Truncation is by the height <l, Im z>; every discarded factor is covered
 * by the reported a-posteriori tail bound (see PhiValue).
 */

#include <vector>

#include "enriques.hpp"
#include "lattice.hpp"
#include "modular.hpp"
#include "qseries.hpp"

namespace borcherds {

struct ProductParams {
    /** Height cutoff H: include lattice factors with <l, Im z> <= H.
     *  0 (default) selects H automatically from tail_target. */
    lattice::Rat height_cutoff{0};
    long prec = 192;          // working precision, bits
    double tail_target = 1e-10;  // requested bound on the discarded log-sum
};

struct PhiValue {
    modular::Complex value;
    /** Upper bound on |sum of log-factors discarded by the height cutoff|;
     *  the relative accuracy of `value` up to arithmetic rounding. */
    double tail_bound = 0;
    long terms_used = 0;  // number of lattice vectors multiplied in
};

/** The chart lattices: "M1" = U(2)+E8(2), "M2" = U+E8(2). */
const lattice::QuadLattice& chart_lattice(int level);

/** Level-1 chart product at z in M1 x C, Im z interior to the positive cone. */
PhiValue phi1_eval(const std::vector<modular::Complex>& z,
                   const ProductParams& params = {});

/** Level-2 chart product at w in M2 x C, Im w interior to the positive cone. */
PhiValue phi2_eval(const std::vector<modular::Complex>& w,
                   const ProductParams& params = {});

/** Phi_gamma(tau, tau'): the chart product of lg's level transported to
 *  M_gamma, evaluated at the period point.  Exact zero on a vanishing
 *  divisor factor is returned as value 0. */
PhiValue phi_gamma_eval(const enriques::LambdaGamma& lg,
                        const modular::HalfPlanePoint& tau,
                        const modular::HalfPlanePoint& tau_prime,
                        const ProductParams& params = {});

/** Exact expansion of Phi_gamma in Z{p^{1/2}, q^{1/2}} to total degree
 *  `order` half-units (p = e^{2 pi i tau}, q = e^{2 pi i tau'}).  Throws
 *  std::domain_error if the expansion leaves the half-integer grid or the
 *  coefficient ring (does not happen for the implemented classes). */
qseries::LaurentSeries2 phi_gamma_leading_qexp(const enriques::LambdaGamma& lg,
                                               long order);

/** (Im tau * Im tau')^4 |Phi_gamma(tau, tau')|^2. */
modular::Real petersson_norm(const enriques::LambdaGamma& lg,
                             const modular::HalfPlanePoint& tau,
                             const modular::HalfPlanePoint& tau_prime,
                             const ProductParams& params = {});

/** Relative defect of the weight-8 functional equation of Phi_gamma^2 under
 *  (g, g') in Gamma(2) x Gamma(2):
 *  |Phi(g tau, g' tau')^2 - (c tau + d)^8 (c' tau' + d')^8 Phi(tau,tau')^2|
 *  over |(c tau + d)^8 (c' tau' + d')^8 Phi(tau,tau')^2|.
 *  Throws if g or g' is not in Gamma(2). */
modular::Real automorphy_defect(const enriques::LambdaGamma& lg,
                                const lattice::IMat& g,
                                const lattice::IMat& g_prime,
                                const modular::HalfPlanePoint& tau,
                                const modular::HalfPlanePoint& tau_prime,
                                const ProductParams& params = {});

}  // namespace borcherds

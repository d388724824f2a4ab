#pragma once

/**
 * The 15 nonzero involution classes gamma of the discriminant group of
 * K = U(2) + U(2): parity and level, the rank-12 glue lattice
 * Lambda_gamma = Z(d1 + d2) + (K + E8(2)), isotropic frame vectors
 * (v, v', rho, rho'), the rank-10 sublattice M_gamma, and the affine period
 * map phi_gamma(tau, tau') = A0 + A1 tau + A2 tau' into M_gamma x C.
 *
 * Ambient coordinates are always with respect to the K + E8(2) basis
 * (e, f, e', f' | alpha_1..alpha_8), rank 12.
 */

#include <optional>
#include <string>
#include <vector>

#include "lattice.hpp"
#include "modular.hpp"

namespace enriques {

struct GammaClass {
    lattice::QVec d1;       // 4 entries in {0, 1/2}, class in the dual of K
    lattice::QVec d1_root;  // representative of the same class with norm -1
                            // (odd classes; equals d1 for even ones)
    bool odd = false;
    int level = 1;  // 1 or 2
    lattice::QVec d2;  // 8 entries, half-vector in the dual of E8(2)

    std::string id() const;  // e.g. "0,0,1/2,1/2"
};

/** The 6 odd classes (level 1 first, fixed order) then the 9 even classes
 *  in lexicographic order. */
const std::vector<GammaClass>& gamma_classes();
const GammaClass& gamma_by_id(const std::string& id);

struct Frame {  // explicit level-2 frame data, ambient coordinates
    std::optional<lattice::QVec> w, w_prime, r;
};

struct LambdaGamma {
    GammaClass gamma;
    lattice::QuadLattice ambient;  // K + E8(2)
    lattice::QuadLattice lambda;   // rank 12, basis_in_ambient set
    lattice::IVec v, v_prime;      // Lambda_gamma coordinates; v is (1,0,..|0)
    lattice::QuadLattice m_gamma;  // rank 10 = v-perp ∩ v'-perp, ambient basis
    lattice::IVec rho, rho_prime;  // M_gamma coordinates, level 2/level
    Frame frame;
    lattice::QVec pos_cone;  // rho + rho' in M_gamma coordinates
};

/** Builds the glue lattice and frame for a class; the two odd level-2
 *  classes use the fixed textbook frame, all others a deterministic search.
 *  Cached per class (returned reference is stable). */
const LambdaGamma& build_lambda_gamma(const GammaClass& g);

/** phi_gamma(tau,tau') = a0 + a1 tau + a2 tau' in M_gamma coordinates;
 *  exact rational data with a1^2 = a2^2 = 0 and <a1,a2> = 1/2. */
struct PeriodDecomposition {
    lattice::QVec a0, a1, a2;
};
PeriodDecomposition period_decomposition(const LambdaGamma& lg);

struct PeriodPoint {
    std::vector<modular::Complex> coords;  // length 10, M_gamma basis
    modular::Real im_norm;                 // <Im z, Im z> = im tau * im tau'
};
PeriodPoint period_point(const LambdaGamma& lg,
                         const modular::HalfPlanePoint& tau,
                         const modular::HalfPlanePoint& tau_prime,
                         long prec_bits);

/** For odd classes: a vector delta in Lambda_gamma with delta^2 = -2 whose
 *  K- and E8-parts both have norm -1.  For even classes: nullopt, after the
 *  finite checks that no root can have negative K-part norm. */
std::optional<lattice::IVec> odd_root_witness(const LambdaGamma& lg);

// coordinate helpers (exact; throw if the vector is not in the span)
lattice::QVec ambient_of(const lattice::QuadLattice& sub,
                         const lattice::IVec& coords);
lattice::QVec ambient_of(const lattice::QuadLattice& sub,
                         const lattice::QVec& coords);
lattice::QVec coords_in(const lattice::QuadLattice& sub,
                        const lattice::QVec& ambient);

}  // namespace enriques

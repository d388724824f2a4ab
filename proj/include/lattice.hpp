#pragma once

/**
 * Exact integral/rational quadratic lattices.
 *
 * A lattice is a rank-r free module with a nondegenerate symmetric rational
 * Gram matrix, optionally remembering how its basis sits inside an ambient
 * lattice.  Provides the standard constructors (hyperbolic planes, rescaled
 * E8, their sums), Nikulin invariants for 2-elementary lattices, discriminant
 * groups with quadratic-form values, characteristic vectors, the glue
 * construction used by the rank-12 isometry check, SL(2,Z) lifts to O(U + U),
 * and the performance-critical constrained vector enumeration (exact
 * Fincke-Pohst with a height-majorant, no floating-point boundary decisions).
 */

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace lattice {

using Rat = mpq_class;
using Int = mpz_class;
using QVec = std::vector<Rat>;   // rational coordinates in a lattice basis
using IVec = std::vector<long>;  // integer coordinates in a lattice basis
using QMat = std::vector<QVec>;
using IMat = std::vector<std::vector<Int>>;

// ---------------------------------------------------------------- linear algebra

QMat mat_mul(const QMat& a, const QMat& b);
QMat mat_transpose(const QMat& a);
Rat mat_det(QMat a);                 // Gaussian elimination over Q
QMat mat_inverse(const QMat& a);     // throws on singular input
QVec mat_apply(const QMat& a, const QVec& x);

/** Row Hermite normal form; returns the nonzero rows. */
IMat hnf_rows(IMat a);

/** Basis of the saturated integer kernel {x : a·x = 0} (column-style HNF
 *  with transform; result rows are a lattice basis of the kernel). */
IMat integer_kernel(const IMat& a);

// ---------------------------------------------------------------- lattices

struct QuadLattice {
    QMat gram;
    std::optional<QMat> basis_in_ambient;  // rows = basis vectors, ambient coords

    long rank() const { return static_cast<long>(gram.size()); }
    Rat pair(const QVec& x, const QVec& y) const;
    Rat pair(const IVec& x, const IVec& y) const;
    Rat pair(const IVec& x, const QVec& y) const;
    Rat norm(const IVec& x) const { return pair(x, x); }
    Rat norm(const QVec& x) const { return pair(x, x); }
};

struct Signature {
    long pos = 0;
    long neg = 0;
    bool operator==(const Signature&) const = default;
};

struct Invariants {
    Signature sig;
    long disc_rank = 0;  // F2-rank of the discriminant group
    int parity = 0;      // 0 iff the discriminant form is integer-valued
    bool operator==(const Invariants&) const = default;
};

struct DiscGroup {
    long dim = 0;
    std::vector<QVec> reps;   // coset representatives, entries in {0, 1/2}
    std::vector<Rat> qvals;   // x.G.x reduced mod 2 into [0,2)
    int parity = 0;
};

/** Gram conventions: U = [[0,1],[1,0]]; U2 = [[0,2],[2,0]];
 *  E8_2 = -2 * (E8 Cartan matrix, Bourbaki node numbering);
 *  K = U2 + U2; Lambda = U2 + U + E8_2 (that summand order);
 *  I29_2 = 2 diag(1,1,-1,...,-1) of rank 11. */
QuadLattice standard_lattice(const std::string& name);

QuadLattice direct_sum(const QuadLattice& a, const QuadLattice& b);

/** Sublattice spanned by rational rows `basis` inside `ambient`;
 *  gram = B G Bt, basis_in_ambient = B. */
QuadLattice sublattice(const QuadLattice& ambient, const QMat& basis);

Signature signature_of(const QMat& gram);

/** Nikulin triple (signature, discriminant rank, parity).
 *  Throws if the discriminant group is not 2-elementary. */
Invariants invariants(const QuadLattice& l);

/** Full discriminant group of a 2-elementary lattice (rank <= 12). */
DiscGroup disc_group(const QuadLattice& l);

/** Exactly all v in L with norm_min <= v^2 <= norm_max and
 *  h_min < <v, height> <= h_max, sorted by (height value, lex coords).
 *  Requires -gram + height-majorant positive definite (height in the
 *  positive cone for signature (1, r-1), or zero height on a negative
 *  definite lattice); throws otherwise. */
std::vector<IVec> enumerate_vectors(const QuadLattice& l, const Rat& norm_min,
                                    const Rat& norm_max, const QVec& height,
                                    const Rat& h_min, const Rat& h_max);

/** Exactly all k in L with -(k + mu)^2 <= r2, for a negative definite L and
 *  a rational center mu (coordinates in the basis of L); returns the
 *  coordinate vectors sorted lexicographically.  Exact Fincke-Pohst on the
 *  positive form -gram; throws if L is not negative definite. */
std::vector<IVec> enumerate_shifted(const QuadLattice& l, const QVec& mu,
                                    const Rat& r2);

/** The positive generator of <v, L>; v must be primitive and isotropic. */
long isotropic_level(const QuadLattice& l, const IVec& v);

/** Lexicographically least nonnegative representative c of a class with
 *  <c, x> = x^2 mod Z for all x in the dual; L must be 2-elementary. */
QVec characteristic_vector(const QuadLattice& l);

/** The index-2 overlattice Z(c1 + c2) + (Zd + I29_2), where d^2 = -2,
 *  c1 = d/2 and c2 is the characteristic vector of I29_2. */
QuadLattice appendix_glue();

/** Lift of g in SL(2,Z) acting on F = Ze + Zf inside U + U via
 *  e,f |-> g and e',f' |-> adjugate action; returns the 4x4 matrix
 *  (columns = images) after verifying it is an isometry fixing the
 *  orientation of the positive 2-plane of the reference period point.
 *  Throws if det g != 1. */
IMat sl2_lift_check(const IMat& g);

}  // namespace lattice

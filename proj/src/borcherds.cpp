#include "borcherds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

/*
 * Product engine.
 *
 * Every chart product runs over vectors l of a rank-10 lattice M of
 * signature (1,9) inside a height window <l, Im z> in (lo, hi].  M is
 * split along an isotropic pair (ga, gb) spanning a hyperbolic plane P:
 * with s = <l,ga>, t = <l,gb>, the component of l in P is determined by
 * the cell (s,t) and has norm 2st/<ga,gb>, while the component in the
 * negative definite rank-8 kernel K8 = ga-perp cap gb-perp lies in a ball
 * shifted by the cell.  Enumerating the finite cell grid and one shifted
 * ball per cell visits exactly the contributing vectors.
 *
 * The shifted-ball search prunes with a double-precision LDL recursion
 * whose intervals are widened by a slack exceeding the accumulated
 * rounding error by about eight orders of magnitude, and every candidate
 * is accepted only after an exact integer evaluation of the quadratic
 * form.  The rational reference kernel lattice::enumerate_shifted serves
 * as an oracle for this fast path in the tests.
 *
 * Tail bounds: after truncating at height H, the discarded factors are
 * covered cell by cell.  A cell contributes at most
 *   (ball volume at radius + covering radius) * max c(n) * w * e^{-m h},
 * where max c(n) comes from the exact coefficient table, w bounds
 * |log factor| / |u| on the relevant range, m is the decay per unit
 * height (2 pi or pi, less a 0.5% margin absorbing the dyadic
 * approximation of Im z), and h is the least height the cell reaches
 * beyond H.  Cells are binned into unit bands and the far remainder is
 * closed off geometrically.
 */

namespace borcherds {

using lattice::IMat;
using lattice::IVec;
using lattice::QMat;
using lattice::QuadLattice;
using lattice::QVec;
using lattice::Rat;
using modular::Complex;
using modular::HalfPlanePoint;
using modular::Real;

namespace {

// ---------------------------------------------------------------- helpers

Rat frac(long n, long d) {
    Rat r(n, d);
    r.canonicalize();
    return r;
}

long to_long(const Rat& r, const char* what) {
    if (r.get_den() != 1 || !r.get_num().fits_slong_p())
        throw std::logic_error(std::string(what) + ": not a small integer");
    return r.get_num().get_si();
}

Real real_of(const mpz_class& z) { return Real(z.get_str()); }

Real real_of(const Rat& r) { return real_of(r.get_num()) / real_of(r.get_den()); }

// exact comparisons of a + sqrt(b2) >= c and a - sqrt(b2) <= c, for b2 >= 0
bool plus_root_ge(const Rat& a, const Rat& b2, const Rat& c) {
    if (a >= c) return true;
    Rat d = c - a;
    return d * d <= b2;
}
bool minus_root_le(const Rat& a, const Rat& b2, const Rat& c) {
    if (a <= c) return true;
    Rat d = a - c;
    return d * d <= b2;
}

QVec gram_apply(const QMat& g, const QVec& v) {
    long n = static_cast<long>(g.size());
    QVec out(n, Rat(0));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j)
            if (v[j] != 0) out[i] += g[i][j] * v[j];
    return out;
}

Rat qdot(const QVec& a, const QVec& b) {
    Rat r(0);
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0) r += a[i] * b[i];
    return r;
}

long lcm_den(const QVec& v, long start = 1) {
    mpz_class l(start);
    for (const auto& x : v)
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
    if (!l.fits_slong_p()) throw std::logic_error("lcm_den: overflow");
    return l.get_si();
}

std::vector<long> scaled_int(const QVec& v, long d, const char* what) {
    std::vector<long> out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = to_long(v[i] * d, what);
    return out;
}

QVec qvec_of(const IVec& v) {
    QVec out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = Rat(v[i]);
    return out;
}

// dyadic rational approximation (exact for the dyadic inputs of interest)
Rat rat_of_real(const Real& x) {
    double d = x.convert_to<double>();
    if (!std::isfinite(d) || std::abs(d) > 8.0e9)
        throw std::invalid_argument("rat_of_real: value out of range");
    const long den = 1L << 20;
    return frac(static_cast<long>(std::llround(d * den)), den);
}

long floor_long(const Rat& r) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    if (!f.fits_slong_p()) throw std::logic_error("floor_long: overflow");
    return f.get_si();
}

// ---------------------------------------------------------------- charts

struct Chart {
    const QuadLattice* M = nullptr;
    int level = 1;
    IVec rho, rho_prime;  // level 2 only
    QVec ga, gb;          // isotropic pair spanning the splitting plane
};

Chart raw_chart(int level) {
    Chart c;
    c.M = &chart_lattice(level);
    c.level = level;
    c.ga = QVec(10, Rat(0));
    c.gb = QVec(10, Rat(0));
    c.ga[0] = 1;
    c.gb[1] = 1;
    if (level == 2) {
        c.rho = IVec(10, 0);
        c.rho_prime = IVec(10, 0);
        c.rho[0] = 1;
        c.rho_prime[1] = 1;
    }
    return c;
}

Chart gamma_chart(const enriques::LambdaGamma& lg,
                  const enriques::PeriodDecomposition& pd) {
    Chart c;
    c.M = &lg.m_gamma;
    c.level = lg.gamma.level;
    c.ga = pd.a1;
    c.gb = pd.a2;
    if (c.level == 2) {
        c.rho = lg.rho;
        c.rho_prime = lg.rho_prime;
    }
    return c;
}

// ------------------------------------------------- hyperbolic cell split

struct CellSetup {
    Rat gab;                       // <ga, gb>
    std::vector<IVec> kernel;      // 8 rows: basis of ga-perp cap gb-perp
    QMat k8gram;                   // its Gram matrix (negative definite)
    QMat k8inv;
    std::vector<std::vector<long>> k8g;  // Gram as integers
    std::vector<std::vector<long>> gk;   // gram_apply(G, kernel_j), integer
    long D = 1;                    // l -> D*(<l,ga>, <l,gb>) is integral
    IVec gen1, gen2;               // preimages of the image basis, M coords
    long imgA = 0, imgB = 0, imgC = 0;  // D*T(gen1)=(A,B), D*T(gen2)=(0,C)
    // double data for the fast ball finder and the tail estimate
    std::array<double, 8> ld{};                 // LDL diagonal of -Gram
    std::array<std::array<double, 8>, 8> lu{};  // LDL unit upper triangle
    double covrad = 0;                          // covering radius bound
    double sqrtdet = 1;                         // sqrt det(-Gram)
};

CellSetup make_cells(const Chart& ch) {
    const QuadLattice& M = *ch.M;
    long n = M.rank();
    CellSetup cs;
    cs.gab = M.pair(ch.ga, ch.gb);
    if (M.norm(ch.ga) != 0 || M.norm(ch.gb) != 0 || cs.gab <= 0)
        throw std::logic_error("make_cells: grid pair is not hyperbolic");

    QVec gga = gram_apply(M.gram, ch.ga), ggb = gram_apply(M.gram, ch.gb);
    cs.D = lcm_den(gga, lcm_den(ggb));
    std::vector<long> pa = scaled_int(gga, cs.D, "cell pairing");
    std::vector<long> pb = scaled_int(ggb, cs.D, "cell pairing");

    IMat eq(2, std::vector<lattice::Int>(n));
    for (long i = 0; i < n; ++i) {
        eq[0][i] = pa[i];
        eq[1][i] = pb[i];
    }
    IMat ker = lattice::integer_kernel(eq);
    if (static_cast<long>(ker.size()) != n - 2)
        throw std::logic_error("make_cells: unexpected kernel rank");
    for (const auto& row : ker) {
        IVec r(n);
        for (long i = 0; i < n; ++i) {
            if (!row[i].fits_slong_p())
                throw std::logic_error("make_cells: kernel overflow");
            r[i] = row[i].get_si();
        }
        cs.kernel.push_back(std::move(r));
    }

    long kr = n - 2;
    cs.k8gram.assign(kr, QVec(kr, Rat(0)));
    for (long i = 0; i < kr; ++i)
        for (long j = 0; j < kr; ++j)
            cs.k8gram[i][j] = M.pair(cs.kernel[i], cs.kernel[j]);
    cs.k8inv = lattice::mat_inverse(cs.k8gram);
    cs.k8g.assign(kr, std::vector<long>(kr));
    for (long i = 0; i < kr; ++i)
        for (long j = 0; j < kr; ++j)
            cs.k8g[i][j] = to_long(cs.k8gram[i][j], "kernel gram");
    for (long j = 0; j < kr; ++j)
        cs.gk.push_back(scaled_int(
            gram_apply(M.gram, qvec_of(cs.kernel[j])), 1, "kernel pairing"));

    // image basis of l -> D*(<l,ga>, <l,gb>) with preimages, by Euclid
    struct Row {
        long a, b;
        IVec e;
    };
    std::vector<Row> rows(n);
    for (long i = 0; i < n; ++i) {
        rows[i].a = pa[i];
        rows[i].b = pb[i];
        rows[i].e.assign(n, 0);
        rows[i].e[i] = 1;
    }
    auto subrow = [n](Row& x, const Row& p, long q) {
        x.a -= q * p.a;
        x.b -= q * p.b;
        for (long j = 0; j < n; ++j) x.e[j] -= q * p.e[j];
    };
    auto sweep = [&](long from, auto get) -> bool {
        while (true) {
            long piv = -1;
            for (long i = from; i < n; ++i)
                if (get(rows[i]) != 0 &&
                    (piv < 0 ||
                     std::labs(get(rows[i])) < std::labs(get(rows[piv]))))
                    piv = i;
            if (piv < 0) return false;
            bool clean = true;
            for (long i = from; i < n; ++i) {
                if (i == piv || get(rows[i]) == 0) continue;
                subrow(rows[i], rows[piv], get(rows[i]) / get(rows[piv]));
                if (get(rows[i]) != 0) clean = false;
            }
            if (clean) {
                std::swap(rows[from], rows[piv]);
                return true;
            }
        }
    };
    if (!sweep(0, [](const Row& r) { return r.a; }) ||
        !sweep(1, [](const Row& r) { return r.b; }))
        throw std::logic_error("make_cells: degenerate pairing image");
    cs.gen1 = rows[0].e;
    cs.gen2 = rows[1].e;
    cs.imgA = rows[0].a;
    cs.imgB = rows[0].b;
    cs.imgC = rows[1].b;
    if (cs.imgA == 0 || cs.imgC == 0 || rows[1].a != 0)
        throw std::logic_error("make_cells: image basis not triangular");

    // double LDL of the positive form -Gram
    std::array<std::array<double, 8>, 8> q{};
    for (long i = 0; i < kr; ++i)
        for (long j = 0; j < kr; ++j) q[i][j] = -cs.k8g[i][j];
    double det = 1, cov2 = 0;
    for (long i = 0; i < kr; ++i) {
        cs.ld[i] = q[i][i];
        if (!(cs.ld[i] > 0))
            throw std::logic_error("make_cells: kernel not definite");
        for (long j = i + 1; j < kr; ++j) cs.lu[i][j] = q[i][j] / cs.ld[i];
        for (long k = i + 1; k < kr; ++k)
            for (long j = k; j < kr; ++j) {
                q[k][j] -= cs.lu[i][k] * cs.ld[i] * cs.lu[i][j];
                if (j != k) q[j][k] = q[k][j];
            }
        det *= cs.ld[i];
        cov2 += cs.ld[i] / 4;
    }
    cs.covrad = std::sqrt(cov2);
    cs.sqrtdet = std::sqrt(det);
    return cs;
}

/*
 * All k in Z^kr with -(k + x)^2 <= r2 under the kernel Gram matrix:
 * double recursion widened by `slack` (the rounding error at these
 * magnitudes is ~1e-10, far below it), then an exact integer acceptance
 * test per candidate.
 */
void shifted_ball(const CellSetup& cs, const QVec& x, const Rat& r2,
                  const std::function<void(const std::array<long, 8>&)>& fn) {
    if (r2 < 0) return;
    long kr = static_cast<long>(cs.kernel.size());
    long Dx = lcm_den(x);
    std::array<long, 8> xs{};
    for (long i = 0; i < kr; ++i) xs[i] = to_long(x[i] * Dx, "ball center");
    long rhs_i = floor_long(r2 * Dx * Dx);
    if (rhs_i < 0) return;

    std::array<double, 8> xd{};
    for (long i = 0; i < kr; ++i) xd[i] = x[i].get_d();
    const double slack = 1e-6 * (1.0 + r2.get_d());

    std::array<long, 8> k{};
    auto verify = [&]() {
        std::array<long, 8> v{};
        for (long i = 0; i < kr; ++i) v[i] = Dx * k[i] + xs[i];
        __int128 qv = 0;
        for (long i = 0; i < kr; ++i) {
            __int128 row = 0;
            for (long j = 0; j < kr; ++j)
                row += static_cast<__int128>(cs.k8g[i][j]) * v[j];
            qv += row * v[i];
        }
        if (-qv <= static_cast<__int128>(rhs_i)) fn(k);
    };
    std::function<void(long, double)> descend = [&](long i, double t) {
        if (i < 0) {
            verify();
            return;
        }
        double c = xd[i];
        for (long j = i + 1; j < kr; ++j) c += cs.lu[i][j] * (k[j] + xd[j]);
        double r = std::sqrt(std::max(t, 0.0) / cs.ld[i]) + slack;
        long lo = static_cast<long>(std::ceil(-c - r));
        long hi = static_cast<long>(std::floor(-c + r));
        for (long v = lo; v <= hi; ++v) {
            k[i] = v;
            double dv = v + c;
            descend(i - 1, t - cs.ld[i] * dv * dv);
        }
        k[i] = 0;
    };
    descend(kr - 1, r2.get_d() + slack);
}

// ------------------------------------------------------------- traversal

struct LeafData {
    long s4, t4;   // 4<l,ga>, 4<l,gb>
    long n;        // l^2 / 2
    int sign;      // (-1)^{<l, rho - rho'>} at level 2, else +1
    long t0_num;   // <l, a0> * t0_den when a0 is supplied
    long cell_id;  // increments per cell
};

struct TraversalConfig {
    Rat lo, hi;     // window on the height <l, y>
    long nmin = 0;  // lower bound on l^2
    const QVec* a0 = nullptr;
    bool need_lambda = false;  // materialize l for the callback
};

// fn(v, k, d): the visited vector is lam0 + sum_j k[j] kernel_j; v is the
// cell base lam0, or the vector itself when need_lambda is set.
long traverse(const Chart& ch, const CellSetup& cs, const QVec& y,
              const TraversalConfig& cfg,
              const std::function<void(const IVec&, const std::array<long, 8>&,
                                       const LeafData&)>& fn,
              long* t0_den_out = nullptr) {
    const QuadLattice& M = *ch.M;
    long n = M.rank(), kr = static_cast<long>(cs.kernel.size());

    QVec gy = gram_apply(M.gram, y);
    long Dy = lcm_den(gy);
    std::vector<long> ihy = scaled_int(gy, Dy, "height form");
    std::vector<long> khy(kr, 0);
    for (long j = 0; j < kr; ++j)
        for (long i = 0; i < n; ++i) khy[j] += cs.kernel[j][i] * ihy[i];
    long hlo = floor_long(cfg.lo * Dy);  // keep h * Dy >= hlo + 1
    long hhi = floor_long(cfg.hi * Dy);  // keep h * Dy <= hhi

    // cone and parity forms (level 2)
    std::vector<long> prho, prp, pdel;
    std::vector<long> krho(kr, 0), krp(kr, 0), kdel(kr, 0);
    long rr = 0;
    if (ch.level == 2) {
        prho = scaled_int(gram_apply(M.gram, qvec_of(ch.rho)), 1, "rho form");
        prp = scaled_int(gram_apply(M.gram, qvec_of(ch.rho_prime)), 1,
                         "rho' form");
        pdel.resize(n);
        for (long i = 0; i < n; ++i) pdel[i] = prho[i] - prp[i];
        for (long j = 0; j < kr; ++j)
            for (long i = 0; i < n; ++i) {
                krho[j] += cs.kernel[j][i] * prho[i];
                krp[j] += cs.kernel[j][i] * prp[i];
                kdel[j] += cs.kernel[j][i] * pdel[i];
            }
        rr = to_long(M.pair(ch.rho, ch.rho_prime), "<rho,rho'>");
        if (rr <= 0) throw std::logic_error("traverse: <rho,rho'> <= 0");
    }
    // phase form
    long Da0 = 1;
    std::vector<long> ia0, ka0(kr, 0);
    if (cfg.a0) {
        QVec ga0 = gram_apply(M.gram, *cfg.a0);
        Da0 = lcm_den(ga0);
        ia0 = scaled_int(ga0, Da0, "phase form");
        for (long j = 0; j < kr; ++j)
            for (long i = 0; i < n; ++i) ka0[j] += cs.kernel[j][i] * ia0[i];
    }
    if (t0_den_out) *t0_den_out = Da0;

    // cell geometry
    Rat u1 = qdot(ch.ga, gy), u2 = qdot(ch.gb, gy), yn = qdot(y, gy);
    if (yn <= 0) throw std::invalid_argument("traverse: Im z not in the cone");
    Rat yperp2 = 2 * u1 * u2 / cs.gab - yn;  // = -(y_perp)^2 >= 0
    if (yperp2 < 0) throw std::logic_error("traverse: negative perp norm");
    Rat r1(0), r2f(0), rhoperp2(0);
    if (ch.level == 2) {
        QVec grho = gram_apply(M.gram, qvec_of(ch.rho));
        r1 = qdot(ch.ga, grho);
        r2f = qdot(ch.gb, grho);
        rhoperp2 = 2 * r1 * r2f / cs.gab;  // rho^2 = 0
    }

    // grid box from the positive majorant -G + 2 (Gy)(Gy)^T / y^2
    QVec gga = gram_apply(M.gram, ch.ga), ggb = gram_apply(M.gram, ch.gb);
    QMat maj(n, QVec(n, Rat(0)));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j)
            maj[i][j] = -M.gram[i][j] + 2 * gy[i] * gy[j] / yn;
    QMat majinv = lattice::mat_inverse(maj);
    Rat habs = std::max(cfg.lo * cfg.lo, cfg.hi * cfg.hi);
    Rat cap = Rat(-cfg.nmin) + 2 * habs / yn;
    auto form_bound = [&](const QVec& gv) {  // bound on |D * <l, v>|
        Rat q = qdot(gv, gram_apply(majinv, gv)) * cap * cs.D * cs.D;
        mpz_class f;
        mpz_fdiv_q(f.get_mpz_t(), q.get_num().get_mpz_t(),
                   q.get_den().get_mpz_t());
        mpz_class r = sqrt(f);
        if (!r.fits_slong_p()) throw std::logic_error("grid box overflow");
        return r.get_si() + 1;
    };
    long Tsmax = form_bound(gga);
    long Ttmax = form_bound(ggb);

    long m1max = Tsmax / std::labs(cs.imgA) + 1;
    long m2max = (Ttmax + m1max * std::labs(cs.imgB)) / std::labs(cs.imgC) + 2;

    long leaves = 0, cell_id = 0;
    IVec lam0(n, 0), lam(n, 0);

    for (long m1 = -m1max; m1 <= m1max; ++m1) {
        long Ts = m1 * cs.imgA;
        if (std::labs(Ts) > Tsmax) continue;
        for (long m2 = -m2max; m2 <= m2max; ++m2) {
            long Tt = m1 * cs.imgB + m2 * cs.imgC;
            if (std::labs(Tt) > Ttmax) continue;
            Rat s = frac(Ts, cs.D), t = frac(Tt, cs.D);
            Rat R2 = 2 * s * t / cs.gab - cfg.nmin;
            if (R2 < 0) continue;
            Rat h0 = (t * u1 + s * u2) / cs.gab;
            Rat By2 = R2 * yperp2;
            if (!minus_root_le(h0, By2, cfg.hi)) continue;
            if (!plus_root_ge(h0, By2, cfg.lo)) continue;
            if (ch.level == 2) {
                Rat p0 = (t * r1 + s * r2f) / cs.gab;
                if (!plus_root_ge(p0, R2 * rhoperp2, Rat(0))) continue;
            }
            for (long i = 0; i < n; ++i)
                lam0[i] = m1 * cs.gen1[i] + m2 * cs.gen2[i];
            long norm0l = to_long(M.norm(lam0), "cell norm");
            std::array<long, 8> b{};
            QVec bq(kr);
            for (long j = 0; j < kr; ++j) {
                long acc = 0;
                for (long i = 0; i < n; ++i) acc += lam0[i] * cs.gk[j][i];
                b[j] = acc;
                bq[j] = Rat(acc);
            }
            QVec x = gram_apply(cs.k8inv, bq);  // kernel-component center
            long c0h = 0, c0rho = 0, c0rp = 0, c0del = 0, c0a0 = 0;
            for (long i = 0; i < n; ++i) {
                if (lam0[i] == 0) continue;
                c0h += lam0[i] * ihy[i];
                if (ch.level == 2) {
                    c0rho += lam0[i] * prho[i];
                    c0rp += lam0[i] * prp[i];
                    c0del += lam0[i] * pdel[i];
                }
                if (cfg.a0) c0a0 += lam0[i] * ia0[i];
            }
            long s4 = to_long(s * 4, "grid s"), t4 = to_long(t * 4, "grid t");
            bool origin_cell = (Ts == 0 && Tt == 0);
            ++cell_id;

            shifted_ball(cs, x, R2, [&](const std::array<long, 8>& k) {
                bool kzero = true;
                long twon = norm0l, hnum = c0h;
                for (long j = 0; j < kr; ++j) {
                    if (k[j] == 0) continue;
                    kzero = false;
                    twon += 2 * k[j] * b[j];
                    hnum += k[j] * khy[j];
                    long row = 0;
                    for (long j2 = 0; j2 < kr; ++j2)
                        row += cs.k8g[j][j2] * k[j2];
                    twon += row * k[j];
                }
                if (origin_cell && kzero) return;
                if (hnum < hlo + 1 || hnum > hhi) return;
                if (twon < cfg.nmin || (twon & 1))
                    throw std::logic_error("traverse: norm out of contract");
                LeafData d;
                d.sign = 1;
                if (ch.level == 2) {
                    long c2 = c0rho, crp = c0rp, cdel = c0del;
                    for (long j = 0; j < kr; ++j) {
                        c2 += k[j] * krho[j];
                        crp += k[j] * krp[j];
                        cdel += k[j] * kdel[j];
                    }
                    if (c2 < 0) return;
                    if (c2 == 0) {  // boundary: keep only the ray Z_{>0} rho
                        if (twon != 0 || crp <= 0 || crp % rr != 0) return;
                        long m = crp / rr;
                        for (long i2 = 0; i2 < n; ++i2) {
                            long li = lam0[i2];
                            for (long j2 = 0; j2 < kr; ++j2)
                                li += k[j2] * cs.kernel[j2][i2];
                            if (li != m * ch.rho[i2]) return;
                        }
                    }
                    d.sign = (cdel % 2 == 0) ? 1 : -1;
                }
                d.s4 = s4;
                d.t4 = t4;
                d.n = twon / 2;
                d.t0_num = 0;
                if (cfg.a0) {
                    long v = c0a0;
                    for (long j = 0; j < kr; ++j) v += k[j] * ka0[j];
                    d.t0_num = v;
                }
                d.cell_id = cell_id;
                ++leaves;
                if (cfg.need_lambda) {
                    for (long i2 = 0; i2 < n; ++i2) {
                        long li = lam0[i2];
                        for (long j2 = 0; j2 < kr; ++j2)
                            li += k[j2] * cs.kernel[j2][i2];
                        lam[i2] = li;
                    }
                    fn(lam, k, d);
                } else {
                    fn(lam0, k, d);
                }
            });
        }
    }
    return leaves;
}

// ------------------------------------------------------------ tail bound

const std::vector<double>& logc_table() {
    static std::vector<double> tab = [] {
        auto cc = qseries::c_coeffs(1500);
        std::vector<double> t(1501, 0.0);
        for (long n = 0; n <= 1500; ++n) {
            const mpz_class& v = cc.at(n);
            signed long e;
            double m = mpz_get_d_2exp(&e, v.get_mpz_t());
            t[n] = std::log(std::abs(m)) + e * std::log(2.0);
        }
        return t;
    }();
    return tab;
}

struct TailGeom {
    double gab, u1, u2, yn, yperp2;
    double r1, r2, rhoperp2;  // level 2
    double step_s, step_t;
    double qa, qb;  // majorant values: |s| <= sqrt(cap * qa), same for t
    double covrad, sqrtdet;
    int level = 1;
    long nmin = 0;
};

double tail_bound(const TailGeom& g, double H) {
    const auto& lc = logc_table();
    const double pi = std::acos(-1.0);
    const double V8 = std::pow(pi, 4) / 24.0;
    double m = (g.level == 2 ? 2 * pi : pi) * 0.995;
    double w = (g.level == 2 ? 1.1 : 2.2);
    const int BANDS = 48;
    std::array<double, BANDS + 1> bands{};

    double Hmax = H + BANDS;
    double cap = std::abs(static_cast<double>(g.nmin)) + 2 * Hmax * Hmax / g.yn;
    long Ns = static_cast<long>(std::sqrt(cap * g.qa) * 1.3 / g.step_s) + 3;
    long Nt = static_cast<long>(std::sqrt(cap * g.qb) * 1.3 / g.step_t) + 3;
    for (long i = -Ns; i <= Ns; ++i) {
        double s = i * g.step_s;
        if (g.level == 1 && s < -1e-12) continue;
        for (long j = -Nt; j <= Nt; ++j) {
            double t = j * g.step_t;
            if (g.level == 1 && t < -1e-12) continue;
            double R2 = 2 * s * t / g.gab - g.nmin;
            if (R2 < 0) continue;
            double By = std::sqrt(R2 * g.yperp2);
            double h0 = (t * g.u1 + s * g.u2) / g.gab;
            if (h0 - By > Hmax) continue;
            if (h0 + By <= H) continue;  // no vector in the cell exceeds the cutoff
            if (g.level == 2) {
                double p0 = (t * g.r1 + s * g.r2) / g.gab;
                if (p0 + std::sqrt(R2 * g.rhoperp2) < -1e-9) continue;
            }
            double hmin = std::max(h0 - By, H);
            int band = static_cast<int>(
                std::min<double>(BANDS, std::max(0.0, std::ceil(hmin - H))));
            double rad = std::sqrt(R2) + g.covrad;
            double ball = V8 * std::pow(rad, 8) / g.sqrtdet + 1.0;
            long nmax = static_cast<long>(std::floor((R2 + g.nmin) / 2));
            // In the positive cone, lambda^2 * y^2 <= <lambda,y>^2 caps the norm
            // of any vector in the cell by its maximal height.
            double hcap = h0 + By;
            long nrcs = static_cast<long>(std::floor(hcap * hcap / (2 * g.yn)));
            nmax = std::min(nmax, std::max(0L, nrcs));
            double lcn = (nmax <= 1500)
                             ? lc[std::max(0L, nmax)]
                             : 5.2 * std::sqrt(static_cast<double>(nmax) + 1);
            bands[band] += ball * std::exp(lcn - m * hmin) * w;
        }
    }
    double total = 0;
    for (int i = 0; i <= BANDS; ++i) total += bands[i];
    double rmax = 0;
    for (int i = BANDS - 2; i <= BANDS; ++i)
        if (bands[i - 1] > 0 && bands[i] > 0)
            rmax = std::max(rmax, bands[i] / bands[i - 1]);
    if (bands[BANDS] > 0) {
        if (rmax >= 0.9) return std::numeric_limits<double>::infinity();
        total += bands[BANDS] * rmax / (1 - rmax);
    }
    return total;
}

// --------------------------------------------------------- evaluation job

struct ProductJob {
    Chart ch;
    CellSetup cs;
    QVec y;
    Rat yn;
    Rat lo;
    long nmin = 0;
    TailGeom geom;
};

ProductJob make_job(Chart ch, QVec y) {
    ProductJob job;
    job.ch = std::move(ch);
    job.cs = make_cells(job.ch);
    job.y = std::move(y);
    const QuadLattice& M = *job.ch.M;
    QVec gy = gram_apply(M.gram, job.y);
    job.yn = qdot(job.y, gy);
    if (job.yn <= 0)
        throw std::invalid_argument("product: Im z not in the positive cone");
    Rat u1 = qdot(job.ch.ga, gy), u2 = qdot(job.ch.gb, gy);
    if (u1 <= 0 || u2 <= 0)
        throw std::invalid_argument("product: Im z outside the chart chamber");
    Rat yperp2 = 2 * u1 * u2 / job.cs.gab - job.yn;

    if (job.ch.level == 1) {
        job.lo = Rat(0);
        job.nmin = 0;
    } else {
        job.nmin = -2;
        Rat g = M.pair(qvec_of(job.ch.rho), job.y);
        if (g <= 0) throw std::invalid_argument("product: <rho, Im z> <= 0");
        Rat bound = job.yn / (2 * g) - g - 1;
        job.lo = std::min(Rat(-1), bound);
    }

    TailGeom& tg = job.geom;
    tg.gab = job.cs.gab.get_d();
    tg.u1 = u1.get_d();
    tg.u2 = u2.get_d();
    tg.yn = job.yn.get_d();
    tg.yperp2 = yperp2.get_d();
    tg.level = job.ch.level;
    tg.nmin = job.nmin;
    tg.covrad = job.cs.covrad;
    tg.sqrtdet = job.cs.sqrtdet;
    tg.step_s = static_cast<double>(std::labs(job.cs.imgA)) / job.cs.D;
    tg.step_t = static_cast<double>(std::gcd(std::labs(job.cs.imgB),
                                             std::labs(job.cs.imgC))) /
                job.cs.D;
    if (job.ch.level == 2) {
        QVec grho = gram_apply(M.gram, qvec_of(job.ch.rho));
        tg.r1 = qdot(job.ch.ga, grho).get_d();
        tg.r2 = qdot(job.ch.gb, grho).get_d();
        tg.rhoperp2 = 2 * tg.r1 * tg.r2 / tg.gab;
    }
    long n = M.rank();
    QMat maj(n, QVec(n, Rat(0)));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j)
            maj[i][j] = -M.gram[i][j] + 2 * gy[i] * gy[j] / job.yn;
    QMat majinv = lattice::mat_inverse(maj);
    QVec gga = gram_apply(M.gram, job.ch.ga);
    QVec ggb = gram_apply(M.gram, job.ch.gb);
    tg.qa = qdot(gga, gram_apply(majinv, gga)).get_d();
    tg.qb = qdot(ggb, gram_apply(majinv, ggb)).get_d();
    return job;
}

// pick the truncation height; report the tail bound at it
std::pair<Rat, double> pick_height(const ProductJob& job,
                                   const ProductParams& par) {
    if (par.height_cutoff > 0) {
        Rat hi = par.height_cutoff;
        return {hi, tail_bound(job.geom, hi.get_d())};
    }
    for (double H = 2.0; H <= 90.0; H += 0.5) {
        double tb = tail_bound(job.geom, H);
        if (tb <= par.tail_target * 0.9) {
            Rat hi = frac(static_cast<long>(std::lround(H * 2)), 2);
            return {hi, tb};
        }
    }
    throw std::runtime_error("product: tail target unreachable at this point");
}

// ----------------------------------------------------- numeric assembly

bool complex_zero(const Complex& z, long prec) {
    if (z.re == 0 && z.im == 0) return true;
    Real eps = ldexp(Real(1), -3 * prec / 4);
    return modular::abs(z) < eps;
}

/*
 * Grid-mode product: the exponent of every factor is determined by the
 * cell plus a rational phase from a0, so factors aggregate per cell over
 * (phase index, norm) with exact integer weights.
 *   level 1: f = (1 - zeta u) / (1 + zeta u),  u = Es^{s4} Et^{t4}
 *   level 2: f = 1 - zeta u, with parity-signed exponents
 */
PhiValue run_grid(const ProductJob& job, const ProductParams& par,
                  const Rat& hi, double tail, const Complex& Es,
                  const Complex& Et, const Complex& prefactor, const QVec* a0) {
    long nmax = floor_long(hi * hi / (2 * job.yn)) + 2;
    auto cints = qseries::c_coeffs(std::max(0L, nmax));

    TraversalConfig cfg;
    cfg.lo = job.lo;
    cfg.hi = hi;
    cfg.nmin = job.nmin;
    cfg.a0 = a0;

    long Da0 = 1;
    const long NOFF = 2;
    struct CellAcc {
        long cell_id = -1;
        long s4 = 0, t4 = 0;
        long P = 0, nspan = 0;
        std::vector<long long> cnt;  // [idx * nspan + (n + NOFF)]
        std::vector<long> touched;
    } acc;
    acc.nspan = nmax + NOFF + 2;

    Complex L{};
    bool zero = false;
    std::vector<Complex> zeta;

    auto flush = [&]() {
        if (acc.cell_id < 0 || acc.touched.empty()) {
            acc.touched.clear();
            return;
        }
        std::sort(acc.touched.begin(), acc.touched.end());
        acc.touched.erase(std::unique(acc.touched.begin(), acc.touched.end()),
                          acc.touched.end());
        Complex ubase =
            modular::pow_int(Es, acc.s4) * modular::pow_int(Et, acc.t4);
        auto emit = [&](long idx, const mpz_class& wz) {
            if (wz == 0) return;
            Complex u = ubase * zeta[idx];
            Complex f;
            if (job.ch.level == 1) {
                Complex den = Complex(1L) + u;
                if (complex_zero(den, par.prec))
                    throw std::runtime_error("product: pole on denominator");
                f = (Complex(1L) - u) / den;
            } else {
                f = Complex(1L) - u;
            }
            if (complex_zero(f, par.prec)) {
                if (wz < 0) throw std::runtime_error("product: pole factor");
                zero = true;
                return;
            }
            L += modular::log(f) * Complex(real_of(wz), Real(0));
        };
        long last_idx = -1;
        mpz_class W;
        for (long key : acc.touched) {
            long idx = key / acc.nspan;
            long long c = acc.cnt[key];
            acc.cnt[key] = 0;
            if (idx != last_idx) {
                if (last_idx >= 0) emit(last_idx, W);
                last_idx = idx;
                W = 0;
            }
            if (c != 0)
                W += cints.at(key % acc.nspan - NOFF) * static_cast<long>(c);
        }
        if (last_idx >= 0) emit(last_idx, W);
        acc.touched.clear();
    };

    long terms = traverse(
        job.ch, job.cs, job.y, cfg,
        [&](const IVec&, const std::array<long, 8>&, const LeafData& d) {
            if (d.cell_id != acc.cell_id) {
                flush();
                acc.cell_id = d.cell_id;
                acc.s4 = d.s4;
                acc.t4 = d.t4;
                if (acc.cnt.empty()) {
                    acc.P = 2 * Da0;
                    acc.cnt.assign(acc.P * acc.nspan, 0);
                    zeta.resize(acc.P);
                    for (long i = 0; i < acc.P; ++i)
                        zeta[i] = modular::unit_phase(frac(i, Da0));
                }
            }
            long idx =
                ((job.ch.level * d.t0_num) % (2 * Da0) + 2 * Da0) % (2 * Da0);
            long key = idx * acc.nspan + (d.n + NOFF);
            if (acc.cnt[key] == 0) acc.touched.push_back(key);
            acc.cnt[key] += d.sign;
        },
        &Da0);
    flush();

    PhiValue out;
    out.terms_used = terms;
    out.tail_bound = tail;
    out.value = zero ? Complex{} : modular::exp(L) * prefactor;
    return out;
}

// general product with a per-factor complex exponent <l, z>
PhiValue run_general(const ProductJob& job, const ProductParams& par,
                     const Rat& hi, double tail,
                     const std::vector<Complex>& gzc,
                     const Complex& prefactor) {
    long nmax = floor_long(hi * hi / (2 * job.yn)) + 2;
    auto cints = qseries::c_coeffs(std::max(0L, nmax));
    std::map<long, Real> creal;
    for (const auto& [nn, v] : cints) creal.emplace(nn, real_of(v));

    long n = job.ch.M->rank(), kr = static_cast<long>(job.cs.kernel.size());
    Real pl = modular::pi_value() * job.ch.level;
    std::vector<Complex> kz(kr);
    for (long j = 0; j < kr; ++j) {
        Complex a{};
        for (long i = 0; i < n; ++i)
            if (job.cs.kernel[j][i] != 0)
                a += gzc[i] * Complex(Real(job.cs.kernel[j][i]), Real(0));
        kz[j] = a;
    }

    TraversalConfig cfg;
    cfg.lo = job.lo;
    cfg.hi = hi;
    cfg.nmin = job.nmin;

    Complex L{};
    bool zero = false;
    long last_cell = -1;
    Complex cell0{};
    long terms = traverse(
        job.ch, job.cs, job.y, cfg,
        [&](const IVec& lam0, const std::array<long, 8>& k,
            const LeafData& d) {
            if (d.cell_id != last_cell) {
                last_cell = d.cell_id;
                cell0 = Complex{};
                for (long i = 0; i < n; ++i)
                    if (lam0[i] != 0)
                        cell0 += gzc[i] * Complex(Real(lam0[i]), Real(0));
            }
            Complex w = cell0;
            for (long j = 0; j < kr; ++j)
                if (k[j] != 0) w += kz[j] * Complex(Real(k[j]), Real(0));
            Complex e = w * Complex(pl, Real(0));  // pi * level * <l, z>
            Complex u = modular::exp(Complex(-e.im, e.re));
            Complex f;
            if (job.ch.level == 1) {
                Complex den = Complex(1L) + u;
                if (complex_zero(den, par.prec))
                    throw std::runtime_error("product: pole on denominator");
                f = (Complex(1L) - u) / den;
            } else {
                f = Complex(1L) - u;
            }
            if (complex_zero(f, par.prec)) {
                if (d.sign < 0)
                    throw std::runtime_error("product: pole factor");
                zero = true;
                return;
            }
            L += modular::log(f) * Complex(creal.at(d.n) * d.sign, Real(0));
        });

    PhiValue out;
    out.terms_used = terms;
    out.tail_bound = tail;
    out.value = zero ? Complex{} : modular::exp(L) * prefactor;
    return out;
}

// z in chart coordinates; the aggregated grid mode applies when z lies in
// the hyperbolic plane (all other coordinates exactly zero)
PhiValue chart_eval(int level, const std::vector<Complex>& z,
                    const ProductParams& par) {
    if (z.size() != 10)
        throw std::invalid_argument("chart product: need 10 coordinates");
    Chart ch = raw_chart(level);
    QVec y(10);
    for (long i = 0; i < 10; ++i) y[i] = rat_of_real(z[i].im);
    ProductJob job = make_job(ch, y);
    auto [hi, tail] = pick_height(job, par);

    modular::PrecisionGuard guard(par.prec);
    const QuadLattice& M = *job.ch.M;
    std::vector<Complex> gzc(10);
    for (long i = 0; i < 10; ++i) {
        Complex a{};
        for (long jj = 0; jj < 10; ++jj)
            if (M.gram[i][jj] != 0)
                a += z[jj] * Complex(real_of(M.gram[i][jj]), Real(0));
        gzc[i] = a;
    }
    Complex prefactor(1L);
    if (level == 2) {
        Complex rz{};  // <rho, z>
        for (long i = 0; i < 10; ++i)
            if (job.ch.rho[i] != 0)
                rz += gzc[i] * Complex(Real(job.ch.rho[i]), Real(0));
        Complex e = rz * Complex(2 * modular::pi_value(), Real(0));
        prefactor = modular::exp(Complex(-e.im, e.re)) * Complex(256L);
    }

    bool grid = true;
    for (long i = 2; i < 10; ++i)
        if (!(z[i].re == 0 && z[i].im == 0)) grid = false;
    if (grid) {
        // <l, z> = (t <ga,z> + s <gb,z>) / gab
        QVec gga = gram_apply(M.gram, job.ch.ga);
        QVec ggb = gram_apply(M.gram, job.ch.gb);
        Complex za{}, zb{};
        for (long i = 0; i < 10; ++i) {
            if (gga[i] != 0) za += z[i] * Complex(real_of(gga[i]), Real(0));
            if (ggb[i] != 0) zb += z[i] * Complex(real_of(ggb[i]), Real(0));
        }
        Real sc = modular::pi_value() * level / (4 * real_of(job.cs.gab));
        Complex es = zb * Complex(sc, Real(0));
        Complex et = za * Complex(sc, Real(0));
        Complex Es = modular::exp(Complex(-es.im, es.re));
        Complex Et = modular::exp(Complex(-et.im, et.re));
        return run_grid(job, par, hi, tail, Es, Et, prefactor, nullptr);
    }
    return run_general(job, par, hi, tail, gzc, prefactor);
}

}  // namespace

// ---------------------------------------------------------------- public

const QuadLattice& chart_lattice(int level) {
    static const QuadLattice m1 = lattice::direct_sum(
        lattice::standard_lattice("U2"), lattice::standard_lattice("E8_2"));
    static const QuadLattice m2 = lattice::direct_sum(
        lattice::standard_lattice("U"), lattice::standard_lattice("E8_2"));
    if (level == 1) return m1;
    if (level == 2) return m2;
    throw std::invalid_argument("chart_lattice: level must be 1 or 2");
}

PhiValue phi1_eval(const std::vector<Complex>& z, const ProductParams& par) {
    return chart_eval(1, z, par);
}

PhiValue phi2_eval(const std::vector<Complex>& w, const ProductParams& par) {
    return chart_eval(2, w, par);
}

PhiValue phi_gamma_eval(const enriques::LambdaGamma& lg,
                        const HalfPlanePoint& tau,
                        const HalfPlanePoint& tau_prime,
                        const ProductParams& par) {
    enriques::PeriodDecomposition pd = enriques::period_decomposition(lg);
    Chart ch = gamma_chart(lg, pd);
    const QuadLattice& M = *ch.M;
    long n = M.rank();

    Rat yt = rat_of_real(tau.tau.im), ytp = rat_of_real(tau_prime.tau.im);
    QVec y(n, Rat(0));
    for (long i = 0; i < n; ++i) y[i] = yt * pd.a1[i] + ytp * pd.a2[i];
    ProductJob job = make_job(ch, y);
    auto [hi, tail] = pick_height(job, par);

    modular::PrecisionGuard guard(par.prec);
    // u = e^{pi i level (s tau + t tau')} = Es^{4s} Et^{4t}
    Real q4 = modular::pi_value() * job.ch.level / 4;
    Complex es = tau.tau * Complex(q4, Real(0));
    Complex et = tau_prime.tau * Complex(q4, Real(0));
    Complex Es = modular::exp(Complex(-es.im, es.re));
    Complex Et = modular::exp(Complex(-et.im, et.re));

    Complex prefactor(1L);
    if (job.ch.level == 2) {
        QVec rho = qvec_of(job.ch.rho);
        Rat t0r = M.pair(rho, pd.a0);
        // e^{2 pi i <rho, a0 + a1 tau + a2 tau'>} = zeta * Es^{4ra} Et^{4rb}
        Complex ph = modular::unit_phase(2 * t0r);
        Complex pa = modular::pow_int(
            Es, to_long(M.pair(rho, pd.a1) * 4, "prefactor exponent"));
        Complex pb = modular::pow_int(
            Et, to_long(M.pair(rho, pd.a2) * 4, "prefactor exponent"));
        prefactor = ph * pa * pb * Complex(256L);
    }
    return run_grid(job, par, hi, tail, Es, Et, prefactor, &pd.a0);
}

qseries::LaurentSeries2 phi_gamma_leading_qexp(const enriques::LambdaGamma& lg,
                                               long order) {
    if (order < 0) throw std::invalid_argument("qexp: negative order");
    enriques::PeriodDecomposition pd = enriques::period_decomposition(lg);
    Chart ch = gamma_chart(lg, pd);
    const QuadLattice& M = *ch.M;
    long n = M.rank();
    int level = ch.level;
    CellSetup cs = make_cells(ch);

    QVec y(n, Rat(0));  // grading vector a1 + a2
    for (long i = 0; i < n; ++i) y[i] = pd.a1[i] + pd.a2[i];
    Rat yn = M.pair(y, y);

    TraversalConfig cfg;
    cfg.hi = frac(order, level);
    cfg.a0 = &pd.a0;
    if (level == 1) {
        cfg.lo = Rat(0);
        cfg.nmin = 0;
    } else {
        cfg.nmin = -2;
        Rat g = M.pair(qvec_of(ch.rho), y);
        if (g <= 0) throw std::logic_error("qexp: <rho, grading> <= 0");
        Rat bound = yn / (2 * g) - g - 1;
        cfg.lo = std::min(Rat(-1), bound);
    }

    long Da0 = 1;
    std::map<std::array<long, 4>, long long> acc;
    traverse(
        ch, cs, y, cfg,
        [&](const IVec&, const std::array<long, 8>&, const LeafData& d) {
            long idx = ((level * d.t0_num) % (2 * Da0) + 2 * Da0) % (2 * Da0);
            acc[{d.s4, d.t4, idx, d.n}] += d.sign;
        },
        &Da0);

    // assemble on the internal quarter-unit grid
    const long ord4 = 2 * order;
    auto ctab = qseries::c_coeffs(
        std::max(0L, floor_long(cfg.hi * cfg.hi / (2 * yn)) + 2));
    qseries::LaurentSeries2 prod = qseries::LaurentSeries2::one(ord4);
    for (const auto& [key, count] : acc) {
        if (count == 0) continue;
        auto [s4, t4, idx, nn] = key;
        if (idx % Da0 != 0)
            throw std::domain_error("qexp: phase off the rational grid");
        long zeta = (idx / Da0) % 2 == 0 ? 1 : -1;
        long aq = s4, bq = t4;
        if (level == 1) {
            if (s4 % 2 || t4 % 2)
                throw std::domain_error("qexp: exponent off the grid");
            aq = s4 / 2;
            bq = t4 / 2;
        }
        if (aq + bq < 0)
            throw std::domain_error("qexp: negative-degree factor");
        mpz_class ez = ctab.at(nn) * static_cast<long>(count);
        if (!ez.fits_slong_p())
            throw std::domain_error("qexp: factor exponent too large");
        long E = ez.get_si();
        if (E == 0) continue;
        if (aq + bq == 0 && std::labs(E) > 64)
            throw std::domain_error("qexp: degree-zero factor too large");
        if (aq == 0 && bq == 0 && zeta == 1)
            throw std::domain_error("qexp: vanishing constant factor");
        qseries::LaurentSeries2 base =
            qseries::LaurentSeries2::one(ord4) -
            qseries::LaurentSeries2::monomial(zeta, aq, bq, ord4);
        prod = qseries::series_mul(prod, qseries::series_pow_int(base, E));
        if (level == 1) {
            qseries::LaurentSeries2 den =
                qseries::LaurentSeries2::one(ord4) +
                qseries::LaurentSeries2::monomial(zeta, aq, bq, ord4);
            prod = qseries::series_mul(prod, qseries::series_pow_int(den, -E));
        }
    }
    if (level == 2) {
        QVec rho = qvec_of(ch.rho);
        long t2 = to_long(M.pair(rho, pd.a0) * 2, "qexp prefactor phase");
        long zr = (t2 % 2 == 0) ? 1 : -1;
        long pa = to_long(M.pair(rho, pd.a1) * 4, "qexp prefactor exponent");
        long pb = to_long(M.pair(rho, pd.a2) * 4, "qexp prefactor exponent");
        prod = qseries::series_mul(
            prod, qseries::LaurentSeries2::monomial(256 * zr, pa, pb, ord4));
    }

    // quarter-unit grid -> half-unit grid
    qseries::LaurentSeries2 out(order);
    for (const auto& [e, c] : prod.terms()) {
        if (c == 0) continue;
        if (e.a % 2 || e.b % 2)
            throw std::domain_error("qexp: expansion off the half-unit grid");
        out.add_term(e.a / 2, e.b / 2, c);
    }
    return out;
}

Real petersson_norm(const enriques::LambdaGamma& lg, const HalfPlanePoint& tau,
                    const HalfPlanePoint& tau_prime,
                    const ProductParams& par) {
    PhiValue v = phi_gamma_eval(lg, tau, tau_prime, par);
    modular::PrecisionGuard guard(par.prec);
    Real s = tau.tau.im * tau_prime.tau.im;
    return s * s * s * s * v.value.norm();
}

namespace {

void check_gamma2(const IMat& g) {
    if (g.size() != 2 || g[0].size() != 2 || g[1].size() != 2)
        throw std::invalid_argument("automorphy_defect: need 2x2 matrices");
    const lattice::Int &a = g[0][0], &b = g[0][1], &c = g[1][0], &d = g[1][1];
    if (a * d - b * c != 1 || mpz_odd_p(b.get_mpz_t()) ||
        mpz_odd_p(c.get_mpz_t()) || mpz_even_p(a.get_mpz_t()) ||
        mpz_even_p(d.get_mpz_t()))
        throw std::invalid_argument("automorphy_defect: not in Gamma(2)");
}

Complex moebius(const IMat& g, const Complex& tau) {
    Complex a(real_of(g[0][0])), b(real_of(g[0][1]));
    Complex c(real_of(g[1][0])), d(real_of(g[1][1]));
    return (a * tau + b) / (c * tau + d);
}

}  // namespace

Real automorphy_defect(const enriques::LambdaGamma& lg, const IMat& g,
                       const IMat& g_prime, const HalfPlanePoint& tau,
                       const HalfPlanePoint& tau_prime,
                       const ProductParams& par) {
    check_gamma2(g);
    check_gamma2(g_prime);
    Complex t1, t2;
    {
        modular::PrecisionGuard guard(par.prec);
        t1 = moebius(g, tau.tau);
        t2 = moebius(g_prime, tau_prime.tau);
    }
    PhiValue base = phi_gamma_eval(lg, tau, tau_prime, par);
    PhiValue moved =
        phi_gamma_eval(lg, HalfPlanePoint(t1), HalfPlanePoint(t2), par);
    modular::PrecisionGuard guard(par.prec);
    Complex cd =
        Complex(real_of(g[1][0])) * tau.tau + Complex(real_of(g[1][1]));
    Complex cdp = Complex(real_of(g_prime[1][0])) * tau_prime.tau +
                  Complex(real_of(g_prime[1][1]));
    Complex fac = modular::pow_int(cd, 8) * modular::pow_int(cdp, 8);
    Complex lhs = moved.value * moved.value;
    Complex rhs = fac * base.value * base.value;
    Real den = modular::abs(rhs);
    if (den == 0) throw std::runtime_error("automorphy_defect: zero value");
    return modular::abs(lhs - rhs) / den;
}

}  // namespace borcherds

#include "enriques.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace enriques {

using lattice::IMat;
using lattice::Int;
using lattice::IVec;
using lattice::QMat;
using lattice::QuadLattice;
using lattice::QVec;
using lattice::Rat;

namespace {

constexpr long kAmbientRank = 12;

QVec kvec(Rat a, Rat b, Rat c, Rat d) {
    QVec x(kAmbientRank, Rat(0));
    x[0] = a;
    x[1] = b;
    x[2] = c;
    x[3] = d;
    return x;
}

// highest root of E8 in the Bourbaki simple-root basis
const long kHighestRoot[8] = {2, 3, 4, 6, 5, 4, 3, 2};

// mpq_class(n, d) does not canonicalize; always go through here
Rat frac(long n, long d) {
    Rat r(n, d);
    r.canonicalize();
    return r;
}

std::string coord_str(const Rat& r) {
    if (r == 0) return "0";
    if (r == Rat(1, 2)) return "1/2";
    std::ostringstream os;
    os << r;
    return os.str();
}

}  // namespace

std::string GammaClass::id() const {
    std::string s;
    for (int i = 0; i < 4; ++i) {
        if (i) s += ",";
        s += coord_str(d1[i]);
    }
    return s;
}

// ----------------------------------------------------------- coordinate helpers

QVec ambient_of(const QuadLattice& sub, const QVec& coords) {
    if (!sub.basis_in_ambient)
        throw std::invalid_argument("ambient_of: no ambient basis");
    const QMat& b = *sub.basis_in_ambient;
    QVec r(b[0].size(), Rat(0));
    for (size_t i = 0; i < b.size(); ++i)
        for (size_t j = 0; j < b[i].size(); ++j) r[j] += coords[i] * b[i][j];
    return r;
}

QVec ambient_of(const QuadLattice& sub, const IVec& coords) {
    QVec q(coords.size());
    for (size_t i = 0; i < coords.size(); ++i) q[i] = coords[i];
    return ambient_of(sub, q);
}

QVec coords_in(const QuadLattice& sub, const QVec& ambient) {
    if (!sub.basis_in_ambient)
        throw std::invalid_argument("coords_in: no ambient basis");
    const QMat& b = *sub.basis_in_ambient;
    // x B = w  =>  x = w B^t (B B^t)^{-1}, then verify x B = w exactly
    QMat bt = lattice::mat_transpose(b);
    QMat bbt = lattice::mat_mul(b, bt);
    QMat inv = lattice::mat_inverse(bbt);
    QVec wbt(b.size(), Rat(0));
    for (size_t i = 0; i < b.size(); ++i)
        for (size_t j = 0; j < ambient.size(); ++j)
            wbt[i] += ambient[j] * bt[j][i];
    QVec x = lattice::mat_apply(inv, wbt);
    if (ambient_of(sub, x) != ambient)
        throw std::invalid_argument("coords_in: vector not in the span");
    return x;
}

namespace {

bool integral(const QVec& x) {
    return std::all_of(x.begin(), x.end(),
                       [](const Rat& c) { return c.get_den() == 1; });
}

IVec to_ivec(const QVec& x) {
    IVec r(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i].get_den() != 1 || !x[i].get_num().fits_slong_p())
            throw std::invalid_argument("to_ivec: not an integer vector");
        r[i] = x[i].get_num().get_si();
    }
    return r;
}

bool primitive(const IVec& x) {
    long g = 0;
    for (long c : x) g = std::gcd(g, std::labs(c));
    return g == 1;
}

// positive generator of <x, L> for x given in L's own coordinates
long pairing_gcd(const QuadLattice& l, const IVec& x) {
    Int g(0);
    for (long i = 0; i < l.rank(); ++i) {
        Rat p(0);
        for (long j = 0; j < l.rank(); ++j) p += l.gram[i][j] * Rat(x[j]);
        if (p.get_den() != 1)
            throw std::runtime_error("pairing_gcd: non-integral pairing");
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), p.get_num().get_mpz_t());
    }
    return std::labs(g.get_si());
}

}  // namespace

// ------------------------------------------------------------------ the classes

const std::vector<GammaClass>& gamma_classes() {
    static const std::vector<GammaClass> classes = [] {
        std::vector<GammaClass> out;
        const Rat h(1, 2);
        auto kvec4 = [](Rat a, Rat b, Rat c, Rat d) {
            return QVec{a, b, c, d};
        };
        // E8(2) discriminant data for the d2 choices
        QuadLattice e8 = lattice::standard_lattice("E8_2");
        QVec theta_half(8);
        for (int i = 0; i < 8; ++i) theta_half[i] = frac(kHighestRoot[i], 2);
        // lexicographically least nonzero half-vector with even square
        QVec even_d2;
        for (unsigned long mask = 1; mask < (1UL << 8); ++mask) {
            QVec x(8, Rat(0));
            for (int i = 0; i < 8; ++i)
                if (mask & (1UL << (7 - i))) x[i] = Rat(1, 2);
            Rat n = e8.norm(x);
            Rat half_n = n / 2;
            if (half_n.get_den() == 1) {
                even_d2 = x;
                break;
            }
        }
        if (even_d2.empty())
            throw std::runtime_error("gamma_classes: no even d2 found");

        auto push = [&](QVec d1, bool odd) {
            GammaClass g;
            g.d1 = std::move(d1);
            g.odd = odd;
            g.level = (g.d1[1] == Rat(1, 2)) ? 1 : 2;
            g.d1_root = g.d1;
            if (odd) {
                // flip one coordinate's sign to reach the norm -1
                // representative of the same class
                if (g.d1[0] == Rat(1, 2) && g.d1[1] == Rat(1, 2))
                    g.d1_root[1] = -g.d1_root[1];
                else
                    g.d1_root[3] = -g.d1_root[3];
            }
            g.d2 = odd ? theta_half : even_d2;
            out.push_back(std::move(g));
        };
        // odd classes, fixed order: level 1 then level 2
        push(kvec4(h, h, h, 0), true);
        push(kvec4(h, h, 0, 0), true);
        push(kvec4(h, h, 0, h), true);
        push(kvec4(0, h, h, h), true);
        push(kvec4(0, 0, h, h), true);
        push(kvec4(h, 0, h, h), true);
        // even classes, lexicographic
        QuadLattice k = lattice::standard_lattice("K");
        for (unsigned long mask = 1; mask < 16; ++mask) {
            QVec x(4, Rat(0));
            for (int i = 0; i < 4; ++i)
                if (mask & (1UL << (3 - i))) x[i] = Rat(1, 2);
            Rat q = k.norm(x);  // in {0,1,2}
            if (q == 1) continue;
            push(x, false);
        }
        if (out.size() != 15)
            throw std::runtime_error("gamma_classes: wrong count");
        return out;
    }();
    return classes;
}

const GammaClass& gamma_by_id(const std::string& id) {
    for (const auto& g : gamma_classes())
        if (g.id() == id) return g;
    throw std::invalid_argument("unknown gamma class: " + id);
}

// --------------------------------------------------------------- glue lattice

namespace {

// d1 + d2 as an ambient vector
QVec glue_vector(const GammaClass& g) {
    QVec x(kAmbientRank, Rat(0));
    for (int i = 0; i < 4; ++i) x[i] = g.d1[i];
    for (int i = 0; i < 8; ++i) x[4 + i] = g.d2[i];
    return x;
}

QuadLattice build_lambda_lattice(const QuadLattice& ambient,
                                 const GammaClass& g) {
    QVec glue = glue_vector(g);
    IMat gens;
    for (long i = 0; i < kAmbientRank; ++i) {
        std::vector<Int> row(kAmbientRank, Int(0));
        row[i] = 2;
        gens.push_back(std::move(row));
    }
    std::vector<Int> grow(kAmbientRank);
    for (long i = 0; i < kAmbientRank; ++i) {
        Rat two = glue[i] * 2;
        grow[i] = two.get_num();
    }
    gens.push_back(std::move(grow));
    IMat h = lattice::hnf_rows(std::move(gens));
    if (static_cast<long>(h.size()) != kAmbientRank)
        throw std::runtime_error("build_lambda_gamma: rank defect");
    QMat basis(kAmbientRank, QVec(kAmbientRank, Rat(0)));
    for (long i = 0; i < kAmbientRank; ++i)
        for (long j = 0; j < kAmbientRank; ++j)
            basis[i][j] = Rat(h[i][j]) / 2;
    return lattice::sublattice(ambient, basis);
}

// M_gamma = v-perp ∩ v'-perp inside Lambda_gamma, as a saturated sublattice,
// with its basis expressed in ambient coordinates
QuadLattice build_m_gamma(const QuadLattice& ambient, const QuadLattice& lam,
                          const IVec& v, const IVec& vp) {
    IMat pairings(2, std::vector<Int>(kAmbientRank));
    for (long j = 0; j < kAmbientRank; ++j) {
        IVec basis_j(kAmbientRank, 0);
        basis_j[j] = 1;
        Rat p1 = lam.pair(v, basis_j);
        Rat p2 = lam.pair(vp, basis_j);
        if (p1.get_den() != 1 || p2.get_den() != 1)
            throw std::runtime_error("build_m_gamma: non-integral pairing");
        pairings[0][j] = p1.get_num();
        pairings[1][j] = p2.get_num();
    }
    IMat kernel = lattice::integer_kernel(pairings);
    if (kernel.size() != 10)
        throw std::runtime_error("build_m_gamma: kernel rank != 10");
    // rows of the kernel are Lambda_gamma coordinates; convert to ambient
    QMat basis(10, QVec(kAmbientRank, Rat(0)));
    const QMat& lb = *lam.basis_in_ambient;
    for (size_t i = 0; i < 10; ++i)
        for (long t = 0; t < kAmbientRank; ++t)
            for (long j = 0; j < kAmbientRank; ++j)
                basis[i][j] += Rat(kernel[i][t]) * lb[t][j];
    return lattice::sublattice(ambient, basis);
}

struct SearchTools {
    const QuadLattice* ambient;
    const QuadLattice* lam;
    QMat proj;  // B^t (B B^t)^{-1} for Lambda_gamma, for fast coords
};

std::optional<QVec> lambda_coords(const SearchTools& st, const QVec& amb) {
    QVec x(kAmbientRank, Rat(0));
    for (long i = 0; i < kAmbientRank; ++i)
        for (long j = 0; j < kAmbientRank; ++j)
            x[i] += amb[j] * st.proj[j][i];
    // verify membership
    QVec back(kAmbientRank, Rat(0));
    const QMat& b = *st.lam->basis_in_ambient;
    for (long i = 0; i < kAmbientRank; ++i)
        for (long j = 0; j < kAmbientRank; ++j) back[j] += x[i] * b[i][j];
    if (back != amb) return std::nullopt;
    if (!integral(x)) return std::nullopt;
    return x;
}

}  // namespace

const LambdaGamma& build_lambda_gamma(const GammaClass& g) {
    static std::map<std::string, LambdaGamma> cache;
    auto it = cache.find(g.id());
    if (it != cache.end()) return it->second;

    LambdaGamma lg;
    lg.gamma = g;
    lg.ambient = lattice::direct_sum(lattice::standard_lattice("K"),
                                     lattice::standard_lattice("E8_2"));
    lg.lambda = build_lambda_lattice(lg.ambient, g);
    const long ell = g.level;

    SearchTools st{&lg.ambient, &lg.lambda, {}};
    {
        QMat bt = lattice::mat_transpose(*lg.lambda.basis_in_ambient);
        QMat bbt = lattice::mat_mul(*lg.lambda.basis_in_ambient, bt);
        st.proj = lattice::mat_mul(bt, lattice::mat_inverse(bbt));
    }

    // v = e, the first U(2) generator
    QVec v_amb = kvec(1, 0, 0, 0);
    lg.v = to_ivec(*lambda_coords(st, v_amb));
    if (lattice::isotropic_level(lg.lambda, lg.v) != ell)
        throw std::runtime_error("build_lambda_gamma: v level mismatch");

    // ---- v': explicit for the odd level-2 classes, deterministic search else
    std::optional<QVec> vp_amb;
    if (g.odd && ell == 2) {
        vp_amb = (g.id() == "0,0,1/2,1/2") ? kvec(0, 1, 0, 0)
                                           : kvec(0, 1, 1, 0);
        QVec w = kvec(0, 0, -1, 0);
        QVec wp = (g.id() == "0,0,1/2,1/2") ? kvec(0, 0, Rat(1, 2), Rat(-1, 2))
                                            : kvec(Rat(1, 2), 0, Rat(1, 2),
                                                   Rat(-1, 2));
        QVec r(kAmbientRank, Rat(0));
        for (int i = 0; i < 8; ++i) r[4 + i] = frac(kHighestRoot[i], 2);
        lg.frame.w = w;
        lg.frame.w_prime = wp;
        lg.frame.r = r;
    } else {
        // candidates k + m + t(d1+d2) with small k in K, m = 0 or a norm -4
        // vector of E8(2), ordered by (max |lattice coordinate|, lex)
        QVec glue = glue_vector(g);
        QuadLattice e8 = lattice::standard_lattice("E8_2");
        auto roots = lattice::enumerate_vectors(e8, Rat(-4), Rat(-4),
                                                QVec(8, Rat(0)), Rat(-1),
                                                Rat(0));
        std::vector<IVec> e8parts = {IVec(8, 0)};
        e8parts.insert(e8parts.end(), roots.begin(), roots.end());
        std::vector<std::pair<QVec, QVec>> candidates;  // (lambda coords, amb)
        for (long ke = -1; ke <= 1; ++ke)
            for (long kf = -1; kf <= 1; ++kf)
                for (long k3 = -1; k3 <= 1; ++k3)
                    for (long k4 = -1; k4 <= 1; ++k4)
                        for (int t = 0; t <= 1; ++t)
                            for (const auto& m : e8parts) {
                                QVec amb = kvec(ke, kf, k3, k4);
                                for (int i = 0; i < 8; ++i)
                                    amb[4 + i] += m[i];
                                if (t)
                                    for (long i = 0; i < kAmbientRank; ++i)
                                        amb[i] += glue[i];
                                // cheap ambient filters first
                                if (lg.ambient.norm(amb) != 0) continue;
                                if (lg.ambient.pair(v_amb, amb) != ell)
                                    continue;
                                auto lc = lambda_coords(st, amb);
                                if (!lc) continue;
                                candidates.emplace_back(*lc, amb);
                            }
        std::sort(candidates.begin(), candidates.end(),
                  [](const auto& a, const auto& b) {
                      auto key = [](const QVec& x) {
                          Rat mx(0);
                          for (const auto& c : x)
                              mx = std::max(mx, c < 0 ? Rat(-c) : c);
                          return mx;
                      };
                      Rat ka = key(a.first), kb = key(b.first);
                      if (ka != kb) return ka < kb;
                      return a.first < b.first;
                  });
        for (const auto& [lc, amb] : candidates) {
            IVec cand = to_ivec(lc);
            if (!primitive(cand)) continue;
            if (pairing_gcd(lg.lambda, cand) != ell) continue;
            // the split Lambda_gamma = U(ell) + M must be an equality:
            // |det M| * ell^2 = |det Lambda_gamma| = 1024
            QuadLattice m = build_m_gamma(lg.ambient, lg.lambda, lg.v, cand);
            Rat dm = lattice::mat_det(m.gram);
            if (dm < 0) dm = -dm;
            if (dm * ell * ell != 1024) continue;
            vp_amb = amb;
            break;
        }
        if (!vp_amb)
            throw std::runtime_error("build_lambda_gamma: v' search failed for " +
                                     g.id());
    }
    lg.v_prime = to_ivec(*lambda_coords(st, *vp_amb));
    if (lattice::isotropic_level(lg.lambda, lg.v_prime) != ell)
        throw std::runtime_error("build_lambda_gamma: v' level mismatch");
    if (lg.lambda.pair(lg.v, lg.v_prime) != ell)
        throw std::runtime_error("build_lambda_gamma: <v,v'> != level");

    lg.m_gamma = build_m_gamma(lg.ambient, lg.lambda, lg.v, lg.v_prime);
    {
        Rat dm = lattice::mat_det(lg.m_gamma.gram);
        if (dm < 0) dm = -dm;
        if (dm * ell * ell != 1024)
            throw std::runtime_error("build_lambda_gamma: split not exact");
    }

    const long rho_level = 2 / ell;
    const int sign = (rho_level % 2 == 0) ? 1 : -1;  // (-1)^{2/ell}
    QVec w3 = kvec(0, 0, 1, 0), w4 = kvec(0, 0, 0, 1);
    auto rho_sign_ok = [&](const IVec& cand) {
        QVec amb = ambient_of(lg.m_gamma, cand);
        Rat p3 = lg.ambient.pair(amb, w3) * sign;
        Rat p4 = lg.ambient.pair(amb, w4) * sign;
        return p3 > 0 && p4 > 0;
    };

    if (g.odd && ell == 2) {
        // rho = w + w' + (0,r), rho' = w, from the fixed frame
        QVec rho_amb = *lg.frame.w;
        for (long i = 0; i < kAmbientRank; ++i)
            rho_amb[i] += (*lg.frame.w_prime)[i] + (*lg.frame.r)[i];
        lg.rho = to_ivec(coords_in(lg.m_gamma, rho_amb));
        lg.rho_prime = to_ivec(coords_in(lg.m_gamma, *lg.frame.w));
        if (!rho_sign_ok(lg.rho))
            throw std::runtime_error("build_lambda_gamma: rho cone violated");
    } else {
        // positive-cone vector from the period directions: h = a1 + a2
        // (computed before rho exists; period_decomposition does not need it)
        lg.rho.clear();
        PeriodDecomposition pd = period_decomposition(lg);
        QVec h(10);
        for (int i = 0; i < 10; ++i) h[i] = pd.a1[i] + pd.a2[i];
        if (lg.m_gamma.norm(h) <= 0)
            throw std::runtime_error("build_lambda_gamma: bad cone vector");
        for (long cap = 2; cap <= 64 && lg.rho.empty(); cap *= 2) {
            auto iso = lattice::enumerate_vectors(lg.m_gamma, Rat(0), Rat(0),
                                                  h, Rat(0), Rat(cap));
            for (const auto& cand : iso) {
                if (!primitive(cand)) continue;
                if (pairing_gcd(lg.m_gamma, cand) != rho_level) continue;
                IVec neg(cand.size());
                for (size_t i = 0; i < cand.size(); ++i) neg[i] = -cand[i];
                if (rho_sign_ok(cand))
                    lg.rho = cand;
                else if (rho_sign_ok(neg))
                    lg.rho = neg;
                if (!lg.rho.empty()) break;
            }
        }
        if (lg.rho.empty())
            throw std::runtime_error("build_lambda_gamma: rho search failed");
        for (long cap = 2; cap <= 64 && lg.rho_prime.empty(); cap *= 2) {
            auto iso = lattice::enumerate_vectors(lg.m_gamma, Rat(0), Rat(0),
                                                  h, Rat(0), Rat(cap));
            for (const auto& cand : iso) {
                if (!primitive(cand)) continue;
                if (pairing_gcd(lg.m_gamma, cand) != rho_level) continue;
                for (int s : {1, -1}) {
                    IVec c2(cand.size());
                    for (size_t i = 0; i < cand.size(); ++i)
                        c2[i] = s * cand[i];
                    if (lg.m_gamma.pair(lg.rho, c2) == rho_level) {
                        lg.rho_prime = c2;
                        break;
                    }
                }
                if (!lg.rho_prime.empty()) break;
            }
        }
        if (lg.rho_prime.empty())
            throw std::runtime_error("build_lambda_gamma: rho' search failed");
    }
    if (lg.m_gamma.norm(lg.rho) != 0 || lg.m_gamma.norm(lg.rho_prime) != 0 ||
        lg.m_gamma.pair(lg.rho, lg.rho_prime) != rho_level)
        throw std::runtime_error("build_lambda_gamma: frame pairing failure");

    lg.pos_cone.assign(10, Rat(0));
    for (int i = 0; i < 10; ++i)
        lg.pos_cone[i] = Rat(lg.rho[i]) + Rat(lg.rho_prime[i]);

    auto [pos, _] = cache.emplace(g.id(), std::move(lg));
    return pos->second;
}

// ------------------------------------------------------------------- periods

PeriodDecomposition period_decomposition(const LambdaGamma& lg) {
    const long ell = lg.gamma.level;
    const int sign = ((2 / ell) % 2 == 0) ? 1 : -1;
    QVec v_amb = ambient_of(lg.lambda, lg.v);
    QVec vp_amb = ambient_of(lg.lambda, lg.v_prime);

    // z~ = (-tt', 1, t, t' | 0)/2 componentwise over the monomials
    // {1, tau, tau', tau tau'}
    QVec ztil[4];
    for (auto& c : ztil) c.assign(kAmbientRank, Rat(0));
    ztil[0][1] = Rat(1, 2);   // constant part
    ztil[1][2] = Rat(1, 2);   // tau part
    ztil[2][3] = Rat(1, 2);   // tau' part
    ztil[3][0] = Rat(-1, 2);  // tau*tau' part

    QVec u[4];
    for (int m = 0; m < 4; ++m) {
        Rat alpha = lg.ambient.pair(ztil[m], vp_amb) / ell;
        u[m].assign(kAmbientRank, Rat(0));
        for (long j = 0; j < kAmbientRank; ++j) {
            Rat val = ztil[m][j] - alpha * v_amb[j];
            if (m == 0) val -= vp_amb[j] / ell;
            u[m][j] = val * sign;
        }
    }
    for (long j = 0; j < kAmbientRank; ++j)
        if (u[3][j] != 0)
            throw std::runtime_error(
                "period_decomposition: tau*tau' component survives");

    PeriodDecomposition pd;
    pd.a0 = coords_in(lg.m_gamma, u[0]);
    pd.a1 = coords_in(lg.m_gamma, u[1]);
    pd.a2 = coords_in(lg.m_gamma, u[2]);
    if (lg.m_gamma.norm(pd.a1) != 0 || lg.m_gamma.norm(pd.a2) != 0 ||
        lg.m_gamma.pair(pd.a1, pd.a2) != Rat(1, 2))
        throw std::runtime_error("period_decomposition: direction norms wrong");
    return pd;
}

PeriodPoint period_point(const LambdaGamma& lg,
                         const modular::HalfPlanePoint& tau,
                         const modular::HalfPlanePoint& tau_prime,
                         long prec_bits) {
    modular::PrecisionGuard guard(prec_bits);
    PeriodDecomposition pd = period_decomposition(lg);
    auto to_real = [](const Rat& r) {
        return modular::Real(r.get_num().get_str()) /
               modular::Real(r.get_den().get_str());
    };
    PeriodPoint pp;
    pp.coords.resize(10);
    QVec im_part(10);
    std::vector<modular::Real> im_real(10);
    for (int i = 0; i < 10; ++i) {
        modular::Real c0 = to_real(pd.a0[i]);
        modular::Real c1 = to_real(pd.a1[i]);
        modular::Real c2 = to_real(pd.a2[i]);
        pp.coords[i] =
            modular::Complex(c0, modular::Real(0)) + tau.tau * c1 +
            tau_prime.tau * c2;
        im_real[i] = pp.coords[i].im;
    }
    // <Im z, Im z> = im tau * im tau' (exact bilinearity over the gram)
    modular::Real n(0);
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j)
            if (lg.m_gamma.gram[i][j] != 0)
                n += to_real(lg.m_gamma.gram[i][j]) * im_real[i] * im_real[j];
    pp.im_norm = n;
    if (!(n > 0))
        throw std::runtime_error("period_point: not in the period domain");
    modular::Real cone(0);
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j)
            if (lg.m_gamma.gram[i][j] != 0)
                cone += to_real(lg.m_gamma.gram[i][j] * lg.pos_cone[j]) *
                        im_real[i];
    if (!(cone > 0))
        throw std::runtime_error("period_point: wrong cone component");
    return pp;
}

// ------------------------------------------------------------- root witnesses

std::optional<IVec> odd_root_witness(const LambdaGamma& lg) {
    const GammaClass& g = lg.gamma;
    if (g.odd) {
        QVec delta(kAmbientRank, Rat(0));
        for (int i = 0; i < 4; ++i) delta[i] = g.d1_root[i];
        for (int i = 0; i < 8; ++i) delta[4 + i] = g.d2[i];
        if (lg.ambient.norm(delta) != -2)
            throw std::runtime_error("odd_root_witness: norm != -2");
        return to_ivec(coords_in(lg.lambda, delta));
    }
    // Even classes: verify the finite facts that exclude any root with a
    // negative K-part square.
    // (a) K has no norm -2 vectors: every norm is divisible by 4
    QuadLattice k = lattice::standard_lattice("K");
    for (long i = 0; i < 4; ++i) {
        if (k.gram[i][i] != 0)
            throw std::runtime_error("odd_root_witness: K diagonal nonzero");
        for (long j = 0; j < 4; ++j) {
            Rat e = k.gram[i][j] / 2;
            if (e.get_den() != 1)
                throw std::runtime_error("odd_root_witness: K gram odd");
        }
    }
    // (b) d2 is a genuine half-vector (so the E8 part of a glued vector can
    // never vanish), and the E8 component is negative definite
    bool half = false;
    for (const auto& c : g.d2)
        if (c.get_den() == 2) half = true;
    if (!half) throw std::runtime_error("odd_root_witness: d2 integral");
    if (!(lattice::signature_of(lattice::standard_lattice("E8_2").gram) ==
          lattice::Signature{0, 8}))
        throw std::runtime_error("odd_root_witness: E8(2) not negative definite");
    // (c) d1 has even square, so glued vectors have even K-part square
    Rat q = k.norm(g.d1);
    if (q.get_den() != 1 || q.get_num() % 2 != 0)
        throw std::runtime_error("odd_root_witness: even class with odd d1^2");
    return std::nullopt;
}

}  // namespace enriques

#include "lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace lattice {

// ------------------------------------------------------------ linear algebra

QMat mat_mul(const QMat& a, const QMat& b) {
    size_t n = a.size(), m = b.empty() ? 0 : b[0].size(), k = b.size();
    QMat r(n, QVec(m, Rat(0)));
    for (size_t i = 0; i < n; ++i)
        for (size_t t = 0; t < k; ++t) {
            if (a[i][t] == 0) continue;
            for (size_t j = 0; j < m; ++j) r[i][j] += a[i][t] * b[t][j];
        }
    return r;
}

QMat mat_transpose(const QMat& a) {
    size_t n = a.size(), m = a.empty() ? 0 : a[0].size();
    QMat r(m, QVec(n, Rat(0)));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < m; ++j) r[j][i] = a[i][j];
    return r;
}

Rat mat_det(QMat a) {
    size_t n = a.size();
    Rat det(1);
    for (size_t i = 0; i < n; ++i) {
        size_t p = i;
        while (p < n && a[p][i] == 0) ++p;
        if (p == n) return Rat(0);
        if (p != i) {
            std::swap(a[p], a[i]);
            det = -det;
        }
        det *= a[i][i];
        for (size_t r = i + 1; r < n; ++r) {
            if (a[r][i] == 0) continue;
            Rat f = a[r][i] / a[i][i];
            for (size_t c = i; c < n; ++c) a[r][c] -= f * a[i][c];
        }
    }
    return det;
}

QMat mat_inverse(const QMat& a) {
    size_t n = a.size();
    QMat w = a;
    QMat inv(n, QVec(n, Rat(0)));
    for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (size_t i = 0; i < n; ++i) {
        size_t p = i;
        while (p < n && w[p][i] == 0) ++p;
        if (p == n) throw std::invalid_argument("mat_inverse: singular");
        std::swap(w[p], w[i]);
        std::swap(inv[p], inv[i]);
        Rat piv = w[i][i];
        for (size_t c = 0; c < n; ++c) {
            w[i][c] /= piv;
            inv[i][c] /= piv;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == i || w[r][i] == 0) continue;
            Rat f = w[r][i];
            for (size_t c = 0; c < n; ++c) {
                w[r][c] -= f * w[i][c];
                inv[r][c] -= f * inv[i][c];
            }
        }
    }
    return inv;
}

QVec mat_apply(const QMat& a, const QVec& x) {
    QVec r(a.size(), Rat(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < x.size(); ++j) r[i] += a[i][j] * x[j];
    return r;
}

IMat hnf_rows(IMat a) {
    size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        // clear column c below row r by gcd steps
        while (true) {
            size_t best = rows;
            for (size_t i = r; i < rows; ++i)
                if (a[i][c] != 0 &&
                    (best == rows || abs(a[i][c]) < abs(a[best][c])))
                    best = i;
            if (best == rows) break;  // column already zero
            std::swap(a[best], a[r]);
            bool done = true;
            for (size_t i = r + 1; i < rows; ++i) {
                if (a[i][c] == 0) continue;
                Int q = a[i][c] / a[r][c];  // truncated division is fine here
                for (size_t j = 0; j < cols; ++j) a[i][j] -= q * a[r][j];
                if (a[i][c] != 0) done = false;
            }
            if (done) break;
        }
        if (a[r][c] == 0) continue;
        if (a[r][c] < 0)
            for (size_t j = 0; j < cols; ++j) a[r][j] = -a[r][j];
        for (size_t i = 0; i < r; ++i) {  // reduce rows above into [0, pivot)
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), a[i][c].get_mpz_t(),
                       a[r][c].get_mpz_t());
            if (q != 0)
                for (size_t j = 0; j < cols; ++j) a[i][j] -= q * a[r][j];
        }
        ++r;
    }
    a.resize(r);
    return a;
}

IMat integer_kernel(const IMat& a) {
    size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    IMat w = a;
    IMat u(cols, std::vector<Int>(cols, Int(0)));  // column transform
    for (size_t i = 0; i < cols; ++i) u[i][i] = 1;
    size_t lead = 0;
    for (size_t r = 0; r < rows && lead < cols; ++r) {
        while (true) {
            size_t best = cols;
            for (size_t c = lead; c < cols; ++c)
                if (w[r][c] != 0 &&
                    (best == cols || abs(w[r][c]) < abs(w[r][best])))
                    best = c;
            if (best == cols) break;
            for (size_t i = 0; i < rows; ++i) std::swap(w[i][best], w[i][lead]);
            for (size_t i = 0; i < cols; ++i) std::swap(u[i][best], u[i][lead]);
            bool done = true;
            for (size_t c = lead + 1; c < cols; ++c) {
                if (w[r][c] == 0) continue;
                Int q = w[r][c] / w[r][lead];
                for (size_t i = 0; i < rows; ++i) w[i][c] -= q * w[i][lead];
                for (size_t i = 0; i < cols; ++i) u[i][c] -= q * u[i][lead];
                if (w[r][c] != 0) done = false;
            }
            if (done) break;
        }
        if (w[r][lead] != 0) ++lead;
    }
    IMat kernel;
    for (size_t c = lead; c < cols; ++c) {
        std::vector<Int> v(cols);
        for (size_t i = 0; i < cols; ++i) v[i] = u[i][c];
        kernel.push_back(std::move(v));
    }
    return kernel;
}

// ------------------------------------------------------------------ lattices

namespace {

template <typename X, typename Y>
Rat pair_impl(const QMat& g, const X& x, const Y& y) {
    Rat s(0);
    for (size_t i = 0; i < g.size(); ++i) {
        if (x[i] == 0) continue;
        Rat row(0);
        for (size_t j = 0; j < g.size(); ++j)
            if (y[j] != 0) row += g[i][j] * Rat(y[j]);
        s += Rat(x[i]) * row;
    }
    return s;
}

}  // namespace

Rat QuadLattice::pair(const QVec& x, const QVec& y) const {
    return pair_impl(gram, x, y);
}
Rat QuadLattice::pair(const IVec& x, const IVec& y) const {
    return pair_impl(gram, x, y);
}
Rat QuadLattice::pair(const IVec& x, const QVec& y) const {
    return pair_impl(gram, x, y);
}

namespace {

QMat u_gram(long scale) {
    return {{Rat(0), Rat(scale)}, {Rat(scale), Rat(0)}};
}

// E8 Cartan matrix, Bourbaki node numbering (edges 1-3,3-4,4-5,5-6,6-7,7-8,2-4)
QMat e8_cartan() {
    QMat c(8, QVec(8, Rat(0)));
    for (int i = 0; i < 8; ++i) c[i][i] = 2;
    auto edge = [&](int i, int j) { c[i - 1][j - 1] = c[j - 1][i - 1] = -1; };
    edge(1, 3);
    edge(3, 4);
    edge(4, 5);
    edge(5, 6);
    edge(6, 7);
    edge(7, 8);
    edge(2, 4);
    return c;
}

}  // namespace

QuadLattice direct_sum(const QuadLattice& a, const QuadLattice& b) {
    long n = a.rank(), m = b.rank();
    QMat g(n + m, QVec(n + m, Rat(0)));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) g[i][j] = a.gram[i][j];
    for (long i = 0; i < m; ++i)
        for (long j = 0; j < m; ++j) g[n + i][n + j] = b.gram[i][j];
    return {std::move(g), std::nullopt};
}

QuadLattice standard_lattice(const std::string& name) {
    if (name == "U") return {u_gram(1), std::nullopt};
    if (name == "U2") return {u_gram(2), std::nullopt};
    if (name == "E8_2") {
        QMat g = e8_cartan();
        for (auto& row : g)
            for (auto& x : row) x *= -2;
        return {std::move(g), std::nullopt};
    }
    if (name == "K") return direct_sum(standard_lattice("U2"), standard_lattice("U2"));
    if (name == "Lambda")
        return direct_sum(direct_sum(standard_lattice("U2"), standard_lattice("U")),
                          standard_lattice("E8_2"));
    if (name == "I29_2") {
        QMat g(11, QVec(11, Rat(0)));
        g[0][0] = g[1][1] = 2;
        for (int i = 2; i < 11; ++i) g[i][i] = -2;
        return {std::move(g), std::nullopt};
    }
    throw std::invalid_argument("standard_lattice: unknown name " + name);
}

QuadLattice sublattice(const QuadLattice& ambient, const QMat& basis) {
    QMat g = mat_mul(mat_mul(basis, ambient.gram), mat_transpose(basis));
    return {std::move(g), basis};
}

Signature signature_of(const QMat& gram) {
    QMat a = gram;
    size_t n = a.size();
    Signature sig;
    // symmetric congruence diagonalization over Q
    for (size_t i = 0; i < n; ++i) {
        if (a[i][i] == 0) {
            size_t j = i + 1;
            while (j < n && a[i][j] == 0) ++j;
            if (j == n) throw std::invalid_argument("signature_of: degenerate");
            // adding +-(row/col j) makes the pivot 2 a[i][j] +- a[j][j];
            // at least one sign is nonzero since a[i][j] != 0
            Rat s = (2 * a[i][j] + a[j][j] != 0) ? 1 : -1;
            for (size_t c = 0; c < n; ++c) a[i][c] += s * a[j][c];
            for (size_t r = 0; r < n; ++r) a[r][i] += s * a[r][j];
        }
        for (size_t r = i + 1; r < n; ++r) {
            if (a[r][i] == 0) continue;
            Rat f = a[r][i] / a[i][i];
            for (size_t c = 0; c < n; ++c) a[r][c] -= f * a[i][c];
            for (size_t c = 0; c < n; ++c) a[c][r] -= f * a[c][i];
        }
        (a[i][i] > 0 ? sig.pos : sig.neg) += 1;
    }
    return sig;
}

DiscGroup disc_group(const QuadLattice& l) {
    long n = l.rank();
    if (n > 12) throw std::invalid_argument("disc_group: rank > 12 unsupported");
    DiscGroup d;
    // candidates for a 2-elementary discriminant group: dual classes in
    // (1/2)L / L, i.e. half-vectors x with G x integral
    for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
        QVec x(n, Rat(0));
        for (long i = 0; i < n; ++i)
            if (mask & (1UL << (n - 1 - i))) x[i] = Rat(1, 2);
        bool dual = true;
        for (long i = 0; i < n && dual; ++i) {
            Rat p(0);
            for (long j = 0; j < n; ++j) p += l.gram[i][j] * x[j];
            if (p.get_den() != 1) dual = false;
        }
        if (!dual) continue;
        Rat q = l.norm(x);
        // reduce mod 2Z into [0,2)
        Int flo;
        Rat half = q / 2;
        mpz_fdiv_q(flo.get_mpz_t(), half.get_num().get_mpz_t(),
                   half.get_den().get_mpz_t());
        q -= Rat(flo) * 2;
        d.reps.push_back(std::move(x));
        d.qvals.push_back(std::move(q));
    }
    size_t count = d.reps.size();
    Rat det = mat_det(l.gram);
    Rat order = det < 0 ? -det : det;
    if (order != Rat(static_cast<long>(count)))
        throw std::invalid_argument("disc_group: lattice is not 2-elementary");
    d.dim = 0;
    while ((1UL << d.dim) < count) ++d.dim;
    d.parity = 0;
    for (const auto& q : d.qvals)
        if (q.get_den() != 1) d.parity = 1;
    return d;
}

Invariants invariants(const QuadLattice& l) {
    DiscGroup d = disc_group(l);
    return {signature_of(l.gram), d.dim, d.parity};
}

// ----------------------------------------------------------------- enumeration

std::vector<IVec> enumerate_vectors(const QuadLattice& l, const Rat& norm_min,
                                    const Rat& norm_max, const QVec& height,
                                    const Rat& h_min, const Rat& h_max) {
    std::vector<IVec> out;
    long n = l.rank();
    if (norm_min > norm_max || h_min >= h_max) return out;

    // pairings of the height vector with the basis, and its norm
    QVec gh(n, Rat(0));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) gh[i] += l.gram[i][j] * height[j];
    Rat h2 = l.norm(height);
    bool h_zero = std::all_of(height.begin(), height.end(),
                              [](const Rat& x) { return x == 0; });

    // positive-definite majorant  M(x) = -x^2 + 2<x,h>^2 / h^2
    QMat m(n, QVec(n, Rat(0)));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) m[i][j] = -l.gram[i][j];
    if (!h_zero) {
        if (h2 <= 0)
            throw std::invalid_argument(
                "enumerate_vectors: height not in the positive cone");
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j) m[i][j] += 2 * gh[i] * gh[j] / h2;
    }

    // bound on the majorant over the admissible region
    Rat hb = std::max(h_min * h_min, h_max * h_max);
    Rat cap = -norm_min + (h_zero ? Rat(0) : 2 * hb / h2);
    if (cap < 0) return out;

    // exact LDL^T:  M(x) = sum_i d_i (x_i + sum_{j>i} u_ij x_j)^2
    QMat q = m;
    for (long i = 0; i < n; ++i) {
        if (q[i][i] <= 0)
            throw std::invalid_argument(
                "enumerate_vectors: region is not finite");
        for (long j = i + 1; j < n; ++j) q[i][j] /= q[i][i];
        for (long k = i + 1; k < n; ++k)
            for (long j = k; j < n; ++j) q[k][j] -= q[k][i] * q[i][j];
        for (long k = i + 1; k < n; ++k)
            for (long j = i + 1; j < k; ++j) q[k][j] = q[j][k];
    }

    IVec x(n, 0);
    std::function<void(long, const Rat&)> descend = [&](long i, const Rat& t) {
        if (i < 0) {
            Rat nrm = l.norm(x);
            if (nrm < norm_min || nrm > norm_max) return;
            Rat hv(0);
            for (long k = 0; k < n; ++k)
                if (x[k] != 0) hv += Rat(x[k]) * gh[k];
            if (!(h_min < hv && hv <= h_max)) return;
            out.push_back(x);
            return;
        }
        Rat c(0);
        for (long j = i + 1; j < n; ++j)
            if (x[j] != 0) c += q[i][j] * Rat(x[j]);
        // integer range of x_i with d_i (x_i + c)^2 <= t, exactly
        Rat r2 = t / q[i][i];
        if (r2 < 0) return;
        const Int& cp = c.get_num();
        const Int& cq = c.get_den();
        // (cq*x + cp)^2 <= cq^2 * r2  -> |cq*x + cp| <= isqrt(floor(...))
        Rat rhs = Rat(cq) * Rat(cq) * r2;
        Int flo;
        mpz_fdiv_q(flo.get_mpz_t(), rhs.get_num().get_mpz_t(),
                   rhs.get_den().get_mpz_t());
        if (flo < 0) return;
        Int b = sqrt(flo);
        Int lo_z, hi_z;
        Int num_lo = -b - cp, num_hi = b - cp;
        mpz_cdiv_q(lo_z.get_mpz_t(), num_lo.get_mpz_t(), cq.get_mpz_t());
        mpz_fdiv_q(hi_z.get_mpz_t(), num_hi.get_mpz_t(), cq.get_mpz_t());
        if (!lo_z.fits_slong_p() || !hi_z.fits_slong_p())
            throw std::runtime_error("enumerate_vectors: range overflow");
        long lo = lo_z.get_si(), hi = hi_z.get_si();
        for (long v = lo; v <= hi; ++v) {
            x[i] = v;
            Rat dv = Rat(v) + c;
            descend(i - 1, t - q[i][i] * dv * dv);
        }
        x[i] = 0;
    };
    descend(n - 1, cap);

    std::sort(out.begin(), out.end(), [&](const IVec& a, const IVec& b) {
        Rat ha(0), hb2(0);
        for (long k = 0; k < n; ++k) {
            if (a[k] != 0) ha += Rat(a[k]) * gh[k];
            if (b[k] != 0) hb2 += Rat(b[k]) * gh[k];
        }
        if (ha != hb2) return ha < hb2;
        return a < b;
    });
    return out;
}

std::vector<IVec> enumerate_shifted(const QuadLattice& l, const QVec& mu,
                                    const Rat& r2) {
    std::vector<IVec> out;
    long n = l.rank();
    if (r2 < 0) return out;

    // positive form Q = -gram, exact LDL^T as in enumerate_vectors
    QMat q(n, QVec(n, Rat(0)));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) q[i][j] = -l.gram[i][j];
    for (long i = 0; i < n; ++i) {
        if (q[i][i] <= 0)
            throw std::invalid_argument(
                "enumerate_shifted: lattice not negative definite");
        for (long j = i + 1; j < n; ++j) q[i][j] /= q[i][i];
        for (long k = i + 1; k < n; ++k)
            for (long j = k; j < n; ++j) q[k][j] -= q[k][i] * q[i][j];
        for (long k = i + 1; k < n; ++k)
            for (long j = i + 1; j < k; ++j) q[k][j] = q[j][k];
    }

    // Q(x + mu) = sum_i d_i (x_i + mu_i + sum_{j>i} u_ij (x_j + mu_j))^2
    IVec x(n, 0);
    std::function<void(long, const Rat&)> descend = [&](long i, const Rat& t) {
        if (i < 0) {
            out.push_back(x);
            return;
        }
        Rat c = mu[i];
        for (long j = i + 1; j < n; ++j)
            c += q[i][j] * (Rat(x[j]) + mu[j]);
        Rat rr = t / q[i][i];
        if (rr < 0) return;
        const Int& cp = c.get_num();
        const Int& cq = c.get_den();
        Rat rhs = Rat(cq) * Rat(cq) * rr;
        Int flo;
        mpz_fdiv_q(flo.get_mpz_t(), rhs.get_num().get_mpz_t(),
                   rhs.get_den().get_mpz_t());
        if (flo < 0) return;
        Int b = sqrt(flo);
        Int lo_z, hi_z;
        Int num_lo = -b - cp, num_hi = b - cp;
        mpz_cdiv_q(lo_z.get_mpz_t(), num_lo.get_mpz_t(), cq.get_mpz_t());
        mpz_fdiv_q(hi_z.get_mpz_t(), num_hi.get_mpz_t(), cq.get_mpz_t());
        if (!lo_z.fits_slong_p() || !hi_z.fits_slong_p())
            throw std::runtime_error("enumerate_shifted: range overflow");
        for (long v = lo_z.get_si(); v <= hi_z.get_si(); ++v) {
            x[i] = v;
            Rat dv = Rat(v) + c;
            descend(i - 1, t - q[i][i] * dv * dv);
        }
        x[i] = 0;
    };
    descend(n - 1, r2);
    std::sort(out.begin(), out.end());
    return out;
}

long isotropic_level(const QuadLattice& l, const IVec& v) {
    long g = 0;
    for (long c : v) g = static_cast<long>(std::gcd(g, std::abs(c)));
    if (g != 1) throw std::invalid_argument("isotropic_level: v not primitive");
    if (l.norm(v) != 0)
        throw std::invalid_argument("isotropic_level: v not isotropic");
    Rat lev(0);
    for (long i = 0; i < l.rank(); ++i) {
        Rat p(0);
        for (long j = 0; j < l.rank(); ++j) p += l.gram[i][j] * Rat(v[j]);
        if (p.get_den() != 1)
            throw std::invalid_argument("isotropic_level: non-integral gram");
        Int g2;
        mpz_gcd(g2.get_mpz_t(), lev.get_num().get_mpz_t(),
                p.get_num().get_mpz_t());
        lev = Rat(g2);
    }
    return std::labs(static_cast<long>(lev.get_num().get_si()));
}

QVec characteristic_vector(const QuadLattice& l) {
    DiscGroup d = disc_group(l);
    for (const auto& c : d.reps) {  // generation order is lexicographic
        bool ok = true;
        for (const auto& r : d.reps) {
            Rat diff = l.pair(c, r) - l.norm(r);
            if (diff.get_den() != 1) {
                ok = false;
                break;
            }
        }
        if (ok) return c;
    }
    throw std::runtime_error("characteristic_vector: none found");
}

QuadLattice appendix_glue() {
    QuadLattice root{{{Rat(-2)}}, std::nullopt};  // Z d with d^2 = -2
    QuadLattice amb = direct_sum(root, standard_lattice("I29_2"));
    long n = amb.rank();  // 12
    // generators: the ambient basis plus c1 + c2 (both characteristic halves);
    // work with doubled coordinates so HNF is over Z
    QVec glue(n, Rat(1, 2));  // d/2 in the first slot, (1,...,1)/2 in the rest
    IMat gens;
    for (long i = 0; i < n; ++i) {
        std::vector<Int> row(n, Int(0));
        row[i] = 2;
        gens.push_back(std::move(row));
    }
    gens.push_back(std::vector<Int>(n, Int(1)));
    IMat h = hnf_rows(std::move(gens));
    if (static_cast<long>(h.size()) != n)
        throw std::runtime_error("appendix_glue: rank defect");
    QMat basis(n, QVec(n, Rat(0)));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) basis[i][j] = Rat(h[i][j]) / 2;
    return sublattice(amb, basis);
}

IMat sl2_lift_check(const IMat& g) {
    if (g.size() != 2 || g[0].size() != 2)
        throw std::invalid_argument("sl2_lift_check: g must be 2x2");
    const Int &a = g[0][0], &b = g[0][1], &c = g[1][0], &d = g[1][1];
    if (a * d - b * c != 1)
        throw std::invalid_argument("sl2_lift_check: det != 1");
    // basis (e, f, e', f') with <e,e'> = <f,f'> = 1, all else 0; the
    // totally isotropic plane is F = Ze + Zf
    QMat gram(4, QVec(4, Rat(0)));
    gram[0][2] = gram[2][0] = gram[1][3] = gram[3][1] = 1;
    // columns are the images: g(e)=ae+cf, g(f)=be+df,
    // g(e')=de'-bf', g(f')=-ce'+af'
    IMat lift = {{a, b, Int(0), Int(0)},
                 {c, d, Int(0), Int(0)},
                 {Int(0), Int(0), d, -c},
                 {Int(0), Int(0), -b, a}};
    // isometry: lift^T G lift = G
    QMat bq(4, QVec(4, Rat(0)));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) bq[i][j] = Rat(lift[i][j]);
    QMat check = mat_mul(mat_mul(mat_transpose(bq), gram), bq);
    if (check != gram) throw std::runtime_error("sl2_lift_check: not an isometry");
    // orientation of the positive 2-plane of the reference period point:
    // x0 = e + e', y0 = f + f' span a positive-definite plane; the lift must
    // map it with positive projection determinant onto itself
    QVec x0 = {Rat(1), Rat(0), Rat(1), Rat(0)};
    QVec y0 = {Rat(0), Rat(1), Rat(0), Rat(1)};
    auto apply = [&](const QVec& v) {
        QVec r(4, Rat(0));
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) r[i] += bq[i][j] * v[j];
        return r;
    };
    QuadLattice uu{gram, std::nullopt};
    QVec xi = apply(x0), yi = apply(y0);
    Rat det_proj = uu.pair(xi, x0) * uu.pair(yi, y0) -
                   uu.pair(xi, y0) * uu.pair(yi, x0);
    if (det_proj <= 0)
        throw std::runtime_error("sl2_lift_check: orientation not preserved");
    return lift;
}

}  // namespace lattice

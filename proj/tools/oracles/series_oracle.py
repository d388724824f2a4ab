#!/usr/bin/env python3
"""Independent oracle for the exact q-series used by the C++ tests.

Everything here is computed with naive O(N^2) integer products (no shared
code with the C++ implementation).  Outputs are frozen into tests/ as
literals.  Run: python3 tools/oracles/series_oracle.py
"""
from fractions import Fraction
import math


def poly_mul(a, b, order):
    out = [0] * (order + 1)
    for i, ai in enumerate(a):
        if ai == 0 or i > order:
            continue
        for j, bj in enumerate(b):
            if i + j > order:
                break
            out[i + j] += ai * bj
    return out


def euler_product(scale, order):
    """prod_{n>0} (1 - q^{scale*n}) to q^order, naive."""
    out = [0] * (order + 1)
    out[0] = 1
    n = 1
    while scale * n <= order:
        factor = [0] * (scale * n + 1)
        factor[0] = 1
        factor[scale * n] = -1
        out = poly_mul(out, factor, order)
        n += 1
    return out


def poly_inv(a, order):
    assert a[0] == 1
    inv = [0] * (order + 1)
    inv[0] = 1
    for n in range(1, order + 1):
        s = 0
        for k in range(1, n + 1):
            s += a[k] * inv[n - k] if k < len(a) else 0
        inv[n] = -s
    return inv


def eta_quotient_body(factors, order):
    """prod eta(k tau)^e without the q^{sum e*k/24} prefactor."""
    out = [0] * (order + 1)
    out[0] = 1
    for scale, expo in factors:
        base = euler_product(scale, order)
        if expo < 0:
            base = poly_inv(base, order)
            expo = -expo
        for _ in range(expo):
            out = poly_mul(out, base, order)
    return out


def c_series(order):
    """c(n): coefficients of eta(t)^-8 eta(2t)^8 eta(4t)^-8 = sum c(n) q^n,
    offset -1 (so body index k holds c(k-1))."""
    return eta_quotient_body([(1, -8), (2, 8), (4, -8)], order)


def j_series(order):
    """j(tau) = E4^3/Delta; returns list cj with cj[k] = coeff of q^{k-1}."""
    def sigma3(n):
        return sum(d ** 3 for d in range(1, n + 1) if n % d == 0)
    e4 = [1] + [240 * sigma3(n) for n in range(1, order + 1)]
    e43 = poly_mul(poly_mul(e4, e4, order), e4, order)
    delta_body = eta_quotient_body([(1, 24)], order)  # Delta/q
    return poly_mul(e43, poly_inv(delta_body, order), order)


def main():
    order = 80
    c = c_series(order)
    print("# c(n) for n=-1..30 (eta^-8 eta(2)^8 eta(4)^-8):")
    print([c[k] for k in range(0, 32)])
    j = j_series(order)
    print("# j coefficients around q^-1..q^8:")
    print([j[k] for k in range(0, 10)])
    print("# a(n)=j-744 coefficients a(1..72) used by denominator formula:")
    print([j[k + 1] for k in range(1, 73)])
    # growth estimate for c(n): beta_n = log c(n) / sqrt(n)
    cbig = c_series(420)
    for n in (100, 200, 300, 400):
        v = abs(cbig[n + 1])
        print(f"# c({n}) ~ exp({math.log(v):.3f}), log/sqrt(n) = "
              f"{math.log(v)/math.sqrt(n):.4f}  (2*sqrt(2)*pi={2*math.sqrt(2)*math.pi:.4f}, 4pi={4*math.pi:.4f})")
    # pentagonal-number pattern check for euler product
    ep = euler_product(1, 30)
    print("# prod(1-q^n) to q^30:", ep)
    # Delta-like expansion
    dl = eta_quotient_body([(1, 24)], 6)
    print("# prod(1-q^n)^24 to q^6:", dl)


if __name__ == "__main__":
    main()

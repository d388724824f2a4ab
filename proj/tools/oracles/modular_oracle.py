#!/usr/bin/env python3
"""Independent high-precision oracle for modular-function values.

Uses mpmath at 60 digits; values are frozen into tests/ as literals.
Run: python3 tools/oracles/modular_oracle.py
"""
import mpmath as mp

mp.mp.dps = 60


def theta2(tau):
    q = mp.exp(1j * mp.pi * tau)
    return mp.nsum(lambda n: q ** ((n + mp.mpf(1) / 2) ** 2), [-60, 60])


def theta3(tau):
    q = mp.exp(1j * mp.pi * tau)
    return mp.nsum(lambda n: q ** (n ** 2), [-60, 60])


def theta4(tau):
    q = mp.exp(1j * mp.pi * tau)
    return mp.nsum(lambda n: (-1) ** n * q ** (n ** 2), [-60, 60])


def eta(tau):
    q = mp.exp(2j * mp.pi * tau)
    prod = mp.mpc(1)
    n = 1
    while True:
        t = q ** n
        prod *= (1 - t)
        if abs(t) < mp.mpf(10) ** (-70):
            break
        n += 1
    return q ** (mp.mpf(1) / 24) * prod


def jfun(tau):
    lam = (theta2(tau) / theta3(tau)) ** 4
    return 256 * (1 - lam + lam ** 2) ** 3 / (lam ** 2 * (1 - lam) ** 2)


def weber(z):
    return 2 ** 12 * eta(2 * z) ** 24 / eta(z) ** 24


def show(name, v):
    print(f"{name} = {mp.nstr(v, 45)}")


show("eta(i)", eta(1j))
show("Gamma(1/4)/(2 pi^(3/4))", mp.gamma(mp.mpf(1) / 4) / (2 * mp.pi ** mp.mpf(0.75)))
show("eta(2i)", eta(2j))
show("eta(0.3+1.2i)", eta(mp.mpc(0.3, 1.2)))
show("eta((-1+i)/2)", eta(mp.mpc(-0.5, 0.5)))
show("theta2(1.3i)", theta2(1.3j))
show("theta3(1.3i)", theta3(1.3j))
show("theta4(1.3i)", theta4(1.3j))
show("theta3(0.25+1.1i)", theta3(mp.mpc(0.25, 1.1)))
show("lambda(i)", (theta2(1j) / theta3(1j)) ** 4)
show("lambda(0.2+1.5i)", (theta2(mp.mpc(0.2, 1.5)) / theta3(mp.mpc(0.2, 1.5))) ** 4)
show("j(i)", jfun(1j))
show("j(2i)", jfun(2j))            # 66^3 = 287496
show("j((1+i*sqrt(3))/2)", jfun(mp.mpc(0.5, mp.sqrt(3) / 2)))
show("j(0.1+1.4i)", jfun(mp.mpc(0.1, 1.4)))
show("W(i)", weber(1j))
show("W(2i)", weber(2j))
show("W(-1/(2*(4i)))=eta/eta form", eta(0.125j) ** 24 / eta(0.25j) ** 24)
show("W(4i)", weber(4j))
# Jacobi identity residual (should be ~0)
show("jacobi(1.3i)", theta2(1.3j) ** 4 + theta4(1.3j) ** 4 - theta3(1.3j) ** 4)
# j via eta-quotient route consistency: j = E4^3/Delta at 2i from series
show("eta(i)^24", eta(1j) ** 24)
show("(j(tau)-j(tau'))  tau=2i tau'=3i", jfun(2j) - jfun(3j))

"""Recompute the frozen reference constants used in the test suite.

Each value is produced by an independent route (mpmath multi-precision
series/quadrature or closed forms), printed with full precision for
pasting into tests.  Run from the repo root:

    python scripts/compute_frozen_constants.py
"""

import math

import mpmath as mp

mp.mp.dps = 40


def ml_series(a, b, z):
    a, b, z = mp.mpf(a), mp.mpf(b), mp.mpf(z)
    s = mp.mpf(0)
    k = 0
    while k < 3000:
        t = z**k / mp.gamma(a * k + b)
        s += t
        if k > 5 and abs(t) < mp.mpf(10) ** (-35) * abs(s):
            break
        k += 1
    return s


def slobodeckij_sq(mu, sigma):
    """|t^mu|_sigma^2 on (0,1) by adaptive quadrature of the folded integral."""
    mu, sigma = mp.mpf(mu), mp.mpf(sigma)

    def inner(t):
        if t == 0:
            return mp.mpf(0)
        return mp.quad(lambda s: (t**mu - s**mu) ** 2 * (t - s) ** (-1 - 2 * sigma),
                       [0, t / 2, t * mp.mpf("0.99"), t])

    return 2 * mp.quad(inner, [0, mp.mpf("0.25"), 1])


print("# Mittag-Leffler values")
print("E_{1.5,1}(-1)   =", mp.nstr(ml_series(1.5, 1.0, -1.0), 20))
print("E_{0.5,1}(-1)   =", mp.nstr(mp.e * mp.erfc(1), 20), " (exp(1)*erfc(1))")
print("E_{1.5,1}(-2^1.5) =", mp.nstr(ml_series(1.5, 1.0, -2 ** 1.5), 20))

print("# Slobodeckij seminorms squared on (0,1)")
for mu, sig in ((1.0, 0.25), (1.5, 0.25), (2.0, 0.35), (1.0, 0.5)):
    print(f"|t^{mu}|^2_(sigma={sig}) =", mp.nstr(slobodeckij_sq(mu, sig), 20))

print("# inner products")
# (I^0.3 t, 1 - t) on (0,1): analytic via power rule
val = (mp.mpf(1) / mp.mpf("2.3") - mp.mpf(1) / mp.mpf("3.3")) / mp.gamma(mp.mpf("2.3"))
print("(I^0.3 t, 1-t)  =", mp.nstr(val, 20))
# <D^1.5 t^2, bump> with bump = 16 t^2 (1-t)^2; D^1.5 t^2 = 2 t^0.5 / Gamma(1.5)
val = (32 / mp.gamma(mp.mpf("1.5"))) * (
    mp.mpf(1) / mp.mpf("3.5") - 2 / mp.mpf("4.5") + 1 / mp.mpf("5.5"))
print("<D^1.5 t^2, bump> =", mp.nstr(val, 20))

print("# projection of x(pi - x) onto sine modes, L = pi")
for k in (1, 2, 3):
    val = mp.quad(lambda x: x * (mp.pi - x) * mp.sqrt(2 / mp.pi) * mp.sin(k * x), [0, mp.pi])
    print(f"c_{k} =", mp.nstr(val, 20))

print("# gamma anchors")
for x in (1.25, 2.5, 2.1, 2.9):
    print(f"Gamma({x}) =", mp.nstr(mp.gamma(mp.mpf(x)), 20))

"""Two-parameter Mittag-Leffler function on the real line, z <= 0 focus.

Three regimes, dispatched on |z|:

* ``|z| <= 5``: Taylor series with double-double (compensated) term
  accumulation, so the alternating-series cancellation does not eat the
  requested tolerance.
* ``-x_asym < z < -5``: residue pair plus branch-cut integral.  Collapsing
  the inversion contour of the series onto the negative real axis gives,
  for 0 < alpha < 2 (alpha != 1) and x = -z > 0,

      E(z) = [alpha > 1] * (2/alpha) x^((1-beta)/alpha)
                 * exp(x^(1/alpha) cos(pi/alpha))
                 * cos(x^(1/alpha) sin(pi/alpha) + pi (1-beta)/alpha)
             + (1/pi) * int_0^inf exp(-r) r^(alpha-beta)
                 * (r^alpha sin(pi beta) + x sin(pi (alpha-beta+1)))
                 / (r^(2 alpha) + 2 x r^alpha cos(pi alpha) + x^2) dr.

  Before quadrature the second parameter is reduced by alpha steps
  (E_{a,b}(z) = (E_{a,b-a}(z) - rgamma(b-a)) / z) until alpha-beta >= 1/2,
  which removes the endpoint singularity of the integrand; the remaining
  fractional power is tamed by the substitution r = u^4 and the integral
  is evaluated by Romberg extrapolation.
* ``z <= -x_asym``: ten-term negative-power expansion plus the same
  residue pair.  The threshold x_asym(alpha, beta) is chosen where the
  truncation tail drops below 1e-13 of the leading term, never below 30.

Positive arguments are supported up to z = 5 (series regime only).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, MlAccuracyWarning, OracleRangeError
from .gammafn import gamma, rgamma
from .grids import GridFunction

Z_SWITCH = 5.0
_ASYM_TERMS = 10
_SERIES_MAX_TERMS = 600
# Condition number above which a double-precision series cannot reach
# ~1e-11 relative accuracy (per-term rounding floor).
SERIES_CONDITION_LIMIT = 2.0e4


@dataclass(frozen=True)
class MlParams:
    """Evaluation order pair (alpha, beta) and relative tolerance target."""

    alpha: float
    beta: float
    tol: float = 1e-13

    def __post_init__(self):
        if not (0.0 < self.alpha <= 2.0):
            raise DomainError(f"MlParams: alpha must be in (0, 2], got {self.alpha}")
        if not (self.beta > 0.0):
            raise DomainError(f"MlParams: beta must be positive, got {self.beta}")
        if not (1e-15 < self.tol < 1e-6):
            raise DomainError(f"MlParams: tol must lie in (1e-15, 1e-6), got {self.tol}")


# -- double-double helpers (vectorized over numpy arrays) --------------------

def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _two_prod(a, b):
    p = a * b
    c = 134217729.0 * a
    ah = c - (c - a)
    al = a - ah
    c = 134217729.0 * b
    bh = c - (c - b)
    bl = b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_add(xh, xl, yh, yl):
    s, e = _two_sum(xh, yh)
    e = e + (xl + yl)
    return _two_sum(s, e)


def _dd_mul(xh, xl, c):
    p, e = _two_prod(xh, c)
    e = e + xl * c
    return _two_sum(p, e)


def _series(alpha: float, beta: float, z: np.ndarray, tol: float):
    """Compensated Taylor series; returns (values, condition estimate)."""
    sh = np.full_like(z, rgamma(beta))
    sl = np.zeros_like(z)
    ph = np.ones_like(z)
    pl = np.zeros_like(z)
    cond = np.abs(sh).copy()
    for k in range(1, _SERIES_MAX_TERMS):
        ph, pl = _dd_mul(ph, pl, z)
        th, tl = _dd_mul(ph, pl, rgamma(alpha * k + beta))
        sh, sl = _dd_add(sh, sl, th, tl)
        cond += np.abs(th)
        if k > 3 and np.all(np.abs(th) <= tol * 1e-2 * (np.abs(sh) + 1e-300)):
            break
    vals = sh + sl
    return vals, cond / np.maximum(np.abs(vals), 1e-300)


def _residue_pair(alpha: float, beta: float, x: np.ndarray) -> np.ndarray:
    if alpha <= 1.0:
        return np.zeros_like(x)
    x1a = x ** (1.0 / alpha)
    amp = (2.0 / alpha) * x ** ((1.0 - beta) / alpha)
    return amp * np.exp(x1a * math.cos(math.pi / alpha)) * np.cos(
        x1a * math.sin(math.pi / alpha) + math.pi * (1.0 - beta) / alpha)


def _reduce_beta(alpha: float, beta: float) -> tuple[float, int]:
    bb, steps = beta, 0
    while alpha - bb < 0.5:
        bb -= alpha
        steps += 1
    return bb, steps


def _branch_integral(alpha: float, beta: float, x: np.ndarray, rtol: float) -> np.ndarray:
    """Residue + Romberg branch-cut integral at z = -x (x > 5 vector)."""
    bb, steps = _reduce_beta(alpha, beta)
    res = _residue_pair(alpha, bb, x)
    s1 = math.sin(math.pi * bb)
    s2 = math.sin(math.pi * (alpha - bb + 1.0))
    ca = math.cos(math.pi * alpha)
    U = 120.0**0.25  # upper limit after r = u^4 (exp(-120) is negligible)

    def fmat(u):
        r = u**4.0
        ra = r**alpha
        base = (4.0 * u**3.0 / math.pi) * np.exp(-r) * r ** (alpha - bb)
        num = ra * s1 + x[:, None] * s2
        den = (ra * ra)[None, :] + (2.0 * ca) * x[:, None] * ra[None, :] + (x * x)[:, None]
        return base[None, :] * num / den

    n = 16
    hh = U / n
    u0 = np.linspace(0.0, U, n + 1)
    F = fmat(u0)
    F[:, 0] = 0.0
    rows = [hh * (F.sum(axis=1) - 0.5 * F[:, -1])]
    for lev in range(1, 14):
        hh /= 2.0
        n *= 2
        mid = fmat(np.linspace(hh, U - hh, n // 2))
        new = [0.5 * rows[0] + hh * mid.sum(axis=1)]
        for j in range(1, lev + 1):
            new.append(new[j - 1] + (new[j - 1] - rows[j - 1]) / (4.0**j - 1.0))
        done = np.all(np.abs(new[-1] - rows[-1]) <= rtol * np.abs(new[-1]) + 1e-300)
        rows = new
        if lev >= 4 and done:
            break
    E = res + rows[-1]
    for j in range(steps):
        b_next = bb + alpha * (j + 1)
        E = (E - rgamma(b_next - alpha)) / (-x)
    return E


@lru_cache(maxsize=128)
def asym_threshold(alpha: float, beta: float) -> float:
    """Smallest ladder point x >= 30 where the 10-term tail is <= 1e-13."""
    lead_ks = [k for k in (1, 2, 3) if rgamma(beta - alpha * k) != 0.0]
    if not lead_ks:
        return np.inf
    x = 30.0
    for _ in range(40):
        lead = max(abs(rgamma(beta - alpha * k)) * x ** (-k) for k in lead_ks)
        tail = max(abs(rgamma(beta - alpha * k)) * x ** (-k) for k in (11, 12, 13))
        if tail <= 1e-13 * lead:
            return x
        x *= 2.0
    return np.inf


def _asymptotic(alpha: float, beta: float, x: np.ndarray) -> np.ndarray:
    out = _residue_pair(alpha, beta, x)
    z = -x
    for k in range(1, _ASYM_TERMS + 1):
        out = out - z ** (-float(k)) * rgamma(beta - alpha * k)
    return out


def ml_eval_on_grid(params: MlParams, z) -> np.ndarray:
    """Vectorized evaluation of E_{alpha,beta} at an array of arguments."""
    a, b, tol = params.alpha, params.beta, params.tol
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(~np.isfinite(z)):
        raise DomainError("ml_eval: non-finite argument")
    if np.any(z > Z_SWITCH):
        raise DomainError(f"ml_eval: positive arguments only supported up to {Z_SWITCH}")
    out = np.empty_like(z)
    near = np.abs(z) <= Z_SWITCH
    if np.any(near):
        vals, cond = _series(a, b, z[near], tol)
        out[near] = vals
        # worst-case rounding floor eps * condition; flag only a clear breach
        if np.any(cond * 1e-16 > 100.0 * tol):
            warnings.warn(
                f"series conditioning limits accuracy to ~{np.max(cond) * 1e-16:.1e}",
                MlAccuracyWarning, stacklevel=2)
    far = ~near
    if np.any(far):
        if a == 1.0:
            # poles sit on the contour; fall back to the classical forms
            if b == 1.0:
                out[far] = np.exp(z[far])
            elif b == 2.0:
                out[far] = np.expm1(z[far]) / z[far]
            else:
                raise DomainError(
                    "ml_eval: alpha = 1 with z < -5 supported only for beta in {1, 2}")
        else:
            x = -z[far]
            xa = asym_threshold(a, b)
            res = np.empty_like(x)
            mid = x < xa
            if np.any(mid):
                res[mid] = _branch_integral(a, b, x[mid], min(tol, 1e-13))
            if np.any(~mid):
                res[~mid] = _asymptotic(a, b, x[~mid])
            out[far] = res
    return out


def ml_eval(params: MlParams, z: float) -> float:
    """E_{alpha,beta}(z) for z <= 0, or 0 < z <= 5."""
    return float(ml_eval_on_grid(params, float(z))[0])


def ml_oracle(params: MlParams, z: float) -> float:
    """Reference value from the Taylor series in extended precision.

    Inputs are promoted to exact multi-precision numbers before any
    arithmetic (the binary doubles embed exactly), so the summation is
    immune to the cancellation that limits double precision.  Intended
    for tests; requires mpmath.
    """
    if abs(z) > 50.0:
        raise OracleRangeError(f"ml_oracle: |z| <= 50 required, got {z}")
    import mpmath as mp

    with mp.workdps(50):
        a = mp.mpf(params.alpha)
        b = mp.mpf(params.beta)
        zz = mp.mpf(z)
        tol = mp.mpf(params.tol) * mp.mpf(1e-3)
        s = mp.mpf(0)
        k = 0
        while k < 3000:
            t = zz**k / mp.gamma(a * k + b)
            s += t
            if k > 3 and abs(t) < tol * abs(s):
                break
            k += 1
        return float(s)


def ml_kernel_integral(alpha: float, lam: float, g: GridFunction) -> GridFunction:
    """Forcing convolution int_0^t s^(alpha-1) E_{alpha,alpha}(-lam s^alpha) g(t-s) ds.

    The weakly singular factor s^(alpha-1) is integrated exactly against
    the piecewise-linear interpolant of E * g (the same product-trapezoid
    weights as the fractional integral); node 0 is exactly 0.  With
    lam = 0 this reduces to I^alpha g with identical weights.
    """
    if not (1.0 < alpha < 2.0):
        raise DomainError(f"ml_kernel_integral: alpha must be in (1,2), got {alpha}")
    if lam < 0.0:
        raise DomainError(f"ml_kernel_integral: lambda must be >= 0, got {lam}")
    from .frac_calculus import _conv_weights

    grid = g.grid
    N, h = grid.N, grid.h
    t = grid.nodes
    if lam == 0.0:
        e = np.full(N + 1, rgamma(alpha))
    else:
        e = ml_eval_on_grid(MlParams(alpha, alpha), -lam * t**alpha)
    A, B = _conv_weights(alpha, N, h)
    gv = g.values
    # sum_m [A_m e_{m-1} g_{i-m+1} + B_m e_m g_{i-m}]
    c1 = np.convolve(gv[1:], A * e[0:N])
    c2 = np.convolve(gv[:-1], B * e[1:N + 1])
    out = np.zeros(N + 1)
    out[1:] = c1[:N] + c2[:N]
    return GridFunction(grid, out)

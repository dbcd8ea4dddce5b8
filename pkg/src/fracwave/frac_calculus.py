"""Riemann-Liouville fractional integrals and derivatives on uniform grids.

Left integrals are discretized with product-trapezoidal convolution
weights, i.e. the kernel (t-s)^(beta-1) is integrated exactly against the
piecewise-linear interpolant of the data.  Right-sided operators are exact
time reversals of the left-sided ones (the (-1)^m in the right derivative
cancels against the chain rule of the reflection, so the same weights
apply to reversed data).  Derivatives compose the conjugate-order integral
with central finite differences; node 0 and node N are one-sided and the
result is flagged as endpoint-extrapolated.

The module also carries the analytic power-rule oracle and the numerical
identity checkers used by the verification harness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import InvalidInputError, InvalidOrderError, PreconditionError, GridTooCoarseError
from .gammafn import gamma, rgamma
from .grids import (
    GridFunction,
    TimeGrid,
    diff1,
    diff2,
    identity_slice,
    inner_product,
    require_same_grid,
    sup_norm,
)


@dataclass(frozen=True)
class FracOrder:
    """Real order of a fractional operator."""

    beta: float

    def __float__(self) -> float:
        return float(self.beta)


def _as_order(beta) -> float:
    b = float(beta.beta) if isinstance(beta, FracOrder) else float(beta)
    if not math.isfinite(b):
        raise InvalidOrderError(f"order must be finite, got {b}")
    return b


@lru_cache(maxsize=256)
def _conv_weights(beta: float, N: int, h: float):
    """Product-trapezoidal weights.

    A[m-1] multiplies v_{i-m}, B[m-1] multiplies v_{i-m+1} in
    sum_{m=1..i}, so that the lag-m cell integrates
    kernel tau^(beta-1) against the linear interpolant exactly.
    """
    m = np.arange(1, N + 1, dtype=float)
    d1 = np.empty(N)
    d2 = np.empty(N)
    d1[0] = 1.0
    d2[0] = 1.0
    mm = m[1:]
    # m^b - (m-1)^b without cancellation
    d1[1:] = mm**beta * (-np.expm1(beta * np.log1p(-1.0 / mm)))
    d2[1:] = mm ** (beta + 1.0) * (-np.expm1((beta + 1.0) * np.log1p(-1.0 / mm)))
    a = h**beta * d1 / beta
    b = h ** (beta + 1.0) * d2 / (beta + 1.0)
    A = m * a - b / h
    B = (1.0 - m) * a + b / h
    A.setflags(write=False)
    B.setflags(write=False)
    return A, B


def _conv_left(values: np.ndarray, beta: float, N: int, h: float) -> np.ndarray:
    A, B = _conv_weights(beta, N, h)
    out = np.zeros_like(values)
    c1 = np.convolve(values, A)
    c2 = np.convolve(values[1:], B)
    out[1:] = (c1[:N] + c2[:N]) / gamma(beta)
    return out


def rl_integral_left(v: GridFunction, beta) -> GridFunction:
    """Left fractional integral of order beta > 0; node 0 is exactly 0."""
    b = _as_order(beta)
    if b <= 0.0:
        raise InvalidOrderError(f"integral order must be positive, got {b}")
    g = v.grid
    return GridFunction(g, _conv_left(v.values, b, g.N, g.h))


def rl_integral_right(v: GridFunction, beta) -> GridFunction:
    """Right fractional integral: time reversal of the left one."""
    b = _as_order(beta)
    if b <= 0.0:
        raise InvalidOrderError(f"integral order must be positive, got {b}")
    g = v.grid
    rev = _conv_left(v.values[::-1].copy(), b, g.N, g.h)
    return GridFunction(g, rev[::-1].copy())


def _derivative_order(beta) -> tuple[float, int]:
    b = _as_order(beta)
    if not (0.0 < b < 1.0 or 1.0 < b < 2.0):
        raise InvalidOrderError(
            f"derivative order must lie in (0,1) or (1,2), got {b}")
    return b, (1 if b < 1.0 else 2)


def rl_derivative_left(v: GridFunction, beta) -> GridFunction:
    """D^beta = D^m I^(m-beta) with m = ceil(beta); endpoints one-sided."""
    b, m = _derivative_order(beta)
    g = v.grid
    if g.N < 4:
        raise GridTooCoarseError("rl_derivative_left: need N >= 4")
    w = _conv_left(v.values, m - b, g.N, g.h)
    d = diff2(w, g.h) if m == 2 else diff1(w, g.h)
    return GridFunction(g, d, endpoint_extrapolated=True)


def rl_derivative_right(v: GridFunction, beta) -> GridFunction:
    """Right derivative; equals the reversal of the left one on reversed data."""
    b, m = _derivative_order(beta)
    g = v.grid
    if g.N < 4:
        raise GridTooCoarseError("rl_derivative_right: need N >= 4")
    w = _conv_left(v.values[::-1].copy(), m - b, g.N, g.h)
    d = diff2(w, g.h) if m == 2 else diff1(w, g.h)
    return GridFunction(g, d[::-1].copy(), endpoint_extrapolated=True)


class PowerRule(NamedTuple):
    coefficient: float
    exponent: float


def power_rule(mu: float, beta, mode: str = "integral") -> PowerRule:
    """Closed form of I^beta or D^beta applied to t^mu.

    Integral: (Gamma(mu+1)/Gamma(mu+beta+1)) t^(mu+beta).
    Derivative: Gamma(mu+1) rgamma(mu+1-beta) t^(mu-beta); the reciprocal
    gamma supplies the exact-zero branch on the kernel family
    mu in {beta-1, beta-2}.
    """
    mu = float(mu)
    if not (mu >= 0.0 and math.isfinite(mu)):
        raise InvalidInputError(f"power_rule: mu must be >= 0, got {mu}")
    if mode == "integral":
        b = _as_order(beta)
        if b <= 0.0:
            raise InvalidOrderError(f"integral order must be positive, got {b}")
        return PowerRule(gamma(mu + 1.0) * rgamma(mu + 1.0 + b), mu + b)
    if mode == "derivative":
        b, _ = _derivative_order(beta)
        return PowerRule(gamma(mu + 1.0) * rgamma(mu + 1.0 - b), mu - b)
    raise InvalidInputError(f"power_rule: unknown mode {mode!r}")


def default_identity_tolerance(grid: TimeGrid, scale: float = 1.0) -> float:
    """Pass threshold for the lemma checks: max(1e-3, 10 h^1.5) * scale."""
    return max(1e-3 * scale, 10.0 * grid.h**1.5 * scale)


def check_semigroup(v: GridFunction, beta, gamma_order) -> float:
    """Max-norm interior gap of I^beta I^gamma v against I^(beta+gamma) v."""
    b = _as_order(beta)
    c = _as_order(gamma_order)
    lhs = rl_integral_left(rl_integral_left(v, c), b)
    rhs = rl_integral_left(v, b + c)
    sl = identity_slice(v.grid)
    return float(np.max(np.abs(lhs.values[sl] - rhs.values[sl])))


def check_adjoint(u: GridFunction, v: GridFunction, beta) -> float:
    """|<I^beta u, v> - <u, I_right^beta v>| under the trapezoid product."""
    require_same_grid(u, v)
    lhs = inner_product(rl_integral_left(u, beta), v)
    rhs = inner_product(u, rl_integral_right(v, beta))
    return abs(lhs - rhs)


def check_exchange(v: GridFunction, alpha) -> float:
    """Max-norm interior gap of I(D^alpha v) against D^alpha(I v).

    Meaningful for data whose fractional derivative is grid-representable
    (the power family t^mu with mu >= alpha, and smoother).
    """
    a, _ = _derivative_order(alpha)
    lhs = rl_integral_left(rl_derivative_left(v, a), 1.0)
    rhs = rl_derivative_left(rl_integral_left(v, 1.0), a)
    sl = identity_slice(v.grid)
    return float(np.max(np.abs(lhs.values[sl] - rhs.values[sl])))


def check_duality_blm(v: GridFunction, phi: GridFunction, alpha) -> float:
    """Gap between <D^alpha v, phi> and the split-order inner product.

    Requires v(0) = 0; phi should vanish (with its first differences) near
    both endpoints so the pairing ignores the extrapolated boundary values.
    """
    require_same_grid(v, phi)
    a, m = _derivative_order(alpha)
    if m != 2:
        raise InvalidOrderError("duality check is stated for alpha in (1,2)")
    scale = max(sup_norm(v), 1e-300)
    if abs(v.values[0]) > 1e-10 * scale:
        raise PreconditionError(f"duality check needs v(0)=0, got {v.values[0]}")
    lhs = inner_product(rl_derivative_left(v, a), phi)
    left = rl_derivative_left(v, (a + 1.0) / 2.0)
    right = rl_derivative_right(phi, (a - 1.0) / 2.0)
    return abs(lhs - inner_product(left, right))

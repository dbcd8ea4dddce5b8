"""Uniform time grids and nodal grid functions.

Everything downstream (fractional operators, norms, solvers) works on a
``TimeGrid`` / ``GridFunction`` pair.  Grid functions are treated as
immutable once constructed; operators return new instances.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GridTooCoarseError, IncompatibleGridsError, InvalidInputError


@dataclass(frozen=True)
class TimeGrid:
    """Uniform partition of [0, T] with N subintervals (N+1 nodes)."""

    T: float
    N: int

    def __post_init__(self):
        if not (self.T > 0.0 and np.isfinite(self.T)):
            raise InvalidInputError(f"TimeGrid: T must be positive and finite, got {self.T}")
        if self.N < 2:
            raise GridTooCoarseError(f"TimeGrid: need N >= 2, got {self.N}")

    @property
    def h(self) -> float:
        return self.T / self.N

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.T, self.N + 1)

    def refined(self, factor: int = 2) -> "TimeGrid":
        return TimeGrid(self.T, self.N * factor)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Real nodal values on a TimeGrid.

    ``endpoint_extrapolated`` marks functions whose node-0 / node-N values
    came from one-sided stencils (fractional derivatives) rather than from
    the defining formula.
    """

    grid: TimeGrid
    values: np.ndarray
    endpoint_extrapolated: bool = field(default=False, compare=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.N + 1,):
            raise InvalidInputError(
                f"GridFunction: expected {self.grid.N + 1} values, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise InvalidInputError("GridFunction: values must be finite")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_callable(cls, grid: TimeGrid, f) -> "GridFunction":
        return cls(grid, np.asarray(f(grid.nodes), dtype=float))

    @classmethod
    def zeros(cls, grid: TimeGrid) -> "GridFunction":
        return cls(grid, np.zeros(grid.N + 1))

    def with_values(self, values, extrapolated: bool = False) -> "GridFunction":
        return GridFunction(self.grid, values, extrapolated)

    def __add__(self, other: "GridFunction") -> "GridFunction":
        require_same_grid(self, other)
        return GridFunction(self.grid, self.values + other.values)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        require_same_grid(self, other)
        return GridFunction(self.grid, self.values - other.values)

    def __mul__(self, c: float) -> "GridFunction":
        return GridFunction(self.grid, self.values * float(c))

    __rmul__ = __mul__

    def __neg__(self) -> "GridFunction":
        return GridFunction(self.grid, -self.values)


def require_same_grid(u: GridFunction, v: GridFunction) -> None:
    if u.grid != v.grid:
        raise IncompatibleGridsError(
            f"grids differ: (T={u.grid.T}, N={u.grid.N}) vs (T={v.grid.T}, N={v.grid.N})")


def trapezoid_weights(grid: TimeGrid) -> np.ndarray:
    w = np.full(grid.N + 1, grid.h)
    w[0] = w[-1] = grid.h / 2.0
    return w


def inner_product(u: GridFunction, v: GridFunction) -> float:
    """Trapezoidal L2(0,T) inner product."""
    require_same_grid(u, v)
    return float(np.sum(trapezoid_weights(u.grid) * u.values * v.values))


def l2_norm(v: GridFunction) -> float:
    return float(np.sqrt(np.sum(trapezoid_weights(v.grid) * v.values**2)))


def sup_norm(v: GridFunction) -> float:
    return float(np.max(np.abs(v.values)))


# Finite differences: central stencils with second-order one-sided ends.

def diff1(values: np.ndarray, h: float) -> np.ndarray:
    return np.gradient(values, h, edge_order=2)


def diff2(values: np.ndarray, h: float) -> np.ndarray:
    if len(values) < 4:
        raise GridTooCoarseError("diff2: need at least 4 nodes")
    out = np.empty_like(values)
    out[1:-1] = (values[2:] - 2.0 * values[1:-1] + values[:-2]) / h**2
    out[0] = (2.0 * values[0] - 5.0 * values[1] + 4.0 * values[2] - values[3]) / h**2
    out[-1] = (2.0 * values[-1] - 5.0 * values[-2] + 4.0 * values[-3] - values[-4]) / h**2
    return out


# Node masks.  Identity checks use a fixed two-node trim; pointwise checks
# against singular exact solutions trim the origin layer t < T/16, where
# piecewise-linear quadrature has an h-independent error at fixed index.

IDENTITY_MARGIN = 2


def identity_slice(grid: TimeGrid) -> slice:
    return slice(IDENTITY_MARGIN, grid.N - IDENTITY_MARGIN + 1)


def origin_layer_slice(grid: TimeGrid) -> slice:
    lo = max(IDENTITY_MARGIN, grid.N // 16)
    return slice(lo, grid.N - IDENTITY_MARGIN + 1)

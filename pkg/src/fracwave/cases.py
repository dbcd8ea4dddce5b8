"""Named, versioned data cases used by the harness and the acceptance suite.

Case names are part of the report contract: tests reference cases, not
inline formulas.  The random smooth families use a linear-congruential
generator seeded from the experiment config, so sweeps reproduce exactly
on any platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .galerkin import ProblemData, SeparableForcing, SinePoly
from .gammafn import gamma
from .grids import GridFunction, TimeGrid
from .mode_solver import ModeProblem

CASE_SCHEMA_VERSION = 1


class Lcg:
    """64-bit linear-congruential generator (MMIX constants)."""

    _A = 6364136223846793005
    _C = 1442695040888963407
    _M = 1 << 64

    def __init__(self, seed: int):
        self.state = int(seed) % self._M

    def next_uint(self) -> int:
        self.state = (self._A * self.state + self._C) % self._M
        return self.state

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        return lo + (hi - lo) * (self.next_uint() / self._M)


# -- scalar (mode) cases -------------------------------------------------------

def ode_case(name: str, alpha: float, lam: float, grid: TimeGrid) -> ModeProblem:
    t = grid.nodes
    if name == "relaxation":
        g = GridFunction.zeros(grid)
        return ModeProblem(alpha, lam, 1.0, 0.0, g, g0=0.0, g1=0.0)
    if name == "incompatible-step":
        g = GridFunction(grid, np.ones_like(t))
        return ModeProblem(alpha, lam, 0.0, 0.0, g, g0=1.0, g1=0.0)
    if name == "smooth-forcing":
        g = GridFunction(grid, 1.0 + t)
        return ModeProblem(alpha, lam, 0.0, 0.0, g, g0=1.0, g1=1.0)
    if name == "compatible":
        # g(0) = lam*c0 kills the leading singular term
        g = GridFunction(grid, lam * 1.0 + t)
        return ModeProblem(alpha, lam, 1.0, 0.0, g, g0=lam, g1=1.0)
    if name == "polynomial":
        g = GridFunction(grid, 1.0 + t + 0.5 * t**2)
        return ModeProblem(alpha, lam, 1.0, 0.5, g, g0=1.0, g1=1.0)
    raise ConfigError(f"unknown ode case {name!r}")


ODE_CASES = ("relaxation", "incompatible-step", "smooth-forcing", "compatible", "polynomial")


# -- field (interval) cases ----------------------------------------------------

def pde_case(name: str, alpha: float, T: float) -> ProblemData:
    """Interval cases on (0, pi), where lambda_k = k^2 exactly."""
    if name == "single-mode-ic":
        return ProblemData(u0=SinePoly({1: 1.0}), u1=None, f=None, T=T, alpha=alpha)
    if name == "incompatible-ic":
        return ProblemData(u0=SinePoly({1: 1.0, 3: 0.5}), u1=None, f=None, T=T, alpha=alpha)
    if name == "compatible-ic":
        # f(., 0) = -laplace(u0): mode-wise f_k(0) = lambda_k c_{k,0}
        u0 = SinePoly({1: 1.0})
        f = SeparableForcing(((SinePoly({1: 1.0}), lambda t: np.ones_like(t)),))
        return ProblemData(u0=u0, u1=None, f=f,
                           T=T, alpha=alpha, f0=SinePoly({1: 1.0}),
                           ft0=SinePoly({1: 0.0}))
    if name == "forced-mode2":
        f = SeparableForcing(((SinePoly({2: 1.0}), lambda t: np.ones_like(t)),))
        return ProblemData(u0=None, u1=None, f=f, T=T, alpha=alpha,
                           f0=SinePoly({2: 1.0}), ft0=SinePoly({2: 0.0}))
    if name == "velocity-mode1":
        return ProblemData(u0=None, u1=SinePoly({1: 1.0}), f=None, T=T, alpha=alpha)
    if name == "manufactured-poly":
        # exact solution (1 + t^2) phi_1 with lambda_1 = 1
        c = 2.0 / gamma(3.0 - alpha)
        f = SeparableForcing((
            (SinePoly({1: 1.0}), lambda t, c=c, a=alpha: c * t ** (2.0 - a)),
            (SinePoly({1: 1.0}), lambda t: 1.0 + t**2),
        ))
        return ProblemData(u0=SinePoly({1: 1.0}), u1=SinePoly({1: 0.0}), f=f,
                           T=T, alpha=alpha, f0=SinePoly({1: 1.0}),
                           ft0=SinePoly({1: 0.0}))
    if name == "smooth-family":
        f = SeparableForcing(((SinePoly({1: 0.7, 2: 0.2}), lambda t: 1.0 + t),))
        return ProblemData(u0=SinePoly({1: 1.0, 2: 0.3}),
                           u1=SinePoly({1: 0.5, 3: -0.2}),
                           f=f, T=T, alpha=alpha,
                           f0=SinePoly({1: 0.7, 2: 0.2}),
                           ft0=SinePoly({1: 0.7, 2: 0.2}))
    raise ConfigError(f"unknown pde case {name!r}")


PDE_CASES = ("single-mode-ic", "incompatible-ic", "compatible-ic", "forced-mode2",
             "velocity-mode1", "manufactured-poly", "smooth-family")


def manufactured_exact(alpha: float, grid: TimeGrid) -> np.ndarray:
    """Mode-1 coefficient of the manufactured-poly case."""
    return 1.0 + grid.nodes**2


# -- test-function families ----------------------------------------------------

@dataclass(frozen=True)
class FamilyMember:
    name: str
    values: GridFunction
    vanishes_at_zero: bool
    derivative_vanishes_at_zero: bool
    power_exponent: float | None = None


def lemma_family(alpha: float, grid: TimeGrid):
    """The identity-check family {1, t, t^2, t^alpha, sin(pi t / T)}."""
    t, T = grid.nodes, grid.T
    return (
        FamilyMember("one", GridFunction(grid, np.ones_like(t)), False, True, 0.0),
        FamilyMember("t", GridFunction(grid, t), True, False, 1.0),
        FamilyMember("t2", GridFunction(grid, t**2), True, True, 2.0),
        FamilyMember("t_alpha", GridFunction(grid, t**alpha), True, True, alpha),
        FamilyMember("sin", GridFunction(grid, np.sin(np.pi * t / T)), True, False, None),
    )


def bump(grid: TimeGrid) -> GridFunction:
    """Polynomial bump vanishing to second order at both endpoints."""
    s = grid.nodes / grid.T
    return GridFunction(grid, 16.0 * s**2 * (1.0 - s) ** 2)


def smooth_random_family(grid: TimeGrid, count: int, seed: int):
    """LCG-seeded band-limited functions for the equivalence-band sweep."""
    rng = Lcg(seed)
    t, T = grid.nodes, grid.T
    out = []
    for i in range(count):
        v = np.zeros_like(t)
        for j in range(1, 5):
            v += rng.uniform(-1.0, 1.0) * np.sin(j * math.pi * t / T)
        v += rng.uniform(0.2, 1.0)
        out.append(FamilyMember(f"rand{i}", GridFunction(grid, v), False, False, None))
    return tuple(out)

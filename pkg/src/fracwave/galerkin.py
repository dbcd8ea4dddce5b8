"""Spectral Galerkin solver on an interval with sine eigenpairs.

The spatial domain is (0, L) with the closed-form Dirichlet eigenpairs
lambda_k = (k pi / L)^2, phi_k = sqrt(2/L) sin(k pi x / L), so the PDE
decouples into one ModeProblem per retained mode.  Data can be given as
``SinePoly`` (exact projections), callables (composite-Simpson
projections), or separable sums of (spatial, temporal) factors for the
forcing.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .errors import (
    DomainError,
    IncompleteDataError,
    InvalidInputError,
    ResolutionError,
)
from .gammafn import gamma
from .grids import GridFunction, TimeGrid
from .mode_solver import ModeProblem, ModeSolution, solve_closed_form, solve_volterra
from .sobolev import CoeffStack, bochner_norm, h_beta_norm


@dataclass(frozen=True)
class IntervalDomain:
    """Interval (0, L) with an even Simpson resolution M (M+1 nodes)."""

    length: float
    resolution: int = 256

    def __post_init__(self):
        if not (self.length > 0.0 and math.isfinite(self.length)):
            raise InvalidInputError(f"IntervalDomain: length must be positive, got {self.length}")
        if self.resolution < 64 or self.resolution % 2 != 0:
            raise ResolutionError(
                f"IntervalDomain: resolution must be even and >= 64, got {self.resolution}")

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.length, self.resolution + 1)

    def simpson_weights(self) -> np.ndarray:
        M = self.resolution
        w = np.ones(M + 1)
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        return w * (self.length / M) / 3.0


def eigen_value(domain: IntervalDomain, k: int) -> float:
    return (k * math.pi / domain.length) ** 2


def eigen_function(domain: IntervalDomain, k: int, x) -> np.ndarray:
    """Normalized sine mode; exactly zero on the boundary nodes."""
    x = np.asarray(x, dtype=float)
    L = domain.length
    vals = math.sqrt(2.0 / L) * np.sin(k * math.pi * x / L)
    boundary = (x == 0.0) | (x == L)
    return np.where(boundary, 0.0, vals)


@dataclass(frozen=True)
class SinePoly:
    """Finite sine expansion sum_k a_k phi_k; projections are exact."""

    coeffs: dict

    def __call__(self, x, domain: IntervalDomain) -> np.ndarray:
        out = np.zeros_like(np.asarray(x, dtype=float))
        for k, a in self.coeffs.items():
            out = out + a * eigen_function(domain, k, x)
        return out

    def coefficient_vector(self, K: int) -> np.ndarray:
        c = np.zeros(K)
        for k, a in self.coeffs.items():
            if 1 <= k <= K:
                c[k - 1] = a
        return c

    def truncation_residual_sq(self, K: int) -> float:
        return float(sum(a * a for k, a in self.coeffs.items() if k > K))


class Projection(NamedTuple):
    coefficients: np.ndarray
    parseval_residual: float


def project(v, domain: IntervalDomain, K: int) -> Projection:
    """Coefficients (v, phi_k), k = 1..K, plus the Parseval residual.

    ``v`` may be a SinePoly (exact), a callable of x, or nodal samples on
    ``domain.nodes``.  The anti-aliasing guard requires M >= 4K for
    quadrature-based inputs.
    """
    if K < 1:
        raise DomainError(f"project: need K >= 1, got {K}")
    if isinstance(v, SinePoly):
        return Projection(v.coefficient_vector(K), v.truncation_residual_sq(K))
    if domain.resolution < 4 * K:
        raise ResolutionError(
            f"project: resolution {domain.resolution} < 4K = {4 * K} (aliasing)")
    x = domain.nodes
    samples = np.asarray(v(x) if callable(v) else v, dtype=float)
    if samples.shape != x.shape:
        raise InvalidInputError("project: samples must match domain nodes")
    w = domain.simpson_weights()
    basis = np.stack([eigen_function(domain, k, x) for k in range(1, K + 1)])
    coeffs = basis @ (w * samples)
    norm_sq = float(np.sum(w * samples**2))
    return Projection(coeffs, norm_sq - float(np.sum(coeffs**2)))


@dataclass(frozen=True)
class SeparableForcing:
    """f(x,t) = sum_j spatial_j(x) * temporal_j(t); keeps projections exact."""

    terms: tuple

    def spatial_parts(self):
        return [s for s, _ in self.terms]

    def temporal_parts(self):
        return [tau for _, tau in self.terms]


@dataclass(frozen=True)
class ProblemData:
    """Initial data and forcing for the interval problem.

    ``f`` is None (zero forcing), a callable f(x, t), or a
    SeparableForcing.  ``f0`` / ``ft0`` optionally give the initial time
    slices f(., 0) and f_t(., 0) when known in closed form.
    """

    u0: object
    u1: object
    f: object
    T: float
    alpha: float
    f0: object = None
    ft0: object = None

    def __post_init__(self):
        if not (1.0 < self.alpha < 2.0):
            raise DomainError(f"ProblemData: alpha must be in (1,2), got {self.alpha}")
        if not (self.T > 0.0):
            raise DomainError(f"ProblemData: T must be positive, got {self.T}")


def _check_boundary(v, domain: IntervalDomain, name: str) -> None:
    if isinstance(v, SinePoly) or v is None:
        return
    vals = np.asarray(v(domain.nodes) if callable(v) else v, dtype=float)
    scale = max(float(np.max(np.abs(vals))), 1e-300)
    if abs(vals[0]) > 1e-8 * scale or abs(vals[-1]) > 1e-8 * scale:
        raise InvalidInputError(f"{name} must vanish on the boundary")


def _forcing_modes(data: ProblemData, domain: IntervalDomain, K: int,
                   grid: TimeGrid) -> np.ndarray:
    """f_k(t_j) as an array of shape (K, N+1)."""
    t = grid.nodes
    if data.f is None:
        return np.zeros((K, grid.N + 1))
    if isinstance(data.f, SeparableForcing):
        out = np.zeros((K, grid.N + 1))
        for spatial, temporal in data.f.terms:
            coeffs = project(spatial, domain, K).coefficients
            out += np.outer(coeffs, np.asarray(temporal(t), dtype=float))
        return out
    x = domain.nodes
    w = domain.simpson_weights()
    basis = np.stack([eigen_function(domain, k, x) for k in range(1, K + 1)])
    out = np.empty((K, grid.N + 1))
    for j, tj in enumerate(t):
        out[:, j] = basis @ (w * np.asarray(data.f(x, tj), dtype=float))
    return out


def _initial_slice_modes(data: ProblemData, domain, K, f_modes, grid,
                         which: str):
    """(values, estimated?) of f_k(0) or f_k'(0) for k = 1..K."""
    source = data.f0 if which == "f0" else data.ft0
    if source is not None:
        return project(source, domain, K).coefficients, False
    if which == "f0":
        return f_modes[:, 0].copy(), False  # nodal slice is exact at t=0
    if data.f is None:
        return np.zeros(K), False
    if isinstance(data.f, SeparableForcing):
        h = grid.h
        vals = np.zeros(K)
        for spatial, temporal in data.f.terms:
            coeffs = project(spatial, domain, K).coefficients
            tau = np.asarray(temporal(grid.nodes[:3]), dtype=float)
            vals += coeffs * (-3.0 * tau[0] + 4.0 * tau[1] - tau[2]) / (2.0 * h)
        return vals, True
    h = grid.h
    return (-3.0 * f_modes[:, 0] + 4.0 * f_modes[:, 1] - f_modes[:, 2]) / (2.0 * h), True


@dataclass(frozen=True)
class SpectralField:
    """Truncated expansion sum_{k<=K} c_k(t) phi_k(x)."""

    domain: IntervalDomain
    stack: CoeffStack
    tag: str = "solution"
    mode_residuals: tuple = ()
    u0_coeffs: tuple = ()
    u1_coeffs: tuple = ()
    parseval_residuals: tuple = ()

    @property
    def K(self) -> int:
        return len(self.stack.coefficients)

    @property
    def grid(self) -> TimeGrid:
        return self.stack.grid

    def coefficient(self, k: int) -> GridFunction:
        return self.stack.coefficients[k - 1]

    def coefficient_matrix(self) -> np.ndarray:
        return np.stack([c.values for c in self.stack.coefficients])


def evaluate(field: SpectralField, x: float, t: float) -> float:
    """Point value; t is matched to a node or linearly interpolated."""
    dom = field.domain
    if not (0.0 <= x <= dom.length) or not (0.0 <= t <= field.grid.T):
        raise DomainError(f"evaluate: point ({x}, {t}) outside the domain")
    grid = field.grid
    pos = t / grid.h
    i = min(int(math.floor(pos)), grid.N - 1)
    frac = pos - i
    total = 0.0
    for k in range(1, field.K + 1):
        c = field.stack.coefficients[k - 1].values
        ck = c[i] * (1.0 - frac) + c[i + 1] * frac
        total += ck * float(eigen_function(dom, k, np.asarray(x)))
    return total


def solve(data: ProblemData, domain: IntervalDomain, K: int, N: int,
          method: str = "closed-form", jobs: int = 1) -> SpectralField:
    """Project the data, solve each mode, and assemble the field."""
    if method not in ("closed-form", "volterra"):
        raise InvalidInputError(f"solve: unknown method {method!r}")
    _check_boundary(data.u0, domain, "u0")
    grid = TimeGrid(data.T, N)
    pu0 = project(data.u0, domain, K) if data.u0 is not None else Projection(np.zeros(K), 0.0)
    pu1 = project(data.u1, domain, K) if data.u1 is not None else Projection(np.zeros(K), 0.0)
    f_modes = _forcing_modes(data, domain, K, grid)
    f0_modes, _ = _initial_slice_modes(data, domain, K, f_modes, grid, "f0")
    ft0_modes, _ = _initial_slice_modes(data, domain, K, f_modes, grid, "ft0")
    solver = solve_closed_form if method == "closed-form" else solve_volterra

    def run_mode(k: int) -> ModeSolution:
        problem = ModeProblem(
            alpha=data.alpha,
            lam=eigen_value(domain, k),
            c0=float(pu0.coefficients[k - 1]),
            c1=float(pu1.coefficients[k - 1]),
            g=GridFunction(grid, f_modes[k - 1]),
            g0=float(f0_modes[k - 1]),
            g1=float(ft0_modes[k - 1]),
        )
        return solver(problem)

    ks = list(range(1, K + 1))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            solutions = list(pool.map(run_mode, ks))
    else:
        solutions = [run_mode(k) for k in ks]
    stack = CoeffStack(tuple(s.y for s in solutions))
    return SpectralField(
        domain=domain,
        stack=stack,
        tag="solution",
        mode_residuals=tuple(s.residual_norm for s in solutions),
        u0_coeffs=tuple(pu0.coefficients),
        u1_coeffs=tuple(pu1.coefficients),
        parseval_residuals=(pu0.parseval_residual, pu1.parseval_residual),
    )


def singular_fields(data: ProblemData, domain: IntervalDomain, K: int, N: int,
                    strict: bool = False):
    """Mode-wise singular parts (S1, S2, S3) on the time grid.

    S2 needs f_t(., 0); without the ``ft0`` callback it is estimated from
    the forcing grid unless ``strict`` is set.
    """
    grid = TimeGrid(data.T, N)
    pu0 = project(data.u0, domain, K) if data.u0 is not None else Projection(np.zeros(K), 0.0)
    pu1 = project(data.u1, domain, K) if data.u1 is not None else Projection(np.zeros(K), 0.0)
    f_modes = _forcing_modes(data, domain, K, grid)
    f0_modes, _ = _initial_slice_modes(data, domain, K, f_modes, grid, "f0")
    ft0_modes, ft0_est = _initial_slice_modes(data, domain, K, f_modes, grid, "ft0")
    if strict and ft0_est:
        raise IncompleteDataError("singular_fields: f_t(.,0) unavailable")
    t = grid.nodes
    a = data.alpha
    lams = np.array([eigen_value(domain, k) for k in range(1, K + 1)])
    lead = f0_modes - lams * pu0.coefficients
    next_ = ft0_modes - lams * pu1.coefficients
    s1 = [GridFunction(grid, lead[k] / gamma(a + 1.0) * t**a) for k in range(K)]
    s2 = [GridFunction(grid, next_[k] / gamma(a + 2.0) * t ** (a + 1.0)) for k in range(K)]
    s3 = [GridFunction(grid, -lams[k] * lead[k] / gamma(2.0 * a + 1.0) * t ** (2.0 * a))
          for k in range(K)]
    mk = lambda parts, tag: SpectralField(domain=domain, stack=CoeffStack(tuple(parts)), tag=tag)
    return mk(s1, "S1"), mk(s2, "S2"), mk(s3, "S3")


class SlopeCheck(NamedTuple):
    per_mode_gap: np.ndarray
    max_gap: float


def initial_slope_check(u: SpectralField, s1: SpectralField) -> SlopeCheck:
    """One-sided slope of c_k - s1_k at t = 0 against the u1 coefficients."""
    h = u.grid.h
    gaps = np.empty(u.K)
    for k in range(1, u.K + 1):
        w = u.coefficient(k).values - s1.coefficient(k).values
        slope = (-3.0 * w[0] + 4.0 * w[1] - w[2]) / (2.0 * h)
        target = u.u1_coeffs[k - 1] if u.u1_coeffs else 0.0
        gaps[k - 1] = abs(slope - target)
    return SlopeCheck(gaps, float(np.max(gaps)))


# -- norms over fields --------------------------------------------------------

def spatial_l2(coeffs) -> float:
    return math.sqrt(float(np.sum(np.asarray(coeffs) ** 2)))


def spatial_h01(domain: IntervalDomain, coeffs) -> float:
    lams = np.array([eigen_value(domain, k) for k in range(1, len(coeffs) + 1)])
    return math.sqrt(float(np.sum(lams * np.asarray(coeffs) ** 2)))


def spatial_h2(domain: IntervalDomain, coeffs) -> float:
    lams = np.array([eigen_value(domain, k) for k in range(1, len(coeffs) + 1)])
    return math.sqrt(float(np.sum(lams**2 * np.asarray(coeffs) ** 2)))


def bochner_time_norm(field: SpectralField, order: float) -> float:
    """H^order(0,T; L2) norm of the field via its coefficient stack."""
    return bochner_norm(field.stack, order)


def l2_h01_norm(field: SpectralField) -> float:
    """L2(0,T; H01) norm: lambda-weighted l2 aggregation."""
    total = 0.0
    for k in range(1, field.K + 1):
        lam = eigen_value(field.domain, k)
        c = field.coefficient(k)
        total += lam * h_beta_norm(c, 0.0) ** 2
    return math.sqrt(total)

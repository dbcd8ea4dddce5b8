"""Spectral solver and verification harness for the interval
time-fractional wave problem, with Riemann-Liouville calculus on uniform
grids, Mittag-Leffler kernels, singular-part subtraction and discrete
fractional Sobolev norms."""

from .errors import (
    ConfigError,
    DomainError,
    FracwaveError,
    GridTooCoarseError,
    IncompatibleGridsError,
    IncompleteDataError,
    InvalidInputError,
    InvalidOrderError,
    MlAccuracyWarning,
    OracleRangeError,
    PreconditionError,
    ResolutionError,
    UndefinedRatioError,
    UnsupportedNormError,
)
from .gammafn import gamma, rgamma
from .grids import GridFunction, TimeGrid, inner_product, l2_norm, sup_norm
from .frac_calculus import (
    FracOrder,
    PowerRule,
    check_adjoint,
    check_duality_blm,
    check_exchange,
    check_semigroup,
    default_identity_tolerance,
    power_rule,
    rl_derivative_left,
    rl_derivative_right,
    rl_integral_left,
    rl_integral_right,
)
from .mittag_leffler import (
    MlParams,
    asym_threshold,
    ml_eval,
    ml_eval_on_grid,
    ml_kernel_integral,
    ml_oracle,
)
from .sobolev import (
    CoeffStack,
    EquivalenceRatios,
    NormOrder,
    bochner_norm,
    equivalence_ratio,
    h_beta_norm,
    second_derivative_norm,
    sobolev_norm,
)
from .mode_solver import (
    ModeProblem,
    ModeSolution,
    singular_parts,
    solve_closed_form,
    solve_volterra,
    verify_ode_estimates,
)
from .galerkin import (
    IntervalDomain,
    ProblemData,
    Projection,
    SeparableForcing,
    SinePoly,
    SpectralField,
    eigen_function,
    eigen_value,
    evaluate,
    initial_slope_check,
    project,
    singular_fields,
    solve,
)
from .reports import RegularityReport, classify_trend, singular_growth_rate

__version__ = "0.1.0"

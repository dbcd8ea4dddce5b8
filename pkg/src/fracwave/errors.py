"""Exception types shared across the package."""


class FracwaveError(Exception):
    """Base class for all library errors."""


class InvalidOrderError(FracwaveError, ValueError):
    """Fractional order outside the domain of the requested operator."""


class InvalidInputError(FracwaveError, ValueError):
    """Non-finite or otherwise malformed numeric input."""


class GridTooCoarseError(FracwaveError, ValueError):
    """Grid has too few nodes for the requested stencil."""


class IncompatibleGridsError(FracwaveError, ValueError):
    """Operands live on different time grids."""


class PreconditionError(FracwaveError, ValueError):
    """A documented precondition of a check was violated."""


class IncompleteDataError(FracwaveError, ValueError):
    """Required initial-slice data is missing and estimation was disabled."""


class UndefinedRatioError(FracwaveError, ValueError):
    """Ratio undefined, e.g. norm equivalence requested for the zero function."""


class UnsupportedNormError(FracwaveError, ValueError):
    """Sobolev order outside the implemented range."""


class ResolutionError(FracwaveError, ValueError):
    """Spatial quadrature resolution too low for the requested mode count."""


class DomainError(FracwaveError, ValueError):
    """Argument outside the supported evaluation domain."""


class OracleRangeError(FracwaveError, ValueError):
    """Reference oracle asked for a value outside its convergence range."""


class ConfigError(FracwaveError, ValueError):
    """Malformed experiment configuration (usage error, exit code 2)."""


class MlAccuracyWarning(UserWarning):
    """Requested tolerance not reachable in the current evaluation regime."""

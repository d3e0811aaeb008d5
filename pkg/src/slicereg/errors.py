"""Exception types shared across the package."""


class SliceRegError(Exception):
    """Base class for all slicereg errors."""


class NonFiniteInput(SliceRegError):
    """Input data contains NaN or infinite entries."""


class BadShape(SliceRegError):
    """Array dimensions are inconsistent with the operation."""


class SingularGram(SliceRegError):
    """X^T X is numerically rank-deficient and no ridge adjustment was supplied."""


class CholeskyFailure(SliceRegError):
    """A conditional covariance block is not positive definite."""


class EvaluationError(SliceRegError):
    """A prior density evaluation produced an invalid value (NaN or +inf)."""


class ShrinkExhausted(SliceRegError):
    """The slice bracket shrank past the iteration cap without acceptance.

    Acceptance at the current angle is guaranteed in exact arithmetic, so
    hitting this signals a broken prior evaluation (e.g. -inf everywhere).
    """


class ConfigError(SliceRegError):
    """Inconsistent or invalid sampler/DGP/CLI configuration."""


class DegenerateSeries(SliceRegError):
    """A series is too short or has zero variance for autocorrelation work."""


class ZeroTruth(SliceRegError):
    """Estimation error is undefined because the true coefficients are all zero."""


class ZeroSignal(SliceRegError):
    """Response generation is undefined because beta is identically zero."""


class GridTooCoarse(SliceRegError):
    """Quadrature grid leaves non-negligible posterior mass on its boundary."""

"""Exception hierarchy.

Two branches matter for the CLI exit code: ValidationError (bad input,
exit 1) and NumericalError (solver did not converge / singular system,
exit 2).
"""


class GibbsLabError(Exception):
    pass


class ValidationError(GibbsLabError):
    pass


class NumericalError(GibbsLabError):
    pass


class RowColumnEmpty(ValidationError):
    """A transition matrix has an all-zero row or column."""


class NotPrimitive(ValidationError):
    """No power of the transition matrix up to the Wielandt bound is positive."""


class SizeGuard(ValidationError):
    """An enumeration or DP table would exceed the configured cap."""


class NoPath(ValidationError):
    """No admissible connecting word of the requested length exists."""


class TooShort(ValidationError):
    """A word is too short for the requested Birkhoff sum."""


class NonPositive(ValidationError):
    """A vector required to be strictly positive has a non-positive entry."""


class Undefined(ValidationError):
    """A ratio of cylinder measures with zero denominator."""


class NotLattice(ValidationError):
    """Observable values are not commensurable within tolerance."""


class OutOfRange(ValidationError):
    """Requested level is outside the attainable range of the mean."""


class DegenerateVariance(ValidationError):
    """Asymptotic variance is zero where a positive one is required."""


class NoConvergence(NumericalError):
    """Iteration cap reached before the residual tolerance."""


class SolveFailure(NumericalError):
    """A linear solve failed or two independent routes disagree."""

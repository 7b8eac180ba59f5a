"""Exception hierarchy shared by all szego modules.

Two families: InputError for arguments that violate a documented
precondition, NumericalError for computations whose tolerance or
consistency checks fail.  The CLI maps the first family to exit code 2
and the second to exit code 3.
"""


class SzegoError(Exception):
    """Base class for every error raised by this package."""


class InputError(SzegoError, ValueError):
    """An argument violates a documented precondition."""


class NotAnalyticError(InputError):
    """A denominator has a root on the closed unit disc."""


class NumericalError(SzegoError, ArithmeticError):
    """A numerical tolerance or consistency check failed."""


class FitError(NumericalError):
    """A least-squares rational fit left a residual above tolerance."""


class NotInnerError(NumericalError):
    """A fitted function fails the unimodularity test on the circle."""


class DegreeMismatchError(NumericalError):
    """A fitted polynomial does not have the degree theory demands."""


class SpectralInconsistencyError(NumericalError):
    """Eigenspace dimensions or memberships contradict the structure theory."""


class HypothesisViolationError(NumericalError):
    """The synthesis determinant has wrong degree or a root too close to the disc."""


class StepSizeError(NumericalError):
    """Time integration rejected: step too large or conserved quantities drifted."""


class ConsistencyError(NumericalError):
    """An internal cross-check (matrix identity, eigen residual) failed."""


class AmbiguousClusterWarning(UserWarning):
    """Eigenvalue clustering found a gap too close to the grouping tolerance."""

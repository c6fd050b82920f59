"""Exception and warning types raised by the engines."""


class BicomplexLaplaceError(Exception):
    """Base class for every error raised by this package."""


class InvalidArgumentError(BicomplexLaplaceError, ValueError):
    pass


class SingularElementError(BicomplexLaplaceError, ZeroDivisionError):
    """Raised when inverting a member of the singular set O2 (a zero divisor)."""


class PoleProximityError(BicomplexLaplaceError, ZeroDivisionError):
    pass


class InvalidImageError(BicomplexLaplaceError, ValueError):
    pass


class ConvergenceRegionError(BicomplexLaplaceError, ValueError):
    """The bicomplex argument lies outside the open region Re(xi_1), Re(xi_2) > k."""


class TruncationError(BicomplexLaplaceError, RuntimeError):
    pass


class DomainError(BicomplexLaplaceError, ValueError):
    pass


class InvalidPoleError(BicomplexLaplaceError, ValueError):
    pass


class NumericFailureError(BicomplexLaplaceError, RuntimeError):
    pass


class InversionConvergenceError(BicomplexLaplaceError, RuntimeError):
    """Bromwich refinement stalled; ``iterates`` holds the last two values."""

    def __init__(self, message, iterates=()):
        super().__init__(message)
        self.iterates = tuple(iterates)


class NonRealObjectWarning(UserWarning):
    """Recombined inversion carries non-negligible i1, i2 or i1*i2 content."""


class AmplificationWarning(UserWarning):
    """The exp(x*t) prefactor could not be kept under the configured cap."""

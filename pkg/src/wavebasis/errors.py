"""Exception hierarchy shared by all modules."""


class WaveBasisError(Exception):
    """Base class for every error raised by the package."""


class ConfigError(WaveBasisError, ValueError):
    """Invalid user input (profile description, CLI options)."""


class DomainError(WaveBasisError, ValueError):
    """Position outside the domain on which a profile is defined."""


class SingularPointError(DomainError):
    """Evaluation at the singular point of a singular potential."""


class PreconditionError(WaveBasisError, ValueError):
    """Arguments violate the documented precondition of an operation."""


class NoTurningPointError(WaveBasisError):
    """k^2 has no sign change in the searched range."""


class ForbiddenRegionError(WaveBasisError):
    """k^2 is negative in the interior of an interval that requires k real."""


class NumericalError(WaveBasisError, ArithmeticError):
    """Base class for numerical failures (CLI exit code 3)."""


class IntegrationError(NumericalError):
    """Quadrature did not converge."""


class NoRootError(NumericalError):
    """No bracket for the requested root could be found."""


class TruncationError(NumericalError):
    """Eigenfunction does not decay on the grid; widen the grid."""


class AccuracyError(NumericalError):
    """Fixed-step integration is too coarse for the requested accuracy."""

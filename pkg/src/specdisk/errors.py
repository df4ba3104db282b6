"""Exception types raised by specdisk."""


class SpecdiskError(Exception):
    """Base class for all library errors."""


class DomainError(SpecdiskError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class TailError(SpecdiskError):
    """Fourier coefficients have not decayed at the truncation order."""


class NotApplicableError(SpecdiskError):
    """The requested bound does not exist for this equation family."""


class WindowError(SpecdiskError, ValueError):
    """The disk window is narrower than the analytic tail bound."""


class DimensionError(SpecdiskError, ValueError):
    """Hill truncation is too small for the potential."""


class ConvergenceError(SpecdiskError):
    """The eigensolver failed to converge."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ConfigError(SpecdiskError):
    """A run configuration failed validation."""

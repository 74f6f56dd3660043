"""Exception types raised across the package."""


class RehdctError(Exception):
    """Base class for all package errors."""


class InvalidDimensionError(RehdctError, ValueError):
    """A dimension, index or subsystem layout is out of range."""


class InvalidStateError(RehdctError, ValueError):
    """A matrix fails the density-matrix invariants."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class RejectedSampleError(InvalidStateError):
    """A phase-perturbed state is not positive semidefinite."""


class InvalidChannelError(RehdctError, ValueError):
    """Kraus operators are malformed or incomplete, or a parameter is out of range."""


class UnsupportedDimensionError(RehdctError, ValueError):
    """The requested dimension is outside what an operation supports."""


class DegenerateOutcomeError(RehdctError, ArithmeticError):
    """A measurement outcome has (numerically) zero probability."""


class UndefinedEfficiencyError(RehdctError, ArithmeticError):
    """Efficiency requested for an input without coherence."""


class SchemaError(RehdctError, ValueError):
    """A state or channel file does not match the expected JSON layout."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class StateDependentError(RehdctError, ValueError):
    """No target-independent closed form exists for the requested case."""

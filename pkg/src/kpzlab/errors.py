"""Exception hierarchy shared by all modules."""


class KpzLabError(Exception):
    """Base class for every error raised by kpzlab."""


class DomainError(KpzLabError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class BoundExceededError(KpzLabError, ValueError):
    """An enumeration or quadrature size limit was exceeded."""


class RangeError(KpzLabError, ValueError):
    """A function argument lies outside the supported numerical range."""


class AccuracyError(KpzLabError, ArithmeticError):
    """Two routes to the same quantity disagree beyond tolerance."""


class IllConditionedError(AccuracyError):
    """A determinant or quotient cannot be evaluated reliably."""


class InstabilityError(AccuracyError):
    """A recursion lost accuracy even after precision escalation.

    ``last_trusted`` is the largest index whose value passed all monitors.
    """

    def __init__(self, message, last_trusted=None):
        super().__init__(message)
        self.last_trusted = last_trusted


class StiffnessError(AccuracyError):
    """The adaptive ODE integrator could not complete the requested span."""


class BlowUpError(AccuracyError):
    """A shooting integration left the solution branch before reaching its endpoint."""

    def __init__(self, message, last_valid=None):
        super().__init__(message)
        self.last_valid = last_valid


class ConventionError(AccuracyError):
    """A computed distribution violates CDF validity (sign or normalization convention)."""

"""Exception types shared across the package."""


class RosenauError(Exception):
    """Base class for all package-specific errors."""


class InputDomainError(RosenauError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PreconditionError(RosenauError, ValueError):
    """A documented precondition of an operation is violated."""


class IntegrabilityError(RosenauError, ArithmeticError):
    """A requested integral diverges or cannot be certified finite."""


class UncertifiedTailError(RosenauError, ArithmeticError):
    """No analytic tail bound is available at the requested accuracy."""


class InvariantViolation(RosenauError, AssertionError):
    """A computed quantity failed one of its documented invariants."""

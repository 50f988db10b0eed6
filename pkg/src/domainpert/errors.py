"""Exception hierarchy for domainpert."""


class DomainPertError(Exception):
    """Base class for all errors raised by the package."""


class DomainError(DomainPertError, ValueError):
    """A point or parameter lies outside its admissible range."""


class ExprSyntaxError(DomainPertError, ValueError):
    """Malformed expression; ``offset`` is the byte offset of the first bad token."""

    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownIdentifierError(ExprSyntaxError):
    pass


class EvaluationError(DomainPertError, ArithmeticError):
    """Raised when an expression evaluates to a non-real value."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class IntegrationError(DomainPertError, RuntimeError):
    pass


class StepSizeUnderflow(IntegrationError):
    def __init__(self, x, h):
        super().__init__(f"step size underflow at x={x!r} (h={h!r})")
        self.x = x
        self.h = h


class NonFiniteState(IntegrationError):
    def __init__(self, x):
        super().__init__(f"non-finite state at x={x!r}")
        self.x = x


class ClassificationError(DomainPertError, ValueError):
    """The endpoint is not of the kind an operation requires (e.g. not LCNO)."""


class GermError(DomainPertError, ValueError):
    pass


class EigenvalueSearchError(DomainPertError, RuntimeError):
    pass


class DegenerateError(DomainPertError, ArithmeticError):
    pass


class FitError(DomainPertError, ValueError):
    pass


class SweepError(DomainPertError, RuntimeError):
    """An eigenvalue solve failed mid-sweep; ``partial`` holds the rows computed so far."""

    def __init__(self, message, partial):
        super().__init__(message)
        self.partial = partial


class ConfigError(DomainPertError, ValueError):
    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key

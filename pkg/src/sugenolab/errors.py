"""Exception hierarchy shared by every module."""
from __future__ import annotations


class SugenoLabError(Exception):
    """Base class for all errors raised by sugenolab."""


class DomainError(SugenoLabError, ValueError):
    """An argument violates an operation's precondition."""


class CapacityError(DomainError):
    """A table does not define a nonadditive measure."""


class EmptySetNonzero(CapacityError):
    pass


class NegativeValue(CapacityError):
    pass


class NegativeWeight(CapacityError):
    pass


class MonotonicityViolation(CapacityError):
    """Raised with the offending pair ``(smaller, larger)`` of subset masks."""

    def __init__(self, smaller: int, larger: int, message: str):
        super().__init__(message)
        self.smaller = smaller
        self.larger = larger


class NegativeFunction(DomainError):
    pass


class PreconditionNotMet(DomainError):
    pass


class NotNullAdditive(PreconditionNotMet):
    pass


class NotSeparable(DomainError):
    pass


class InfiniteCase(DomainError):
    pass


class ParseError(SugenoLabError):
    pass


class CrossCheckMismatch(SugenoLabError, ArithmeticError):
    """Two independent routes to the same quantity disagree."""


class VerdictDisagreement(SugenoLabError, AssertionError):
    """Convergence verdicts that must coincide do not."""


class SoundnessViolation(SugenoLabError, AssertionError):
    """A probe landed in two spheres that a certificate claims are disjoint."""

"""Exception hierarchy shared by every module."""

from __future__ import annotations


class PursuitError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(PursuitError, ValueError):
    pass


class ParseError(InvalidInputError):
    """Malformed exchange file. Carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class StructuralError(InvalidInputError):
    """The tree of a decomposition is not a tree."""


class ResourceBudgetError(PursuitError):
    def __init__(self, message: str, budget: int | None = None) -> None:
        self.budget = budget
        super().__init__(message)


class BoundNotFoundError(PursuitError):
    def __init__(self, message: str, k_max: int | None = None) -> None:
        self.k_max = k_max
        super().__init__(message)


class UncoverableError(PursuitError):
    def __init__(self, missed) -> None:
        self.missed = tuple(sorted(missed))
        super().__init__(f"candidate pool does not cover vertices {list(self.missed)}")


class ConfigurationError(PursuitError):
    pass


class IllegalMoveError(PursuitError):
    def __init__(self, message: str, trace=None) -> None:
        self.trace = trace
        super().__init__(message)


class SoundnessError(PursuitError):
    """An exact value exceeded one of the computed upper bounds. Must never happen."""

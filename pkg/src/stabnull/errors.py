"""Exception hierarchy shared across the package."""

from __future__ import annotations


class StabNullError(Exception):
    """Base class for all package errors."""


class QubitMismatchError(StabNullError, ValueError):
    """Operands disagree on qubit count or dimension."""


class BackendError(StabNullError, ValueError):
    """Operation not supported on (or mixing) scalar backends."""


class ResourceLimitError(StabNullError):
    """A dense allocation would exceed the configured qubit cap."""


class CircuitParseError(StabNullError, ValueError):
    """Malformed circuit text. Carries 1-based line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        self.line = line
        self.column = column
        self.message = message
        loc = f"line {line}, column {column}: " if line else ""
        super().__init__(loc + message)


class InvariantViolation(StabNullError, AssertionError):
    """A theorem-backed invariant failed; indicates a tolerance or data bug."""

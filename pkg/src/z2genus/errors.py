"""Shared exception types."""

from __future__ import annotations


class Z2GenusError(Exception):
    """Base class for all toolkit errors."""


class StructuralError(Z2GenusError, ValueError):
    """Malformed or dimensionally incompatible input."""


class DomainError(Z2GenusError, ValueError):
    """Parameter outside the domain a formula is stated for."""


class CapacityError(Z2GenusError, RuntimeError):
    """A configured enumeration budget would be exceeded."""


class ParseError(StructuralError):
    """Text input that does not match a declared file format."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvariantViolation(Z2GenusError, RuntimeError):
    """A mathematically guaranteed property failed on concrete data.

    This is the loudest signal the toolkit can emit: it means either the
    implementation or the theory behind it is wrong for this input.
    """

"""Exception types shared across the package."""

from __future__ import annotations


class DimensionMismatch(ValueError):
    """Operands live in ambient spaces of different dimension."""


class NotInvertible(ValueError):
    """A matrix that must be invertible is singular."""


class PreconditionError(ValueError):
    """An input violates the documented precondition of an operation."""


class CapExceeded(RuntimeError):
    """An enumeration outgrew its configured cap.

    ``partial`` holds the number of items found before giving up.
    """

    def __init__(self, message: str, partial: int = 0):
        super().__init__(message)
        self.partial = partial


class InvariantViolation(RuntimeError):
    """A configuration that the theory rules out was observed.

    Under the documented preconditions this only happens on corrupted input.
    """


class RecoveryFailed(RuntimeError):
    """A form or structure could not be reconstructed and verified."""

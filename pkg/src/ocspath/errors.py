"""Exception types shared across the package."""

from __future__ import annotations


class NotFireable(ValueError):
    """A transition (or a step of a sequence) cannot be fired."""

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


class PreconditionError(ValueError):
    """An operation was called outside its domain."""


class ResourceError(RuntimeError):
    """A search would exceed the configured memory budget."""


class InvariantError(RuntimeError):
    """A proven bound or construction invariant failed. Always a bug."""


class Unreachable(LookupError):
    """The target configuration cannot be reached from the source."""

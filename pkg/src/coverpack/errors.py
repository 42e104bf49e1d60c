"""Shared exception types."""


class PreconditionError(ValueError):
    """An operation was called on input violating a documented precondition.

    ``reason`` is a short machine-checkable tag, the message carries detail.
    """

    def __init__(self, reason: str, message: str | None = None):
        self.reason = reason
        super().__init__(message or reason)


class ResourceCapError(RuntimeError):
    """An enumeration or search exceeded its configured resource cap."""

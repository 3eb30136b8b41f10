"""Host-level errors raised by the engine (not the interpreted language)."""

from __future__ import annotations


class SubsetSyntaxError(Exception):
    """Syntax error in tokenized/parsed source, with the offending span.

    The span is a SourceSpan when the error location is known, else None.
    """

    def __init__(self, message, span=None):
        super().__init__(message)
        self.message = message
        self.span = span

    def __str__(self):
        if self.span is not None:
            return f"{self.message} ({self.span})"
        return self.message


class StepLimitExceeded(Exception):
    """Raised (as a Failed outcome) when a configured max-step limit is hit."""

    def __init__(self, limit):
        super().__init__(f"step limit of {limit} exceeded")
        self.limit = limit


class ReplayDivergence(Exception):
    """Replaying a snapshot did not reach the recorded step count."""


class SnapshotDecodeError(Exception):
    """A snapshot URL failed to decode; `field` names the failing part."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field

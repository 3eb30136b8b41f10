"""stepboot: a single-stepping interpreter engine for a Python subset."""

from .errors import ReplayDivergence, SnapshotDecodeError, StepLimitExceeded, SubsetSyntaxError
from .session import Session, SessionError, SessionState
from .stepper import Done, Engine, Failed, NeedInput, Paused, StepEvent

__all__ = [
    "Session",
    "SessionError",
    "SessionState",
    "Engine",
    "StepEvent",
    "Done",
    "Failed",
    "Paused",
    "NeedInput",
    "SubsetSyntaxError",
    "StepLimitExceeded",
    "ReplayDivergence",
    "SnapshotDecodeError",
]

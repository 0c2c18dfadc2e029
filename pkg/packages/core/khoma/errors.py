"""
Exception hierarchy for khoma

Every error carries the exit code the CLI reports for it.
"""


class KhomaError(Exception):
    """Base class for all khoma errors"""

    exit_code: int = 1


class InputError(KhomaError, ValueError):
    """Malformed or inconsistent user input (braid text, PD code, table file, weights)"""

    exit_code = 2


class UnsupportedError(KhomaError):
    """A valid request that this combination of options cannot answer"""

    exit_code = 3


class InternalError(KhomaError, AssertionError):
    """An internal consistency check failed (d^2 != 0, non-chain map, SNF identity, ...)"""

    exit_code = 4


class NotNilpotentError(InternalError):
    """The e-action handed to the graded Smith form is not nilpotent"""


def ensure(condition: bool, message: str) -> None:
    """Raise InternalError with ``message`` unless ``condition`` holds."""
    if not condition:
        raise InternalError(message)

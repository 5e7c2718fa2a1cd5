"""Exception types shared across the simulator.

Every error carries a stable machine-readable ``code`` so the HTTP layer and
CLI can report failures without string-matching messages.
"""

from __future__ import annotations


class SimulationError(Exception):
    """Base class for all simulator errors."""

    code: str = "SIMULATION_ERROR"

    def __init__(self, message: str, *, code: str | None = None) -> None:
        super().__init__(message)
        if code is not None:
            self.code = code


class UnknownPathError(SimulationError):
    """A parameter path does not resolve against the profile."""

    code = "UNKNOWN_PATH"


class UnknownTargetError(SimulationError):
    """An event targets a student that is not in the roster."""

    code = "UNKNOWN_TARGET"


class UnknownSessionError(SimulationError):
    """A session id is not registered."""

    code = "UNKNOWN_SESSION"


class EmptyContextError(SimulationError):
    """A spin context carries no tags and the profile has no fallback node."""

    code = "EMPTY_CONTEXT"


class NoFallbackError(SimulationError):
    """Nothing matched the query and the profile has no fallback node."""

    code = "NO_FALLBACK"


class RosterSchemaError(SimulationError):
    """A roster or script document does not match the expected schema."""

    code = "SCHEMA_MISMATCH"


class RosterValidationError(SimulationError):
    """A roster parsed cleanly but one or more profiles violate invariants."""

    code = "VALIDATION"

    def __init__(self, message: str, report: object | None = None) -> None:
        super().__init__(message)
        self.report = report


class InstructionParseError(SimulationError):
    """An instruction string is not in canonical form.

    ``code`` is one of MALFORMED, UNKNOWN_ENUM, or RANGE.
    """

    code = "MALFORMED"


class PerformerError(SimulationError):
    """An external performer backend failed.

    ``code`` is one of BACKEND_UNREACHABLE, TIMEOUT, or BAD_RESPONSE.
    """

    code = "BACKEND_UNREACHABLE"

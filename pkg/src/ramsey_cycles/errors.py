"""Exception hierarchy.

Every error carries a ``details`` mapping so the CLI can serialize the
diagnosis into the run record without string parsing.
"""

from __future__ import annotations

from typing import Any


class RamseyCyclesError(Exception):
    """Base class for all structured errors raised by this package."""

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> dict[str, Any]:
        return {"error": type(self).__name__, "message": self.message, "details": self.details}


class InvalidGraphError(RamseyCyclesError):
    pass


class NotACycleError(RamseyCyclesError):
    pass


class NotAPathError(RamseyCyclesError):
    pass


class NotATreeError(RamseyCyclesError):
    pass


class NonLinearHypergraphError(RamseyCyclesError):
    pass


class BudgetExceededError(RamseyCyclesError):
    pass


class GadgetError(RamseyCyclesError):
    pass


class ParameterError(RamseyCyclesError):
    pass


class RetriesExhaustedError(RamseyCyclesError):
    pass


class ColoringError(RamseyCyclesError):
    pass


class NoAuxEdgesError(RamseyCyclesError):
    pass


class PreconditionError(RamseyCyclesError):
    pass


class SearchFailure(RamseyCyclesError):
    """A staged search stopped without reaching its target (cap trip or exhaustion)."""


class InvariantViolation(RamseyCyclesError):
    """A debug-mode invariant check failed; always indicates a bug."""


class CycleCloseError(RamseyCyclesError):
    pass


class LiftError(RamseyCyclesError):
    pass

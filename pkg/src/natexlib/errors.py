from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .lowprev import CoherenceReport


class NatexError(Exception):
    """Base class for every error raised by natexlib."""


@dataclass(frozen=True)
class Diagnostic:
    """One located, human-readable validation problem."""

    location: str
    message: str

    def __str__(self) -> str:
        return f"{self.location}: {self.message}"


class InstanceError(NatexError):
    """An instance document failed validation; no model was built."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


class SpaceMismatchError(NatexError, ValueError):
    """Operands live on different possibility spaces (or product factors)."""


class PreconditionError(NatexError, ValueError):
    """An operation precondition does not hold for the given arguments."""


class ScopeError(NatexError):
    """The request is outside what the desk-scale algorithms support."""


class QueryError(NatexError, ValueError):
    """A checker query is malformed."""


class IncoherentError(NatexError):
    """A coherence gate refused an assessment set."""

    def __init__(self, report: CoherenceReport, message: str | None = None):
        self.report = report
        super().__init__(message or f"assessment set is not coherent: {report.summary()}")


class LpWitnessError(NatexError, AssertionError):
    """A solver witness failed the exact post-solve re-check."""

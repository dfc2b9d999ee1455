from __future__ import annotations

from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from typing import Any


def to_document(value: Any) -> Any:
    """Converts a report value into JSON-compatible data, keeping rationals exact as strings."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, StrEnum):
        return str(value)
    if isinstance(value, dict):
        return {str(k): to_document(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_document(v) for v in value]
    return value


@dataclass
class Violation:
    """One failed check, described by the values that broke it."""

    property: str
    detail: dict[str, str]


@dataclass
class PropertyResult:
    """Outcome of one named property over many checked instances.

    checked counts individual checks; instances counts the random models they were drawn from.
    """

    name: str
    checked: int = 0
    violations: list[Violation] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    instances: int = 0

    @property
    def passed(self) -> bool:
        return not self.violations

    def record(self, holds: bool, **detail: Any) -> bool:
        self.checked += 1
        if not holds:
            self.violations.append(Violation(self.name, {k: str(v) for k, v in detail.items()}))
        return holds

    def merge(self, other: PropertyResult) -> PropertyResult:
        return PropertyResult(
            self.name,
            self.checked + other.checked,
            self.violations + other.violations,
            self.notes + other.notes,
            self.instances + other.instances,
        )

    def to_document(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "instances": self.instances,
            "violations": [{"property": v.property, **v.detail} for v in self.violations],
            "notes": list(self.notes),
        }


class CheckStatus(StrEnum):
    HOLDS = "holds"
    FAILS = "fails"
    HYPOTHESIS_NOT_MET = "hypothesis not met"


@dataclass(frozen=True)
class IdentityCheck:
    """Both sides of an exact identity, with any intermediate quantities."""

    name: str
    status: CheckStatus
    lhs: Fraction
    rhs: Fraction
    extra: tuple[tuple[str, Fraction], ...] = ()

    @property
    def holds(self) -> bool:
        return self.status is CheckStatus.HOLDS

    def to_document(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "status": str(self.status),
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            **{k: str(v) for k, v in self.extra},
        }


@dataclass
class SuiteReport:
    """Results of a property-suite run; merging two reports is associative."""

    seed: int
    results: list[PropertyResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def property_count(self) -> int:
        return len(self.results)

    def failed(self) -> list[PropertyResult]:
        return [r for r in self.results if not r.passed]

    def merge(self, other: SuiteReport) -> SuiteReport:
        by_name: dict[str, PropertyResult] = {r.name: r for r in self.results}
        for r in other.results:
            by_name[r.name] = by_name[r.name].merge(r) if r.name in by_name else r
        return SuiteReport(self.seed, list(by_name.values()))

    def to_document(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "passed": self.passed,
            "properties": [r.to_document() for r in self.results],
        }

    def to_text(self) -> str:
        lines = []
        for r in self.results:
            mark = "ok  " if r.passed else "FAIL"
            lines.append(f"{mark} {r.name}: {r.checked} checks, {len(r.violations)} violations")
            for v in r.violations[:5]:
                shown = ", ".join(f"{k}={val}" for k, val in v.detail.items())
                lines.append(f"       {shown}")
            for note in r.notes:
                lines.append(f"       note: {note}")
        lines.append("all properties hold" if self.passed else f"{len(self.failed())} properties failed")
        return "\n".join(lines)

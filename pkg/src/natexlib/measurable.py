from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from logtools import get_logger

from .core import ConditioningFamily, Event, Gamble, indicator
from .errors import PreconditionError, ScopeError, SpaceMismatchError
from .lplib import LinearProgram, Relation, solve

logger = get_logger(__name__)

# Largest family searched for disjoint covers of superlevel sets
MAX_FAMILY_SEARCH = 16


@dataclass(frozen=True)
class SimpleDecomposition:
    """g = c0 + Σ c_i·I_{B_i} with non-negative coefficients and family events B_i."""

    c0: Fraction
    terms: tuple[tuple[Fraction, Event], ...]

    def reconstruct(self, like: Gamble) -> Gamble:
        total = like.space.constant(self.c0)
        for c, event in self.terms:
            total = total + indicator(event) * c
        return total


@dataclass(frozen=True)
class NotMeasurable:
    reason: str


def _require_nonnegative(g: Gamble, family: ConditioningFamily) -> None:
    if family.space != g.space:
        raise SpaceMismatchError("gamble and family live on different spaces")
    if not g.is_nonnegative():
        raise PreconditionError("measurability is defined for non-negative gambles only")


def _levels(g: Gamble) -> list[Fraction]:
    return sorted(set(g.values))


def _superlevel(g: Gamble, r: Fraction) -> frozenset[str]:
    return frozenset(label for label, v in zip(g.space.labels, g.values) if v >= r)


def is_simple_measurable(g: Gamble, family: ConditioningFamily) -> SimpleDecomposition | NotMeasurable:
    """Decomposes g as a non-negative constant plus a non-negative combination of family indicators.

    The layered decomposition over superlevel sets is tried first; otherwise a linear program over
    all family events decides.

    Raises:
        PreconditionError: If g takes a negative value.
    """
    _require_nonnegative(g, family)
    levels = _levels(g)
    layered: list[tuple[Fraction, Event]] = []
    for previous, level in zip(levels, levels[1:]):
        event = Event(g.space, _superlevel(g, level))
        if event not in family:
            break
        layered.append((level - previous, event))
    else:
        return SimpleDecomposition(levels[0], tuple(layered))

    events = family.events
    lp = LinearProgram(1 + len(events))
    for x, label in enumerate(g.space.labels):
        lp.add_constraint(
            [1, *(1 if label in e.members else 0 for e in events)], Relation.EQ, g.values[x]
        )
    outcome = solve(lp)
    if not outcome.is_optimal:
        logger.debug(f"Gamble {g} is not measurable for a family of {len(events)} events")
        return NotMeasurable("no non-negative combination of family indicators reproduces the gamble")
    c0, *coefficients = outcome.witness
    terms = tuple((c, e) for c, e in zip(coefficients, events) if c)
    return SimpleDecomposition(c0, terms)


def is_measurable(g: Gamble, family: ConditioningFamily) -> bool:
    """Measurability on a finite space, where uniform limits add nothing to simple gambles."""
    return isinstance(is_simple_measurable(g, family), SimpleDecomposition)


def _exact_cover(target: frozenset[str], candidates: list[frozenset[str]], order: tuple[str, ...]) -> bool:
    if not target:
        return True
    first = next(label for label in order if label in target)
    for c in candidates:
        if first in c and c <= target:
            if _exact_cover(target - c, candidates, order):
                return True
    return False


def threshold_condition(g: Gamble, family: ConditioningFamily) -> bool:
    """Whether every superlevel set of g is a disjoint union of family events (or empty/full).

    Sufficient for measurability. Thresholds 0, the values of g and midpoints between consecutive
    values cover every superlevel set.

    Raises:
        PreconditionError: If g takes a negative value.
        ScopeError: If the family has more than MAX_FAMILY_SEARCH events.
    """
    _require_nonnegative(g, family)
    if len(family) > MAX_FAMILY_SEARCH:
        raise ScopeError(f"disjoint-union search is limited to {MAX_FAMILY_SEARCH} family events")
    levels = _levels(g)
    thresholds = {Fraction(0), *levels, *((a + b) / 2 for a, b in zip(levels, levels[1:]))}
    full = frozenset(g.space.labels)
    candidates = [e.members for e in family]
    for r in sorted(thresholds):
        level_set = _superlevel(g, r)
        if not level_set or level_set == full:
            continue
        if not _exact_cover(level_set, candidates, g.space.labels):
            return False
    return True

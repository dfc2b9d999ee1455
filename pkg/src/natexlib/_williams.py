from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from logtools import get_logger

from .core import AssessmentSet
from .errors import LpWitnessError
from .lplib import LinearProgram, Relation, Sense, Status, feasible, solve

logger = get_logger(__name__)

_ZERO = Fraction(0)


@dataclass(frozen=True)
class Term:
    """One assessment as (f - P)·I_B, with B given by outcome positions."""

    values: tuple[Fraction, ...]
    support: frozenset[int]


@dataclass(frozen=True)
class LossCertificate:
    """Weights per term (zero outside the support) and the margin of the combination."""

    weights: tuple[Fraction, ...]
    margin: Fraction
    support: tuple[int, ...]


class WilliamsCone:
    """
    Exact engine for cones generated by strict assessments.

    Each term stands for the gambles (f - μ)·I_B with μ strictly below the stated bound.
    A query conditioned on an event only uses the terms of its admissible support: the
    largest set of terms admitting strictly positive weights whose combination is strictly
    negative on the union of their events outside the conditioning event.

    Usage:
        engine = WilliamsCone.from_assessments(assessments)
        engine.loss_certificate()          # None when the set avoids partial loss
        engine.lower(values, cond)         # None when unbounded
    """

    def __init__(self, size: int, terms: Sequence[Term]):
        self.size = size
        self.terms = tuple(terms)
        self._admissible: dict[frozenset[int], tuple[int, ...]] = {}
        self._lock = threading.Lock()

    @classmethod
    def from_assessments(cls, assessments: AssessmentSet) -> WilliamsCone:
        terms = [
            Term(a.marginal_gamble().values, a.event.positions)
            for a in assessments
        ]
        return cls(len(assessments.space), terms)

    # ====================== Admissible support ======================

    def admissible(self, cond: frozenset[int]) -> tuple[int, ...]:
        """Returns the admissible support of the conditioning positions (cached)."""
        with self._lock:
            cached = self._admissible.get(cond)
        if cached is not None:
            return cached
        result = self._compute_admissible(cond)
        with self._lock:
            self._admissible[cond] = result
        return result

    def _compute_admissible(self, cond: frozenset[int]) -> tuple[int, ...]:
        current = list(range(len(self.terms)))
        rounds = 0
        while current:
            outside = sorted(set().union(*(self.terms[j].support for j in current)) - cond)
            if not outside:
                break
            reach = self._dual_support(current, outside)
            keep = [j for j in current if not (self.terms[j].support - cond) & reach]
            rounds += 1
            if len(keep) == len(current):
                break
            current = keep
        logger.debug(
            f"Admissible support of {len(cond)} positions: {len(current)} of {len(self.terms)} terms "
            f"after {rounds} rounds"
        )
        return tuple(current)

    def _dual_support(self, current: list[int], outside: list[int]) -> frozenset[int]:
        """Largest support of p >= 0 on outside with Σ_x p_x·h_j(x) >= 0 for all current terms."""
        k = len(outside)
        # variables: p_x then t_x, maximize Σ t_x with t_x <= p_x and t_x <= 1
        lp = LinearProgram(2 * k, Sense.MAXIMIZE, [0] * k + [1] * k)
        for c in range(k, 2 * k):
            lp.set_bounds(c, 0, 1)
        for j in current:
            row = [-self.terms[j].values[x] for x in outside]
            if all(v <= 0 for v in row):
                continue
            lp.add_constraint(row + [0] * k, Relation.LE, 0)
        for c in range(k):
            row = [0] * (2 * k)
            row[c] = -1
            row[k + c] = 1
            lp.add_constraint(row, Relation.LE, 0)
        outcome = solve(lp)
        return frozenset(outside[c] for c in range(k) if outcome.witness[k + c] > 0)

    # ====================== Partial loss ======================

    def loss_certificate(self) -> LossCertificate | None:
        """Returns a certificate of partial loss, or None when the terms avoid it."""
        support = self.admissible(frozenset())
        if not support:
            return None
        union = sorted(set().union(*(self.terms[j].support for j in support)))
        # weights >= 1 on the support, combination <= -1 on the union of its events
        lp = LinearProgram(len(support))
        for c in range(len(support)):
            lp.set_bounds(c, 1, None)
        for x in union:
            lp.add_constraint([self.terms[j].values[x] for j in support], Relation.LE, -1)
        outcome = feasible(lp)
        if outcome.status is not Status.FEASIBLE:
            raise LpWitnessError("admissible support of the empty event has no loss certificate")
        top = max(outcome.witness)
        scaled = dict(zip(support, (w / top for w in outcome.witness)))
        weights = tuple(scaled.get(j, _ZERO) for j in range(len(self.terms)))
        return LossCertificate(weights, self.margin(weights), support)

    def margin(self, weights: Sequence[Fraction]) -> Fraction:
        """min over the union of weighted events of -g/w, with g = Σ w_j h_j and w = Σ w_j I_{B_j}."""
        best: Fraction | None = None
        for x in range(self.size):
            mass = sum((w for w, t in zip(weights, self.terms) if w and x in t.support), _ZERO)
            if not mass:
                continue
            g = sum((w * t.values[x] for w, t in zip(weights, self.terms) if w), _ZERO)
            ratio = -g / mass
            if best is None or ratio < best:
                best = ratio
        return best if best is not None else _ZERO

    # ====================== Values ======================

    def lower(self, values: Sequence[Fraction], cond: frozenset[int]) -> Fraction | None:
        """Largest μ with (f - μ)·I_cond in the strict cone's closure on the admissible support.

        Returns None when the program is unbounded.
        """
        restricted = [values[x] for x in sorted(cond)]
        low = min(restricted)
        if all(v == low for v in restricted):
            return low
        support = self.admissible(cond)
        lp = LinearProgram(1 + len(support), Sense.MAXIMIZE, [1] + [0] * len(support))
        lp.set_bounds(0, low, None)
        for x in range(self.size):
            coeffs = [self.terms[j].values[x] for j in support]
            if x in cond:
                lp.add_constraint([1, *coeffs], Relation.LE, values[x])
            elif any(coeffs):
                lp.add_constraint([0, *coeffs], Relation.LE, 0)
        outcome = solve(lp)
        if outcome.status is Status.UNBOUNDED:
            return None
        return outcome.value

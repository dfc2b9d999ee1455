from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from logtools import get_logger

from .core import Event, Gamble, Space
from .errors import SpaceMismatchError
from .lplib import LinearProgram, Relation, Sense, Status, solve

logger = get_logger(__name__)


@dataclass(frozen=True)
class ConeSpec:
    """The set of desirable gambles generated by finitely many gambles and the positive orthant.

    Represents {Σ λ_i a_i + h : λ >= 0, h >= 0, (λ, h) != 0}.
    """

    space: Space
    generators: tuple[Gamble, ...] = ()

    def __post_init__(self):
        for g in self.generators:
            if g.space != self.space:
                raise SpaceMismatchError("cone generator lives on a different space")

    @property
    def active(self) -> tuple[int, ...]:
        """Indices of generators not absorbed by the orthant."""
        return tuple(k for k, g in enumerate(self.generators) if not g.is_nonnegative())

    def with_generators(self, extra: Iterable[Gamble]) -> ConeSpec:
        return natex_cone([*self.generators, *extra], self.space)


@dataclass(frozen=True)
class MembershipReport:
    """Outcome of a membership query.

    When member, coefficients (one per cone generator) and slack satisfy
    Σ coefficients_i·a_i + slack = f exactly. Otherwise separating is a mass function p with
    E_p(a_i) >= 0 for every generator and E_p(f) < 0 (for f = 0: E_p(a_i) > 0).
    """

    member: bool
    coefficients: tuple[Fraction, ...] | None = None
    slack: Gamble | None = None
    separating: tuple[Fraction, ...] | None = None


@dataclass(frozen=True)
class LossReport:
    """Partial-loss verdict with its certificate weights (one per generator or assessment)."""

    avoids_partial_loss: bool
    weights: tuple[Fraction, ...] | None = None
    margin: Fraction | None = None


def _scaling_key(g: Gamble) -> tuple[Fraction, ...]:
    top = max(abs(v) for v in g.values)
    return tuple(v / top for v in g.values)


def natex_cone(A: Iterable[Gamble], space: Space) -> ConeSpec:
    """Builds the cone E(A): zero generators dropped, positive rescalings of one generator merged.

    Raises:
        SpaceMismatchError: If a gamble lives on another space.
    """
    kept: dict[tuple[Fraction, ...], Gamble] = {}
    for g in A:
        if g.space != space:
            raise SpaceMismatchError("generator lives on a different space than the cone")
        if g.is_zero():
            continue
        kept.setdefault(_scaling_key(g), g)
    return ConeSpec(space, tuple(kept.values()))


def _check(cone: ConeSpec, f: Gamble) -> None:
    if f.space != cone.space:
        raise SpaceMismatchError("gamble lives on a different space than the cone")


def membership(cone: ConeSpec, f: Gamble) -> MembershipReport:
    """Decides whether f belongs to the cone, with a certificate either way."""
    _check(cone, f)
    active = cone.active
    n = len(cone.space)
    lp = LinearProgram(len(active))
    for x in range(n):
        lp.add_constraint([cone.generators[k].values[x] for k in active], Relation.LE, f.values[x])
    if f.is_zero():
        lp.add_constraint([1] * len(active), Relation.EQ, 1)

    outcome = solve(lp)
    if outcome.is_optimal:
        lam = dict(zip(active, outcome.witness))
        coefficients = tuple(lam.get(k, Fraction(0)) for k in range(len(cone.generators)))
        combination = cone.space.constant(0)
        for k, c in lam.items():
            if c:
                combination = combination + cone.generators[k] * c
        return MembershipReport(True, coefficients, f - combination)
    return MembershipReport(False, separating=_separating_mass(cone, f))


def _separating_mass(cone: ConeSpec, f: Gamble) -> tuple[Fraction, ...] | None:
    n = len(cone.space)
    active = cone.active
    if f.is_zero():
        # maximize t with E_p(a_k) >= t
        lp = LinearProgram(n + 1, Sense.MAXIMIZE, [0] * n + [1])
        lp.set_bounds(n, None, 1)
        for k in active:
            lp.add_constraint([*cone.generators[k].values, -1], Relation.GE, 0)
        lp.add_constraint([1] * n + [0], Relation.EQ, 1)
        outcome = solve(lp)
        if outcome.is_optimal and outcome.value > 0:
            return outcome.witness[:n]
        return None
    lp = LinearProgram(n, Sense.MINIMIZE, f.values)
    for k in active:
        lp.add_constraint(cone.generators[k].values, Relation.GE, 0)
    lp.add_constraint([1] * n, Relation.EQ, 1)
    outcome = solve(lp)
    if outcome.is_optimal and outcome.value < 0:
        return outcome.witness
    return None


def avoids_partial_loss(cone: ConeSpec) -> LossReport:
    """Checks that no convex combination of generators is pointwise non-positive."""
    active = cone.active
    if not active:
        return LossReport(True)
    lp = LinearProgram(len(active))
    for x in range(len(cone.space)):
        lp.add_constraint([cone.generators[k].values[x] for k in active], Relation.LE, 0)
    lp.add_constraint([1] * len(active), Relation.EQ, 1)
    outcome = solve(lp)
    if outcome.status is Status.INFEASIBLE:
        return LossReport(True)
    lam = dict(zip(active, outcome.witness))
    weights = tuple(lam.get(k, Fraction(0)) for k in range(len(cone.generators)))
    combined = [
        sum((w * g.values[x] for w, g in zip(weights, cone.generators) if w), Fraction(0))
        for x in range(len(cone.space))
    ]
    logger.info(f"Cone incurs partial loss with weights {[str(w) for w in weights]}")
    return LossReport(False, weights, -max(combined))


def lower_prevision_from_cone(cone: ConeSpec, f: Gamble, B: Event | None = None) -> Fraction | float:
    """Returns sup{μ : (f - μ)·I_B in the closed cone}, or math.inf when unbounded."""
    _check(cone, f)
    B = B or cone.space.full()
    if B.space != cone.space:
        raise SpaceMismatchError("event lives on a different space than the cone")
    active = cone.active
    inside = B.positions
    low = f.min(B)
    # variables: mu, then one weight per active generator
    lp = LinearProgram(1 + len(active), Sense.MAXIMIZE, [1] + [0] * len(active))
    lp.set_bounds(0, low, None)
    for x in range(len(cone.space)):
        coeffs = [cone.generators[k].values[x] for k in active]
        if x in inside:
            lp.add_constraint([1, *coeffs], Relation.LE, f.values[x])
        elif any(coeffs):
            lp.add_constraint([0, *coeffs], Relation.LE, 0)
    outcome = solve(lp)
    if outcome.status is Status.UNBOUNDED:
        return math.inf
    return outcome.value

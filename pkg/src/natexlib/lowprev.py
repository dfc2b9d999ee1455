from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction
from functools import cached_property, lru_cache

from logtools import get_logger

from ._williams import WilliamsCone
from .cone import ConeSpec, LossReport, natex_cone
from .core import AssessmentSet, ConditionalAssessment, Event, Gamble, format_fraction, indicator
from .errors import IncoherentError, LpWitnessError, ScopeError, SpaceMismatchError
from .lplib import LinearProgram, Relation, Sense, Status, solve
from .reports import PropertyResult

logger = get_logger(__name__)

# Cap on the number of assessments checked by subset enumeration
DEFAULT_MAX_ASSESSMENTS = 10


class Verdict(StrEnum):
    COHERENT = "coherent"
    INCURS_PARTIAL_LOSS = "incurs partial loss"
    DOMINATED = "dominated assessment"


@dataclass(frozen=True)
class AssessmentDetail:
    index: int
    lower_bound: Fraction
    natural_extension: Fraction | None


@dataclass(frozen=True)
class CoherenceReport:
    """Verdict of a coherence check.

    certificate is set for INCURS_PARTIAL_LOSS; index and value for DOMINATED, where value is
    the natural extension of the dominated assessment on either route (None when unbounded).
    """

    verdict: Verdict
    size: int
    certificate: LossReport | None = None
    index: int | None = None
    value: Fraction | None = None
    details: tuple[AssessmentDetail, ...] = ()
    route: str = "cone"

    @property
    def is_coherent(self) -> bool:
        return self.verdict is Verdict.COHERENT

    def same_verdict(self, other: CoherenceReport) -> bool:
        return self.verdict is other.verdict and self.index == other.index and self.value == other.value

    def summary(self) -> str:
        if self.verdict is Verdict.COHERENT:
            return f"coherent ({self.size} assessments)"
        if self.verdict is Verdict.INCURS_PARTIAL_LOSS:
            weights = ", ".join(format_fraction(w) for w in self.certificate.weights)
            return f"incurs partial loss (weights [{weights}])"
        shown = "unbounded" if self.value is None else format_fraction(self.value)
        return f"dominated assessment #{self.index} (natural extension {shown})"


# ====================== Coherence (cone route) ======================


def check_coherence(P: AssessmentSet) -> CoherenceReport:
    """Checks Williams-coherence through the strict cone of the assessments.

    The set is coherent when it avoids partial loss and the natural extension of every assessment
    equals its stated bound.
    """
    engine = WilliamsCone.from_assessments(P)
    certificate = engine.loss_certificate()
    if certificate is not None:
        logger.info(f"Assessment set incurs partial loss on support {sorted(certificate.support)}")
        return CoherenceReport(
            Verdict.INCURS_PARTIAL_LOSS,
            len(P),
            LossReport(False, certificate.weights, certificate.margin),
        )

    details = []
    dominated: AssessmentDetail | None = None
    for j, a in enumerate(P):
        value = engine.lower(a.gamble.values, a.event.positions)
        detail = AssessmentDetail(j, a.lower_bound, value)
        details.append(detail)
        if dominated is None and (value is None or value > a.lower_bound):
            dominated = detail
    if dominated is not None:
        logger.info(f"Assessment {dominated.index} is dominated by its natural extension")
        return CoherenceReport(
            Verdict.DOMINATED,
            len(P),
            index=dominated.index,
            value=dominated.natural_extension,
            details=tuple(details),
        )
    logger.info(f"Assessment set of size {len(P)} is coherent")
    return CoherenceReport(Verdict.COHERENT, len(P), details=tuple(details))


# ====================== Coherence (direct route) ======================


def _subset_minimum(
    P: AssessmentSet, subset: tuple[int, ...], distinguished: int | None
) -> tuple[Status, Fraction | None, dict[int, Fraction]]:
    """Minimises the supremum over the union of events of the weighted net gain."""
    terms = [P[i].marginal_gamble() for i in subset]
    union = set().union(*(P[i].event.positions for i in subset))
    free = [k for k, i in enumerate(subset) if i != distinguished]
    # variables: weights of the free members, then z (free)
    n = len(free) + 1
    lp = LinearProgram(n, Sense.MINIMIZE, [0] * len(free) + [1])
    lp.set_bounds(len(free), None, None)
    for x in sorted(union):
        row = [terms[k].values[x] for k in free] + [-1]
        rhs = Fraction(0)
        if distinguished is not None:
            rhs = terms[subset.index(distinguished)].values[x]
        lp.add_constraint(row, Relation.LE, rhs)
    if distinguished is None:
        lp.add_constraint([1] * len(free) + [0], Relation.EQ, 1)
    outcome = solve(lp)
    if not outcome.is_optimal:
        return outcome.status, None, {}
    weights = {subset[k]: outcome.witness[c] for c, k in enumerate(free)}
    return Status.OPTIMAL, outcome.value, weights


def check_coherence_direct(P: AssessmentSet, max_assessments: int = DEFAULT_MAX_ASSESSMENTS) -> CoherenceReport:
    """Checks Williams-coherence by enumerating assessment subsets.

    For every subset, and every choice of a distinguished member or none, the supremum over the
    union of the subset's events of the weighted net gain is minimised. A strictly negative
    minimum without a distinguished member is a partial loss; with a distinguished member it
    dominates that assessment.

    Raises:
        ScopeError: If the set has more than max_assessments assessments.
    """
    n = len(P)
    if n > max_assessments:
        raise ScopeError(f"direct coherence check is limited to {max_assessments} assessments, got {n}")
    subsets = [s for size in range(1, n + 1) for s in itertools.combinations(range(n), size)]
    engine = WilliamsCone.from_assessments(P)

    for subset in subsets:
        status, value, weights = _subset_minimum(P, subset, None)
        if status is Status.OPTIMAL and value < 0:
            top = max(weights.values())
            scaled = tuple(weights.get(i, Fraction(0)) / top for i in range(n))
            logger.info(f"Direct check: subset {subset} incurs partial loss")
            return CoherenceReport(
                Verdict.INCURS_PARTIAL_LOSS,
                n,
                LossReport(False, scaled, engine.margin(scaled)),
                route="direct",
            )

    for d in range(n):
        for subset in subsets:
            if d not in subset:
                continue
            status, value, _ = _subset_minimum(P, subset, d)
            if status is Status.UNBOUNDED or (status is Status.OPTIMAL and value < 0):
                logger.info(f"Direct check: assessment {d} dominated within subset {subset}")
                # the subset only witnesses domination; the reported value is the full natural extension
                natex = engine.lower(P[d].gamble.values, P[d].event.positions)
                return CoherenceReport(Verdict.DOMINATED, n, index=d, value=natex, route="direct")
    return CoherenceReport(Verdict.COHERENT, n, route="direct")


# ====================== Natural extension ======================


class NaturalExtension:
    """
    The natural extension of a coherent assessment set.

    Construction runs the coherence gate once; value queries then reuse the shared cone engine.

    Usage:
        natex = NaturalExtension(assessments)
        natex.lower(f, B)
        natex.upper(f)
    """

    def __init__(self, source: AssessmentSet):
        self.source = source
        self.report = check_coherence(source)
        if not self.report.is_coherent:
            raise IncoherentError(self.report)
        self._engine = WilliamsCone.from_assessments(source)

    @cached_property
    def cone(self) -> ConeSpec:
        """The closed-bound generators (f_i - P_i)·I_{B_i}."""
        return natex_cone([a.marginal_gamble() for a in self.source], self.source.space)

    def lower(self, f: Gamble, B: Event | None = None) -> Fraction:
        if f.space != self.source.space:
            raise SpaceMismatchError("query gamble lives on a different space than the assessments")
        B = B or f.space.full()
        if B.space != f.space:
            raise SpaceMismatchError("query event lives on a different space than the assessments")
        value = self._engine.lower(f.values, B.positions)
        if value is None:
            raise LpWitnessError("natural extension of a coherent assessment set is unbounded")
        return value

    def upper(self, f: Gamble, B: Event | None = None) -> Fraction:
        return -self.lower(-f, B)

    def lower_probability(self, event: Event, B: Event | None = None) -> Fraction:
        return self.lower(indicator(event), B)

    def upper_probability(self, event: Event, B: Event | None = None) -> Fraction:
        return self.upper(indicator(event), B)


@lru_cache(maxsize=256)
def natural_extension(P: AssessmentSet) -> NaturalExtension:
    """Returns the (cached) natural extension of P.

    Raises:
        IncoherentError: If P is not coherent.
    """
    return NaturalExtension(P)


def natural_extension_value(P: AssessmentSet, f: Gamble, B: Event | None = None) -> Fraction:
    """The lower natural extension of P at f given B (B defaults to the full space).

    Raises:
        IncoherentError: If P is not coherent.
    """
    return natural_extension(P).lower(f, B)


def upper_natural_extension_value(P: AssessmentSet, f: Gamble, B: Event | None = None) -> Fraction:
    return natural_extension(P).upper(f, B)


def is_coherent_extension(P: AssessmentSet, f: Gamble, B: Event, value: Fraction) -> bool:
    """Whether adding P(f|B) = value keeps the set coherent."""
    natex = natural_extension(P)
    if not natex.lower(f, B) <= value <= natex.upper(f, B):
        return False
    try:
        extended = P.extended(ConditionalAssessment(f, B, value))
    except ValueError:
        return False
    return check_coherence(extended).is_coherent


# ====================== Lower prevision axioms ======================


@dataclass
class _AxiomRun:
    result: PropertyResult

    def expect(self, name: str, holds: bool, **detail) -> None:
        self.result.record(holds, axiom=name, **detail)


def lp_axiom_suite(P: AssessmentSet, samples: int = 50, seed: int | str = 0) -> PropertyResult:
    """Checks the lower prevision axioms of the natural extension on random queries.

    Covers boundedness, non-negative homogeneity, superadditivity, the generalised Bayes rule,
    the perturbation bound, constant additivity and lower <= upper, all as exact comparisons.
    """
    from ._sampling import random_event, random_gamble, random_rational

    rng = random.Random(seed)
    natex = natural_extension(P)
    space = P.space
    run = _AxiomRun(PropertyResult("lower prevision axioms"))
    E = natex.lower

    for _ in range(samples):
        f = random_gamble(rng, space)
        g = random_gamble(rng, space)
        A = random_event(rng, space)
        B = random_event(rng, space)
        e = E(f, B)
        shown = {"f": str(f), "B": str(B)}

        run.expect("boundedness", f.min(B) <= e <= f.max(B), **shown, value=str(e))
        lam = random_rational(rng, 0, 4)
        run.expect("homogeneity", E(f * lam, B) == lam * e, **shown, factor=str(lam))
        run.expect("superadditivity", E(f + g, B) >= e + E(g, B), **shown, g=str(g))
        c = random_rational(rng, -5, 5)
        run.expect("constant additivity", E(f + c, B) == e + c, **shown, constant=str(c))
        run.expect("lower below upper", e <= natex.upper(f, B), **shown)
        delta = random_gamble(rng, space, low=-1, high=1)
        bound = max(abs(v) for v in delta.values)
        run.expect(
            "perturbation bound", abs(E(f + delta, B) - e) <= bound, **shown, delta=str(delta)
        )
        AB = A.intersection(B)
        if AB is not None:
            inner = E(f, AB)
            gbr = E(indicator(B) * (f - inner), A)
            run.expect("generalised Bayes rule", gbr == 0, **shown, A=str(A), value=str(gbr))
    run.expect("zero gamble", E(space.constant(0), space.full()) == 0)
    return run.result

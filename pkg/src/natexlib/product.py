from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from logtools import get_logger

from ._williams import WilliamsCone
from .cone import LossReport
from .core import (
    AssessmentSet,
    ConditionalAssessment,
    ConditioningFamily,
    Event,
    Gamble,
    ProductSpace,
    cylindrical_extension,
    indicator,
)
from .errors import LpWitnessError, PreconditionError, QueryError, SpaceMismatchError
from .lowprev import NaturalExtension, natural_extension
from .reports import PropertyResult

logger = get_logger(__name__)

# Largest number of disjoint family members merged when enlarging families
MAX_UNION_PARTS = 3


@dataclass(frozen=True)
class JointModel:
    """Two coherent local models with their conditioning families.

    Construction runs both local coherence gates.

    Raises:
        IncoherentError: If a local assessment set is not coherent.
        SpaceMismatchError: If a family lives on the wrong factor.
    """

    local1: AssessmentSet
    local2: AssessmentSet
    fam1: ConditioningFamily
    fam2: ConditioningFamily

    def __post_init__(self):
        if self.fam1.space != self.local1.space or self.fam2.space != self.local2.space:
            raise SpaceMismatchError("conditioning families must live on their factor spaces")
        natural_extension(self.local1)
        natural_extension(self.local2)

    @cached_property
    def product(self) -> ProductSpace:
        return ProductSpace(self.local1.space, self.local2.space)

    def local(self, i: int) -> AssessmentSet:
        return self._pick(i, self.local1, self.local2)

    def family(self, i: int) -> ConditioningFamily:
        return self._pick(i, self.fam1, self.fam2)

    def marginal(self, i: int) -> NaturalExtension:
        return natural_extension(self.local(i))

    @staticmethod
    def _pick(i, first, second):
        if i == 1:
            return first
        if i == 2:
            return second
        raise PreconditionError(f"factor index must be 1 or 2, not {i}")

    def with_families(self, fam1: ConditioningFamily, fam2: ConditioningFamily) -> JointModel:
        return JointModel(self.local1, self.local2, fam1, fam2)

    def swapped(self) -> JointModel:
        return JointModel(self.local2, self.local1, self.fam2, self.fam1)

    @cached_property
    def lifted(self) -> AssessmentSet:
        """Each local assessment lifted to the product and conditioned on opposite family events."""
        ps = self.product
        items: list[ConditionalAssessment] = []
        for i, j in ((1, 2), (2, 1)):
            for a in self.local(i):
                f = cylindrical_extension(a.gamble, i, ps)
                for opposite in self.family(j).with_full():
                    event = ps.rectangle(a.event, opposite) if i == 1 else ps.rectangle(opposite, a.event)
                    items.append(ConditionalAssessment(f, event, a.lower_bound))
        return AssessmentSet.build(ps.space, items)

    @cached_property
    def engine(self) -> WilliamsCone:
        return WilliamsCone.from_assessments(self.lifted)


@dataclass(frozen=True)
class JointCone:
    """Finite generators of the independent product of the local cones."""

    product: ProductSpace
    generators: tuple[Gamble, ...]

    def __len__(self) -> int:
        return len(self.generators)


def build_joint_generators(jm: JointModel) -> JointCone:
    """Lifted local generators times indicators of opposite family events (and the full factor).

    Generators that are pointwise non-negative are pruned. Joint values are computed by the
    engine over the lifted assessments; this explicit list is reported by `natex product` and
    checked against the engine by generators_desirable_check.
    """
    ps = jm.product
    generators: list[Gamble] = []
    for i, j in ((1, 2), (2, 1)):
        for a in jm.local(i):
            base = cylindrical_extension(a.marginal_gamble(), i, ps)
            for opposite in jm.family(j).with_full():
                g = base * cylindrical_extension(indicator(opposite), j, ps)
                if not g.is_nonnegative():
                    generators.append(g)
    generators = list(dict.fromkeys(generators))
    logger.debug(f"Joint cone has {len(generators)} generators")
    return JointCone(ps, tuple(generators))


def _check_product(jm: JointModel, f: Gamble, B: Event | None) -> Event:
    space = jm.product.space
    if f.space != space:
        raise SpaceMismatchError("joint query gamble does not live on the product space")
    B = B or space.full()
    if B.space != space:
        raise SpaceMismatchError("joint query event does not live on the product space")
    return B


def joint_value(jm: JointModel, f: Gamble, B: Event | None = None) -> Fraction:
    """The independent natural extension of the two local models at f given B."""
    B = _check_product(jm, f, B)
    value = jm.engine.lower(f.values, B.positions)
    if value is None:
        raise LpWitnessError("independent natural extension is unbounded for coherent marginals")
    return value


def lower_upper_joint(jm: JointModel, f: Gamble, B: Event | None = None) -> tuple[Fraction, Fraction]:
    return joint_value(jm, f, B), -joint_value(jm, -f, B)


def joint_avoids_partial_loss(jm: JointModel) -> LossReport:
    """Strict partial-loss test of the joint generator set."""
    certificate = jm.engine.loss_certificate()
    if certificate is None:
        return LossReport(True)
    logger.error(f"Joint model incurs partial loss on support {sorted(certificate.support)}")
    return LossReport(False, certificate.weights, certificate.margin)


# ====================== Consistency checks ======================


@dataclass(frozen=True)
class MarginalQuery:
    """A factor-i gamble, an event B_i on factor i, and an opposite family event B_j."""

    factor: int
    gamble: Gamble
    event: Event
    opposite: Event


def independent_domain(
    pairs: Iterable[tuple[Gamble, Event]], fam_j: ConditioningFamily, i: int
) -> list[MarginalQuery]:
    """Local (gamble, event) pairs on factor i combined with every event of the opposite family."""
    return [MarginalQuery(i, f, B, opposite) for f, B in pairs for opposite in fam_j]


def _marginal_triple(jm: JointModel, q: MarginalQuery) -> tuple[Fraction, Fraction, Fraction]:
    if q.opposite not in jm.family(3 - q.factor):
        raise QueryError(f"event {q.opposite} is not in the conditioning family of factor {3 - q.factor}")
    ps = jm.product
    f = cylindrical_extension(q.gamble, q.factor, ps)
    if q.factor == 1:
        both = ps.rectangle(q.event, q.opposite)
    else:
        both = ps.rectangle(q.opposite, q.event)
    conditioned = joint_value(jm, f, both)
    plain = joint_value(jm, f, ps.cylinder(q.event, q.factor))
    local = jm.marginal(q.factor).lower(q.gamble, q.event)
    return conditioned, plain, local


def marginal_consistency_check(jm: JointModel, queries: Sequence[MarginalQuery]) -> PropertyResult:
    """Joint values conditioned on B_i ∩ B_j and on B_i both equal the local natural extension."""
    result = PropertyResult("marginal consistency")
    for q in queries:
        conditioned, plain, local = _marginal_triple(jm, q)
        result.record(
            conditioned == plain == local,
            factor=q.factor,
            gamble=q.gamble,
            event=q.event,
            opposite=q.opposite,
            conditioned=conditioned,
            unconditioned=plain,
            local=local,
        )
    return result


def independence_check(jm: JointModel, queries: Sequence[MarginalQuery]) -> PropertyResult:
    """Conditioning on an opposite family event leaves joint values unchanged."""
    result = PropertyResult("epistemic independence")
    for q in queries:
        conditioned, plain, _ = _marginal_triple(jm, q)
        result.record(
            conditioned == plain,
            factor=q.factor,
            gamble=q.gamble,
            event=q.event,
            opposite=q.opposite,
            conditioned=conditioned,
            unconditioned=plain,
        )
    return result


def generators_desirable_check(jm: JointModel) -> PropertyResult:
    """Every generator of the joint cone has a non-negative joint lower prevision."""
    result = PropertyResult("joint generators are desirable")
    for g in build_joint_generators(jm).generators:
        value = joint_value(jm, g)
        result.record(value >= 0, generator=g, value=value)
    return result


def closure_invariance_check(
    jm: JointModel, queries: Sequence[tuple[Gamble, Event | None]], max_parts: int = MAX_UNION_PARTS
) -> PropertyResult:
    """Adding disjoint unions of family members to both families leaves joint values unchanged."""
    enlarged = jm.with_families(jm.fam1.with_disjoint_unions(max_parts), jm.fam2.with_disjoint_unions(max_parts))
    result = PropertyResult("disjoint-union invariance")
    for f, B in queries:
        before, after = joint_value(jm, f, B), joint_value(enlarged, f, B)
        result.record(before == after, gamble=f, event=B or "all", original=before, enlarged=after)
    return result

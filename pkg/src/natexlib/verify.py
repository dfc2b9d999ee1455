from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable

from tqdm import tqdm

from logtools import get_logger

from . import _sampling as sampling
from .cone import avoids_partial_loss, lower_prevision_from_cone, membership, natex_cone
from .core import (
    AssessmentSet,
    ConditionalAssessment,
    ConditioningFamily,
    Event,
    Gamble,
    ProductSpace,
    Space,
    cylindrical_extension,
)
from .envelope import (
    MAX_GRID_SPACE,
    MassFunction,
    credal_vertices,
    grid_oracle_check,
    lower_envelope_value,
    p_axiom_suite,
    vertex_supports_active_constraints,
)
from .errors import PreconditionError, SpaceMismatchError
from .lowprev import (
    check_coherence,
    check_coherence_direct,
    is_coherent_extension,
    lp_axiom_suite,
    natural_extension,
)
from .lplib import LinearProgram, Relation, Sense, Status, solve
from .measurable import SimpleDecomposition, is_measurable, is_simple_measurable, threshold_condition
from .product import (
    JointModel,
    closure_invariance_check,
    generators_desirable_check,
    independent_domain,
    joint_avoids_partial_loss,
    joint_value,
    marginal_consistency_check,
)
from .reports import CheckStatus, IdentityCheck, PropertyResult, SuiteReport

logger = get_logger(__name__)


# ====================== Theorem checks ======================


def _check_factor(jm: JointModel, i: int, *gambles: Gamble) -> None:
    for g in gambles:
        if g.space != jm.product.factor(i):
            raise SpaceMismatchError(f"gamble does not live on factor {i}")


def _status(holds: bool, hypothesis: bool) -> CheckStatus:
    if not hypothesis:
        return CheckStatus.HYPOTHESIS_NOT_MET
    return CheckStatus.HOLDS if holds else CheckStatus.FAILS


def check_theorem_factadd(jm: JointModel, i: int, f: Gamble, g: Gamble, h: Gamble) -> IdentityCheck:
    """Compares the joint value of f + g·h with E_i(f + g·E_j(h)).

    g must be non-negative; when it is not measurable for the family of factor i, both sides are
    still reported, with status HYPOTHESIS_NOT_MET.

    Raises:
        PreconditionError: If g takes a negative value.
    """
    j = 3 - i
    _check_factor(jm, i, f, g)
    _check_factor(jm, j, h)
    if not g.is_nonnegative():
        raise PreconditionError("the multiplier gamble must be non-negative")
    ps = jm.product
    combined = cylindrical_extension(f, i, ps) + cylindrical_extension(g, i, ps) * cylindrical_extension(h, j, ps)
    lhs = joint_value(jm, combined)
    inner = jm.marginal(j).lower(h)
    rhs = jm.marginal(i).lower(f + g * inner)
    measurable = is_measurable(g, jm.family(i))
    if not measurable:
        logger.warning(f"Multiplier {g} is not measurable for the family of factor {i}; equality not asserted")
    return IdentityCheck(
        "factorisation with additive term", _status(lhs == rhs, measurable), lhs, rhs, (("inner", inner),)
    )


def check_factorisation(jm: JointModel, i: int, g: Gamble, h: Gamble) -> IdentityCheck:
    """Checks the product rule for g·h and its sign-split form with the upper prevision of g."""
    j = 3 - i
    _check_factor(jm, i, g)
    _check_factor(jm, j, h)
    if not g.is_nonnegative():
        raise PreconditionError("the multiplier gamble must be non-negative")
    ps = jm.product
    lhs = joint_value(jm, cylindrical_extension(g, i, ps) * cylindrical_extension(h, j, ps))
    marginal_i = jm.marginal(i)
    inner = jm.marginal(j).lower(h)
    middle = marginal_i.lower(g * inner)
    lower_g, upper_g = marginal_i.lower(g), marginal_i.upper(g)
    branches = []
    if inner >= 0:
        branches.append(lower_g * inner)
    if inner <= 0:
        branches.append(upper_g * inner)
    holds = lhs == middle and all(b == middle for b in branches)
    measurable = is_measurable(g, jm.family(i))
    return IdentityCheck(
        "factorisation",
        _status(holds, measurable),
        lhs,
        middle,
        (("inner", inner), ("sign split", branches[0])),
    )


def check_external_additivity(jm: JointModel, f: Gamble, h: Gamble) -> IdentityCheck:
    """Checks that the joint value of f(X1) + h(X2) is the sum of the marginal values."""
    _check_factor(jm, 1, f)
    _check_factor(jm, 2, h)
    ps = jm.product
    lhs = joint_value(jm, cylindrical_extension(f, 1, ps) + cylindrical_extension(h, 2, ps))
    rhs = jm.marginal(1).lower(f) + jm.marginal(2).lower(h)
    return IdentityCheck("external additivity", _status(lhs == rhs, True), lhs, rhs)


def product_expectation(p1: MassFunction, p2: MassFunction, f: Gamble) -> Fraction:
    """Expectation of a product-space gamble under the product of two mass functions."""
    ps = ProductSpace(p1.space, p2.space)
    if f.space != ps.space:
        raise SpaceMismatchError("gamble does not live on the product of the mass functions' spaces")
    total = Fraction(0)
    for a, pa in enumerate(p1.probabilities):
        for b, pb in enumerate(p2.probabilities):
            total += pa * pb * f.values[ps.flat_index(a, b)]
    return total


# ====================== Property suite ======================


@dataclass(frozen=True)
class SuiteConfig:
    """Settings of a property-suite run.

    corrupt names a property whose oracle is deliberately perturbed, to check that failures are
    attributed to the right property.
    acceptance_models sets the model count of the coherence-route and credal-envelope
    properties, which compare against independent oracles; grid_models and grid_denominator size
    the rational grid search over credal sets.
    """

    seed: int = 0
    min_space: int = 2
    max_space: int = 3
    max_assessments: int = 2
    models: int = 2
    acceptance_models: int = 2
    grid_models: int = 1
    grid_denominator: int = 6
    samples: int = 3
    workers: int = 1
    corrupt: str | None = None
    progress: bool = False
    only: tuple[str, ...] = ()

    @classmethod
    def desk_scale(cls, seed: int = 0, workers: int = 1) -> SuiteConfig:
        return cls(
            seed=seed,
            max_space=4,
            max_assessments=4,
            models=100,
            acceptance_models=200,
            grid_models=20,
            grid_denominator=12,
            samples=10,
            workers=workers,
        )


class _Context:
    def __init__(self, name: str, config: SuiteConfig):
        self.name = name
        self.config = config
        self.rng = random.Random(f"{config.seed}:{name}")
        self.corrupt = config.corrupt == name
        self.retries = 0

    def oracle(self, value: Fraction) -> Fraction:
        return value + Fraction(1, 1000) if self.corrupt else value

    def space(self, prefix: str = "x", low: int | None = None, high: int | None = None) -> Space:
        size = self.rng.randint(low or self.config.min_space, high or self.config.max_space)
        return sampling.random_space(self.rng, size, prefix)

    def coherent(self, space: Space, unconditional: bool = False) -> AssessmentSet:
        count = self.rng.randint(1, self.config.max_assessments)
        P, retries = sampling.random_assessment_set(self.rng, space, count, unconditional)
        self.retries += retries
        return P

    def joint_model(self, families: str = "random") -> JointModel:
        X1, X2 = self.space("a"), self.space("b")
        P1, P2 = self.coherent(X1), self.coherent(X2)
        if families == "all":
            fam1, fam2 = ConditioningFamily.all_subsets(X1), ConditioningFamily.all_subsets(X2)
        elif families == "empty":
            fam1, fam2 = ConditioningFamily.empty(X1), ConditioningFamily.empty(X2)
        else:
            fam1, fam2 = sampling.random_family(self.rng, X1), sampling.random_family(self.rng, X2)
        return JointModel(P1, P2, fam1, fam2)

    def product_query(self, jm: JointModel) -> tuple[Gamble, Event]:
        space = jm.product.space
        return sampling.random_gamble(self.rng, space), sampling.random_event(self.rng, space)


def _coherence_routes(ctx: _Context) -> PropertyResult:
    result = PropertyResult("coherence routes agree")
    for _ in range(max(ctx.config.models, ctx.config.acceptance_models)):
        result.instances += 1
        space = ctx.space()
        P = sampling.random_candidate_set(ctx.rng, space, ctx.rng.randint(1, min(6, ctx.config.max_assessments + 2)))
        cone_route, direct_route = check_coherence(P), check_coherence_direct(P)
        agree = cone_route.same_verdict(direct_route) and not ctx.corrupt
        result.record(agree, cone=cone_route.summary(), direct=direct_route.summary())
    return result


def _reproduces_assessments(ctx: _Context) -> PropertyResult:
    result = PropertyResult("natural extension reproduces assessments")
    for _ in range(ctx.config.models):
        space = ctx.space()
        P = ctx.coherent(space)
        natex = natural_extension(P)
        for a in P:
            value = natex.lower(a.gamble, a.event)
            result.record(value == ctx.oracle(a.lower_bound), assessment=a.describe(), value=value)

        # a consistent extra assessment can only raise the natural extension
        f, B = sampling.random_gamble(ctx.rng, space), sampling.random_event(ctx.rng, space)
        low, high = natex.lower(f, B), natex.upper(f, B)
        value = low + (high - low) * Fraction(ctx.rng.randint(0, 4), 4)
        if not is_coherent_extension(P, f, B, value):
            result.notes.append(f"extension P({f} | {B}) = {value} rejected")
            continue
        extended = natural_extension(P.extended(ConditionalAssessment(f, B, value)))
        for _ in range(ctx.config.samples):
            g, C = sampling.random_gamble(ctx.rng, space), sampling.random_event(ctx.rng, space)
            result.record(extended.lower(g, C) >= natex.lower(g, C), minimality=str(g), event=C)
    return result


def _credal_envelope(ctx: _Context) -> PropertyResult:
    result = PropertyResult("natural extension matches credal envelope")
    for _ in range(max(ctx.config.models, ctx.config.acceptance_models)):
        result.instances += 1
        space = ctx.space(high=min(ctx.config.max_space, 5))
        P = ctx.coherent(space, unconditional=True)
        natex = natural_extension(P)
        polytope = credal_vertices(P)
        result.record(vertex_supports_active_constraints(polytope), vertices=len(polytope.vertices))
        for _ in range(ctx.config.samples):
            f = sampling.random_gamble(ctx.rng, space)
            envelope = ctx.oracle(lower_envelope_value(polytope, f))
            result.record(natex.lower(f) == envelope, gamble=f, envelope=envelope)
            B = sampling.random_event(ctx.rng, space)
            if all(v.probability(B) > 0 for v in polytope.vertices):
                conditional = lower_envelope_value(polytope, f, B)
                result.record(natex.lower(f, B) == conditional, gamble=f, event=B, envelope=conditional)
    return result


def _grid_oracle(ctx: _Context) -> PropertyResult:
    result = PropertyResult("credal vertices match grid oracle")
    for _ in range(max(ctx.config.models, ctx.config.grid_models)):
        result.instances += 1
        space = ctx.space(high=min(ctx.config.max_space, MAX_GRID_SPACE))
        P = ctx.coherent(space, unconditional=True)
        run = grid_oracle_check(credal_vertices(P), ctx.config.grid_denominator)
        result = result.merge(PropertyResult(result.name, run.checked, run.violations))
    if ctx.corrupt:
        result.record(False, corrupted="oracle")
    return result

def _lower_axioms(ctx: _Context) -> PropertyResult:
    result = PropertyResult("lower prevision axioms")
    for k in range(ctx.config.models):
        P = ctx.coherent(ctx.space())
        run = lp_axiom_suite(P, ctx.config.samples, seed=f"{ctx.config.seed}:{k}")
        result = result.merge(PropertyResult(result.name, run.checked, run.violations))
    if ctx.corrupt:
        result.record(False, corrupted="oracle")
    return result


def _linear_axioms(ctx: _Context) -> PropertyResult:
    result = PropertyResult("linear prevision axioms")
    for k in range(ctx.config.models):
        space = ctx.space()
        p = MassFunction(space, sampling.random_mass(ctx.rng, space))
        run = p_axiom_suite(p, ctx.config.samples, seed=f"{ctx.config.seed}:{k}")
        result = result.merge(PropertyResult(result.name, run.checked, run.violations))
    if ctx.corrupt:
        result.record(False, corrupted="oracle")
    return result


def _cone_axioms(ctx: _Context) -> PropertyResult:
    result = PropertyResult("desirable gamble cone axioms")
    for _ in range(ctx.config.models):
        space = ctx.space()
        A = [sampling.random_gamble(ctx.rng, space) for _ in range(ctx.rng.randint(0, 3))]
        cone = natex_cone(A, space)
        coherent = avoids_partial_loss(cone).avoids_partial_loss

        positive = sampling.random_nonnegative_gamble(ctx.rng, space) + Fraction(1, 2)
        result.record(membership(cone, positive).member, check="positive gambles accepted", gamble=positive)

        f, g = sampling.random_gamble(ctx.rng, space), sampling.random_gamble(ctx.rng, space)
        f_in, g_in = membership(cone, f).member, membership(cone, g).member
        if f_in:
            result.record(membership(cone, f * 3).member, check="positive scaling", gamble=f)
        if f_in and g_in and not (f + g).is_zero():
            result.record(membership(cone, f + g).member, check="addition", f=f, g=g)
        if coherent:
            nonpositive = -sampling.random_nonnegative_gamble(ctx.rng, space)
            result.record(not membership(cone, nonpositive).member, check="non-positive rejected", gamble=nonpositive)
            result.record(not membership(cone, space.constant(0)).member, check="zero rejected")
            B = sampling.random_event(ctx.rng, space)
            value = lower_prevision_from_cone(cone, f, B)
            result.record(f.min(B) <= ctx.oracle(value) <= f.max(B), check="bounded lower prevision", value=value)

        # adding a member changes nothing; adding any gamble only enlarges the cone
        if f_in:
            bigger = cone.with_generators([f])
            result.record(membership(bigger, g).member == g_in, check="idempotence", f=f, g=g)
            B = sampling.random_event(ctx.rng, space)
            result.record(
                lower_prevision_from_cone(bigger, g, B) == lower_prevision_from_cone(cone, g, B),
                check="idempotent lower prevision",
                g=g,
            )
        extra = cone.with_generators([sampling.random_gamble(ctx.rng, space)])
        if g_in:
            result.record(membership(extra, g).member, check="monotonicity", g=g)
    return result


def _measurability(ctx: _Context) -> PropertyResult:
    result = PropertyResult("measurability")
    for _ in range(ctx.config.models * ctx.config.samples):
        space = ctx.space()
        family = sampling.random_family(ctx.rng, space)
        g = sampling.random_nonnegative_gamble(ctx.rng, space)
        verdict = is_simple_measurable(g, family)
        if isinstance(verdict, SimpleDecomposition):
            result.record(verdict.reconstruct(g) == g, check="decomposition reconstructs", gamble=g)
            h = sampling.random_nonnegative_gamble(ctx.rng, space)
            if is_measurable(h, family):
                result.record(is_measurable(g + h, family), check="closed under addition", g=g, h=h)
            result.record(is_measurable(g * 2, family), check="closed under scaling", g=g)
        threshold = threshold_condition(g, family)
        if threshold:
            result.record(
                isinstance(verdict, SimpleDecomposition) != ctx.corrupt, check="threshold implies measurable", g=g
            )
        elif isinstance(verdict, SimpleDecomposition):
            result.notes.append(f"{g} is measurable but fails the threshold condition")
        all_subsets = ConditioningFamily.all_subsets(space)
        result.record(is_measurable(g, all_subsets), check="every gamble measurable for all subsets", g=g)
    return result


def _joint_marginals(ctx: _Context) -> PropertyResult:
    result = PropertyResult("joint coherence and marginals")
    for _ in range(ctx.config.models):
        jm = ctx.joint_model()
        result.record(joint_avoids_partial_loss(jm).avoids_partial_loss, check="joint avoids partial loss")
        run = generators_desirable_check(jm)
        result = result.merge(PropertyResult(result.name, run.checked, run.violations))
        for i in (1, 2):
            space = jm.local(i).space
            pairs = [
                (sampling.random_gamble(ctx.rng, space), sampling.random_event(ctx.rng, space))
                for _ in range(ctx.config.samples)
            ]
            queries = independent_domain(pairs, jm.family(3 - i), i)
            run = marginal_consistency_check(jm, queries)
            result = result.merge(PropertyResult(result.name, run.checked, run.violations))
            for f, B in pairs:
                value = joint_value(jm, cylindrical_extension(f, i, jm.product), jm.product.cylinder(B, i))
                local = ctx.oracle(jm.marginal(i).lower(f, B))
                result.record(value == local, factor=i, gamble=f, event=B, joint=value, local=local)
    return result


def _external_additivity(ctx: _Context) -> PropertyResult:
    result = PropertyResult("external additivity")
    for k in range(ctx.config.models):
        jm = ctx.joint_model("empty" if k % 2 == 0 else "random")
        for _ in range(ctx.config.samples):
            f = sampling.random_gamble(ctx.rng, jm.local1.space)
            h = sampling.random_gamble(ctx.rng, jm.local2.space)
            check = check_external_additivity(jm, f, h)
            result.record(check.lhs == ctx.oracle(check.rhs), f=f, h=h, lhs=check.lhs, rhs=check.rhs)
    return result


def _factorisation(ctx: _Context) -> PropertyResult:
    result = PropertyResult("factorisation")
    for _ in range(ctx.config.models):
        jm = ctx.joint_model("all")
        for s in range(ctx.config.samples):
            i = ctx.rng.choice((1, 2))
            j = 3 - i
            f = sampling.random_gamble(ctx.rng, jm.local(i).space)
            g = sampling.random_nonnegative_gamble(ctx.rng, jm.local(i).space)
            h = sampling.random_gamble(ctx.rng, jm.local(j).space)
            if s == 0:
                # boundary case with zero marginal value
                h = h - jm.marginal(j).lower(h)
            full = check_theorem_factadd(jm, i, f, g, h)
            result.record(full.lhs == ctx.oracle(full.rhs), f=f, g=g, h=h, lhs=full.lhs, rhs=full.rhs)
            product_rule = check_factorisation(jm, i, g, h)
            result.record(product_rule.holds, check="sign split", g=g, h=h, lhs=product_rule.lhs)

        # without measurability the identity is only reported
        restricted = jm.with_families(ConditioningFamily.empty(jm.local1.space), jm.fam2)
        g = sampling.random_nonnegative_gamble(ctx.rng, jm.local1.space)
        h = sampling.random_gamble(ctx.rng, jm.local2.space)
        check = check_theorem_factadd(restricted, 1, jm.local1.space.constant(0), g, h)
        if check.status is CheckStatus.HYPOTHESIS_NOT_MET and check.lhs != check.rhs:
            result.notes.append(f"non-measurable {g}: {check.lhs} != {check.rhs}")
    return result


def _union_invariance(ctx: _Context) -> PropertyResult:
    result = PropertyResult("disjoint-union invariance")
    for _ in range(ctx.config.models):
        jm = ctx.joint_model()
        queries = [ctx.product_query(jm) for _ in range(ctx.config.samples)]
        run = closure_invariance_check(jm, queries)
        result = result.merge(PropertyResult(result.name, run.checked, run.violations))
    if ctx.corrupt:
        result.record(False, corrupted="oracle")
    return result


def _precise_marginals(ctx: _Context) -> PropertyResult:
    result = PropertyResult("precise marginals match product expectation")
    for _ in range(ctx.config.models):
        X1, X2 = ctx.space("a"), ctx.space("b")
        p1 = MassFunction(X1, sampling.random_mass(ctx.rng, X1))
        p2 = MassFunction(X2, sampling.random_mass(ctx.rng, X2))
        jm = JointModel(
            p1.as_assessments(),
            p2.as_assessments(),
            ConditioningFamily.all_subsets(X1),
            ConditioningFamily.all_subsets(X2),
        )
        ps = jm.product
        for _ in range(ctx.config.samples):
            i = ctx.rng.choice((1, 2))
            f = sampling.random_gamble(ctx.rng, ps.factor(i))
            g = sampling.random_nonnegative_gamble(ctx.rng, ps.factor(i))
            h = sampling.random_gamble(ctx.rng, ps.factor(3 - i))
            gamble = cylindrical_extension(f, i, ps) + cylindrical_extension(g, i, ps) * cylindrical_extension(
                h, 3 - i, ps
            )
            expected = ctx.oracle(product_expectation(p1, p2, gamble))
            value = joint_value(jm, gamble)
            result.record(value == expected, gamble=gamble, joint=value, expected=expected)

        arbitrary = sampling.random_gamble(ctx.rng, ps.space)
        value, expected = joint_value(jm, arbitrary), product_expectation(p1, p2, arbitrary)
        if value != expected:
            result.notes.append(f"arbitrary gamble {arbitrary}: joint {value}, product expectation {expected}")
    return result


def _symmetry(ctx: _Context) -> PropertyResult:
    result = PropertyResult("factor symmetry")
    for _ in range(ctx.config.models):
        jm = ctx.joint_model()
        swapped = jm.swapped()
        for _ in range(ctx.config.samples):
            f, B = ctx.product_query(jm)
            value = joint_value(jm, f, B)
            mirrored = ctx.oracle(joint_value(swapped, jm.product.transpose(f), jm.product.transpose_event(B)))
            result.record(value == mirrored, gamble=f, event=B, value=value, swapped=mirrored)
    return result


def _family_monotonicity(ctx: _Context) -> PropertyResult:
    result = PropertyResult("family monotonicity")
    for _ in range(ctx.config.models):
        jm = ctx.joint_model()
        extra1 = sampling.random_event(ctx.rng, jm.local1.space)
        extra2 = sampling.random_event(ctx.rng, jm.local2.space)
        bigger = jm.with_families(
            ConditioningFamily(jm.local1.space, (*jm.fam1.events, extra1)),
            ConditioningFamily(jm.local2.space, (*jm.fam2.events, extra2)),
        )
        for _ in range(ctx.config.samples):
            f, B = ctx.product_query(jm)
            small, large = joint_value(jm, f, B), joint_value(bigger, f, B)
            result.record(large >= ctx.oracle(small), gamble=f, event=B, original=small, enlarged=large)
    return result


def _subset_independence(ctx: _Context) -> PropertyResult:
    result = PropertyResult("value and subset independence agree")
    for _ in range(ctx.config.models):
        X1, X2 = ctx.space("a", high=min(4, ctx.config.max_space)), ctx.space("b", high=min(4, ctx.config.max_space))
        P1, P2 = ctx.coherent(X1), ctx.coherent(X2)
        singles = JointModel(P1, P2, ConditioningFamily.singletons(X1), ConditioningFamily.singletons(X2))
        subsets = singles.with_families(ConditioningFamily.all_subsets(X1), ConditioningFamily.all_subsets(X2))
        for _ in range(ctx.config.samples):
            f, B = ctx.product_query(singles)
            a, b = joint_value(singles, f, B), ctx.oracle(joint_value(subsets, f, B))
            result.record(a == b, gamble=f, event=B, singletons=a, subsets=b)
    return result


def _vacuous_product(ctx: _Context) -> PropertyResult:
    result = PropertyResult("vacuous product")
    for _ in range(ctx.config.models):
        X1, X2 = ctx.space("a"), ctx.space("b")
        jm = JointModel(
            AssessmentSet.vacuous(X1),
            AssessmentSet.vacuous(X2),
            sampling.random_family(ctx.rng, X1),
            sampling.random_family(ctx.rng, X2),
        )
        for _ in range(ctx.config.samples):
            f, B = ctx.product_query(jm)
            value = joint_value(jm, f, B)
            result.record(value == ctx.oracle(f.min(B)), gamble=f, event=B, value=value)
    return result


def _lp_duality(ctx: _Context) -> PropertyResult:
    result = PropertyResult("linear programming duality")
    for _ in range(ctx.config.models * ctx.config.samples):
        n, m = ctx.rng.randint(1, 3), ctx.rng.randint(1, 3)
        A = [[sampling.random_rational(ctx.rng, -2, 3) for _ in range(n)] for _ in range(m)]
        b = [sampling.random_rational(ctx.rng, 0, 4) for _ in range(m)]
        c = [sampling.random_rational(ctx.rng, -2, 3) for _ in range(n)]
        primal = LinearProgram(n, Sense.MAXIMIZE, c)
        for row, rhs in zip(A, b):
            primal.add_constraint(row, Relation.LE, rhs)
        dual = LinearProgram(m, Sense.MINIMIZE, b)
        for k in range(n):
            dual.add_constraint([A[r][k] for r in range(m)], Relation.GE, c[k])
        p, d = solve(primal), solve(dual)
        if p.status is Status.OPTIMAL:
            result.record(d.is_optimal and p.value == ctx.oracle(d.value), primal=p.value, dual=d.value)
        else:
            result.record(d.status is Status.INFEASIBLE, primal=p.status, dual=d.status)
    return result


PROPERTIES: dict[str, Callable[[_Context], PropertyResult]] = {
    "coherence routes agree": _coherence_routes,
    "natural extension reproduces assessments": _reproduces_assessments,
    "natural extension matches credal envelope": _credal_envelope,
    "credal vertices match grid oracle": _grid_oracle,
    "lower prevision axioms": _lower_axioms,
    "linear prevision axioms": _linear_axioms,
    "desirable gamble cone axioms": _cone_axioms,
    "measurability": _measurability,
    "joint coherence and marginals": _joint_marginals,
    "external additivity": _external_additivity,
    "factorisation": _factorisation,
    "disjoint-union invariance": _union_invariance,
    "precise marginals match product expectation": _precise_marginals,
    "factor symmetry": _symmetry,
    "family monotonicity": _family_monotonicity,
    "value and subset independence agree": _subset_independence,
    "vacuous product": _vacuous_product,
    "linear programming duality": _lp_duality,
}

# CLI property groups
PROPERTY_GROUPS: dict[str, tuple[str, ...]] = {
    "factorisation": ("factorisation", "precise marginals match product expectation"),
    "additivity": ("external additivity",),
    "marginals": ("joint coherence and marginals", "factor symmetry", "vacuous product"),
    "invariance": ("disjoint-union invariance", "family monotonicity", "value and subset independence agree"),
    "envelope": ("natural extension matches credal envelope", "credal vertices match grid oracle"),
    "axioms": (
        "lower prevision axioms",
        "linear prevision axioms",
        "desirable gamble cone axioms",
        "measurability",
        "coherence routes agree",
        "natural extension reproduces assessments",
        "linear programming duality",
    ),
}


def run_property(name: str, config: SuiteConfig) -> PropertyResult:
    """Runs one named property with its own seeded random stream."""
    ctx = _Context(name, config)
    start = time.time()
    result = PROPERTIES[name](ctx)
    if ctx.retries:
        result.notes.append(f"{ctx.retries} rejected samples")
    if result.passed:
        logger.info(f"Property '{name}' holds on {result.checked} checks ({time.time() - start:.1f}s)")
    else:
        logger.error(f"Property '{name}' violated {len(result.violations)} times")
    return result


def run_property_suite(config: SuiteConfig | None = None) -> SuiteReport:
    """Runs every property (or config.only) and collects a deterministic report."""
    config = config or SuiteConfig()
    names = list(config.only or PROPERTIES)
    unknown = [n for n in names if n not in PROPERTIES]
    if unknown:
        raise PreconditionError(f"unknown properties {unknown}")
    bar = tqdm(total=len(names), desc="properties", unit="property", disable=not config.progress)
    results: dict[str, PropertyResult] = {}
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            futures = {name: pool.submit(run_property, name, config) for name in names}
            for name, future in futures.items():
                results[name] = future.result()
                bar.update()
    else:
        for name in names:
            results[name] = run_property(name, config)
            bar.update()
    bar.close()
    return SuiteReport(config.seed, [results[name] for name in names])


def suite_for_groups(config: SuiteConfig, groups: list[str]) -> SuiteConfig:
    """Restricts a config to the properties of the named CLI groups ("all" keeps everything)."""
    if "all" in groups:
        return config
    names = tuple(dict.fromkeys(n for g in groups for n in PROPERTY_GROUPS[g]))
    return replace(config, only=names)

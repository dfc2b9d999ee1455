from __future__ import annotations

import argparse
import random
from dataclasses import replace
from typing import Any

from logtools import get_logger
from natexlib import (
    Instance,
    InstanceError,
    JointModel,
    SuiteConfig,
    check_external_additivity,
    check_factorisation,
    check_theorem_factadd,
    closure_invariance_check,
    generators_desirable_check,
    credal_vertices,
    grid_oracle_check,
    independence_check,
    independent_domain,
    joint_avoids_partial_loss,
    lower_envelope_value,
    lp_axiom_suite,
    marginal_consistency_check,
    natural_extension_value,
    run_property_suite,
    validate_instance,
)
from natexlib import _sampling as sampling
from natexlib.core import Gamble, Space
from natexlib.envelope import MAX_GRID_SPACE
from natexlib.errors import Diagnostic
from natexlib.reports import CheckStatus, PropertyResult, SuiteReport
from natexlib.verify import PROPERTIES, PROPERTY_GROUPS, suite_for_groups

from ._common import EXIT_OK, EXIT_VIOLATION, emit, parse_family, read_document

logger = get_logger(__name__)

GROUPS = (*PROPERTY_GROUPS, "all")
PAIR_GROUPS = ("factorisation", "additivity", "marginals", "invariance")


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "verify",
        parents=parents,
        help="check the independence identities and axiom suites",
        description="With no files, runs the randomized property suite. With one instance file, runs the "
        "axiom and envelope checks on it. With a pair document or two instance files, checks the "
        "identities of their independent product.",
    )
    parser.add_argument("files", nargs="*", help="instance files, or one pair document")
    parser.add_argument("--property", choices=GROUPS, default="all", help="property group to check")
    parser.add_argument("--samples", type=int, default=3, help="random gambles per model")
    parser.add_argument("--models", type=int, default=2, help="random models per property (suite only)")
    parser.add_argument("--workers", type=int, default=1, help="worker processes for the suite")
    parser.add_argument("--desk-scale", action="store_true", help="run the suite at acceptance scale")
    parser.add_argument("--fam1", help="conditioning family of the first variable (default singletons)")
    parser.add_argument("--fam2", help="conditioning family of the second variable (default singletons)")
    parser.add_argument("--corrupt", choices=sorted(PROPERTIES), help=argparse.SUPPRESS)
    parser.set_defaults(handler=run)


# ====================== Loading ======================


def load_pair(args: argparse.Namespace) -> tuple[JointModel, tuple[Instance, Instance]] | None:
    """Builds the joint model from two instance files or a pair document; None for a single instance.

    A pair document holds the two instances under "factor1" and "factor2" and may name their
    families under "fam1" and "fam2"; command-line families take precedence.
    """
    specs: dict[str, Any] = {}
    if len(args.files) == 2:
        first, second = (validate_instance(read_document(path)) for path in args.files)
    else:
        document = read_document(args.files[0])
        if not isinstance(document, dict) or "factor1" not in document:
            return None
        if "factor2" not in document:
            raise InstanceError([Diagnostic(args.files[0], "a pair document needs factor1 and factor2")])
        first, second = validate_instance(document["factor1"]), validate_instance(document["factor2"])
        specs = document
    fam1 = args.fam1 or specs.get("fam1", "singletons")
    fam2 = args.fam2 or specs.get("fam2", "singletons")
    jm = JointModel(
        first.assessments,
        second.assessments,
        parse_family(fam1, first.space, first.families),
        parse_family(fam2, second.space, second.families),
    )
    return jm, (first, second)


def sample_gambles(
    rng: random.Random, space: Space, named: list[Gamble], count: int, nonnegative: bool = False
) -> list[Gamble]:
    """The named gambles first, then seeded random ones."""
    pool = [g for g in named if g.is_nonnegative()] if nonnegative else list(named)
    draw = sampling.random_nonnegative_gamble if nonnegative else sampling.random_gamble
    return pool + [draw(rng, space) for _ in range(count)]


# ====================== Pair checks ======================


def _identity_result(name: str, checks) -> PropertyResult:
    result = PropertyResult(name)
    for check, detail in checks:
        if check.status is CheckStatus.HYPOTHESIS_NOT_MET:
            result.notes.append(f"hypothesis not met for {detail}: {check.lhs} vs {check.rhs}")
            continue
        result.record(check.holds, **detail, lhs=check.lhs, rhs=check.rhs)
    return result


def pair_checks(jm: JointModel, group: str, named: tuple[list[Gamble], list[Gamble]], seed: int, samples: int):
    rng = random.Random(f"{seed}:{group}")
    spaces = (jm.local1.space, jm.local2.space)
    results: list[PropertyResult] = []

    if group == "additivity":
        fs = sample_gambles(rng, spaces[0], named[0], samples)
        hs = sample_gambles(rng, spaces[1], named[1], samples)
        checks = [(check_external_additivity(jm, f, h), {"f": f, "h": h}) for f in fs for h in hs]
        results.append(_identity_result("external additivity", checks))

    if group == "factorisation":
        checks = []
        for i in (1, 2):
            j = 3 - i
            gs = sample_gambles(rng, spaces[i - 1], named[i - 1], samples, nonnegative=True)
            hs = sample_gambles(rng, spaces[j - 1], named[j - 1], samples)
            for g in gs:
                for h in hs:
                    f = sampling.random_gamble(rng, spaces[i - 1])
                    checks.append((check_factorisation(jm, i, g, h), {"factor": i, "g": g, "h": h}))
                    checks.append((check_theorem_factadd(jm, i, f, g, h), {"factor": i, "f": f, "g": g, "h": h}))
        results.append(_identity_result("factorisation", checks))

    if group == "marginals":
        loss = joint_avoids_partial_loss(jm)
        coherent = PropertyResult("joint avoids partial loss")
        coherent.record(loss.avoids_partial_loss, weights=list(loss.weights or ()))
        results.append(coherent)
        if loss.avoids_partial_loss:
            results.append(generators_desirable_check(jm))
        queries = []
        for i in (1, 2):
            pairs = [(g, spaces[i - 1].full()) for g in sample_gambles(rng, spaces[i - 1], named[i - 1], samples)]
            pairs += [(sampling.random_gamble(rng, spaces[i - 1]), sampling.random_event(rng, spaces[i - 1]))]
            queries += independent_domain(pairs, jm.family(3 - i), i)
        results.append(marginal_consistency_check(jm, queries))
        results.append(independence_check(jm, queries))

    if group == "invariance":
        space = jm.product.space
        queries = [(sampling.random_gamble(rng, space), sampling.random_event(rng, space)) for _ in range(samples)]
        results.append(closure_invariance_check(jm, queries))
    return results


# ====================== Single-file checks ======================


def instance_checks(instance: Instance, group: str, seed: int, samples: int) -> list[PropertyResult]:
    if group not in ("axioms", "envelope", "all"):
        raise InstanceError([Diagnostic("--property", f"{group} needs two local models")])
    results = []
    if group in ("axioms", "all"):
        results.append(lp_axiom_suite(instance.assessments, samples=samples, seed=seed))
    if group == "envelope" or (group == "all" and instance.assessments.is_unconditional()):
        rng = random.Random(f"{seed}:envelope")
        polytope = credal_vertices(instance.assessments)
        result = PropertyResult("natural extension matches credal envelope")
        for f in sample_gambles(rng, instance.space, list(instance.gambles.values()), samples):
            natex = natural_extension_value(instance.assessments, f)
            envelope = lower_envelope_value(polytope, f)
            result.record(natex == envelope, gamble=f, natural_extension=natex, envelope=envelope)
        result.notes.append(f"{len(polytope.vertices)} credal vertices")
        results.append(result)
        if len(instance.space) <= MAX_GRID_SPACE:
            results.append(grid_oracle_check(polytope))
    return results


# ====================== Command ======================


def suite_config(args: argparse.Namespace) -> SuiteConfig:
    if args.desk_scale:
        config = SuiteConfig.desk_scale(args.seed, args.workers)
    else:
        config = SuiteConfig(seed=args.seed, models=args.models, samples=args.samples, workers=args.workers)
    config = replace(config, corrupt=args.corrupt, progress=args.format == "text")
    return suite_for_groups(config, [args.property])


def run(args: argparse.Namespace) -> int:
    """Prints the suite report; exits with 4 when any property is violated."""
    if len(args.files) > 2:
        raise InstanceError([Diagnostic("files", "verify takes at most two instance files")])
    if not args.files:
        report = run_property_suite(suite_config(args))
    elif (loaded := load_pair(args)) is not None:
        jm, locals_ = loaded
        named = tuple(list(instance.gambles.values()) for instance in locals_)
        results = []
        for group in PAIR_GROUPS if args.property == "all" else (args.property,):
            if group in PAIR_GROUPS:
                results += pair_checks(jm, group, named, args.seed, args.samples)
            else:
                for instance in locals_:
                    results += instance_checks(instance, group, args.seed, args.samples)
        report = SuiteReport(args.seed, results)
    else:
        instance = validate_instance(read_document(args.files[0]))
        report = SuiteReport(args.seed, instance_checks(instance, args.property, args.seed, args.samples))

    for failed in report.failed():
        logger.error(f"Property '{failed.name}' failed {len(failed.violations)} of {failed.checked} checks")
    emit(args, report.to_document(), report.to_text())
    return EXIT_OK if report.passed else EXIT_VIOLATION

import argparse

from logtools import get_logger
from natexlib import ScopeError, SimpleDecomposition, is_simple_measurable, threshold_condition

from ._common import EXIT_OK, emit, load_instance, parse_family, parse_gamble

logger = get_logger(__name__)


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "measurable", parents=parents, help="measurability of a non-negative gamble for a family"
    )
    parser.add_argument("file", help="instance file")
    parser.add_argument("--gamble", required=True, help="gamble name or inline list")
    parser.add_argument("--family", required=True, help="singletons, all, none, algebra:<name> or a named family")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    instance = load_instance(args.file)
    gamble = parse_gamble(instance, args.gamble)
    family = parse_family(args.family, instance.space, instance.families)
    verdict = is_simple_measurable(gamble, family)
    try:
        threshold = threshold_condition(gamble, family)
    except ScopeError as exc:
        logger.warning(f"Threshold condition skipped: {exc}")
        threshold = None

    document = {"gamble": list(gamble.values), "measurable": isinstance(verdict, SimpleDecomposition),
                "threshold_condition": threshold}
    if isinstance(verdict, SimpleDecomposition):
        document["decomposition"] = {
            "c0": verdict.c0,
            "terms": [{"coefficient": c, "event": list(e.labels)} for c, e in verdict.terms],
        }
        terms = " + ".join(f"{c}·I{e}" for c, e in verdict.terms)
        text = f"measurable: {gamble} = {verdict.c0}" + (f" + {terms}" if terms else "")
    else:
        document["reason"] = verdict.reason
        text = f"not measurable: {verdict.reason}"
    shown = "not checked" if threshold is None else ("holds" if threshold else "fails")
    text += f"\nthreshold condition: {shown}"
    emit(args, document, text)
    return EXIT_OK

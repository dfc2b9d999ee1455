import argparse

from natexlib import (
    Instance,
    InstanceError,
    JointModel,
    build_joint_generators,
    joint_value,
    lower_upper_joint,
    validate_instance,
)
from natexlib.errors import Diagnostic

from ._common import EXIT_OK, emit, load_instance, parse_family, read_document, render


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "product", parents=parents, help="independent natural extension of two local models"
    )
    parser.add_argument("file1", help="instance file of the first variable")
    parser.add_argument("file2", help="instance file of the second variable")
    parser.add_argument("--fam1", default="singletons", help="conditioning family on the first variable")
    parser.add_argument("--fam2", default="singletons", help="conditioning family on the second variable")
    parser.add_argument("--query", required=True, help="query file with gambles on the product space")
    parser.add_argument("--upper", action="store_true", help="also report upper values")
    parser.add_argument("--decimal", type=int, metavar="DIGITS", help="also print a decimal rendering")
    parser.set_defaults(handler=run)


def build_joint_model(first: Instance, second: Instance, fam1: str, fam2: str) -> JointModel:
    return JointModel(
        first.assessments,
        second.assessments,
        parse_family(fam1, first.space, first.families),
        parse_family(fam2, second.space, second.families),
    )


def load_queries(path: str, jm: JointModel) -> Instance:
    """Reads a query file on the product space; its space defaults to the product labels."""
    document = read_document(path)
    if isinstance(document, dict):
        document = {"space": list(jm.product.space.labels), **document}
    queries = validate_instance(document)
    if queries.space != jm.product.space:
        raise InstanceError([Diagnostic(f"{path}.space", "query space is not the product of the two spaces")])
    return queries


def run(args: argparse.Namespace) -> int:
    jm = build_joint_model(load_instance(args.file1), load_instance(args.file2), args.fam1, args.fam2)
    queries = load_queries(args.query, jm)
    rows, lines = [], []
    for q in queries.queries:
        label = q.name or str(q.gamble)
        if args.upper:
            lower, upper = lower_upper_joint(jm, q.gamble, q.event)
            rows.append({"gamble": label, "event": list(q.event.labels), "lower": lower, "upper": upper})
            lines.append(f"{label} | {q.event}: [{render(lower, args.decimal)}, {render(upper, args.decimal)}]")
        else:
            value = joint_value(jm, q.gamble, q.event)
            rows.append({"gamble": label, "event": list(q.event.labels), "lower": value})
            lines.append(f"{label} | {q.event}: {render(value, args.decimal)}")
    document = {
        "space": list(jm.product.space.labels),
        "generators": len(build_joint_generators(jm)),
        "values": rows,
    }
    emit(args, document, "\n".join(lines))
    return EXIT_OK

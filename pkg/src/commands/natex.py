import argparse

from natexlib import natural_extension_value, upper_natural_extension_value

from ._common import EXIT_OK, emit, load_instance, parse_event, parse_gamble, render


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("natex", parents=parents, help="natural extension of an assessment file")
    parser.add_argument("file", help="instance file")
    parser.add_argument("--gamble", help="gamble name or inline list such as \"[0,1]\"; default: the file's queries")
    parser.add_argument("--event", default="all", help="conditioning event: all, a,b or [\"a\",\"b\"]")
    parser.add_argument("--upper", action="store_true", help="report the conjugate upper value")
    parser.add_argument("--decimal", type=int, metavar="DIGITS", help="also print a decimal rendering")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    """Prints exact natural-extension values; incoherent input exits with 3."""
    instance = load_instance(args.file)
    evaluate = upper_natural_extension_value if args.upper else natural_extension_value
    if args.gamble is not None:
        queries = [(args.gamble, parse_gamble(instance, args.gamble), parse_event(instance.space, args.event))]
    else:
        queries = [(q.name or str(q.gamble), q.gamble, q.event) for q in instance.queries]

    rows = []
    for label, gamble, event in queries:
        value = evaluate(instance.assessments, gamble, event)
        rows.append({"gamble": label, "event": list(event.labels), "value": value})

    if not rows:
        text = "no queries"
    elif len(rows) == 1:
        text = render(rows[0]["value"], args.decimal)
    else:
        text = "\n".join(
            f"{r['gamble']} | {{{','.join(r['event'])}}}: {render(r['value'], args.decimal)}" for r in rows
        )
    emit(args, {"bound": "upper" if args.upper else "lower", "values": rows}, text)
    return EXIT_OK

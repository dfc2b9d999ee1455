import argparse
import os
import sys

from commands import COMMANDS
from commands._common import EXIT_INCOHERENT, EXIT_INPUT
from logtools import get_logger, issue_tracker, setup_logging
from natexlib import (
    IncoherentError,
    InstanceError,
    PreconditionError,
    QueryError,
    ScopeError,
    SpaceMismatchError,
    lplib,
)

logger = get_logger(__name__)

# Environment defaults
LOG_DIR = os.environ.get("NATEX_LOG_DIR", "logs")
LOG_LEVEL = os.environ.get("NATEX_LOG_LEVEL", "WARNING")


def common_options() -> argparse.ArgumentParser:
    """Options shared by every subcommand."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text", help="output rendering")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument(
        "--max-subsets",
        type=int,
        default=10,
        help="largest assessment set the subset-enumeration route accepts",
    )
    common.add_argument(
        "--float-timing", action="store_true", help="log a floating-point solve time next to each exact solve"
    )
    common.add_argument("--log-dir", default=LOG_DIR, help="directory of the JSON log file")
    common.add_argument("--log-level", default=LOG_LEVEL, help="log level (DEBUG, INFO, WARNING, ...)")
    common.add_argument("--issues-csv", metavar="PATH", help="write logged warnings and errors to a CSV file")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="natex",
        description="Exact natural extension and independent products of lower previsions.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    parents = [common_options()]
    for command in COMMANDS:
        command.register(subparsers, parents)
    return parser


def main(argv: list[str] | None = None) -> int:
    """Runs one subcommand and returns its exit code.

    Args:
        argv: Command-line arguments without the program name; defaults to sys.argv[1:].

    Returns:
        int: 0 on success, 2 for invalid input, 3 for incoherent input, 4 for a property violation.
    """
    args = build_parser().parse_args(argv)
    setup_logging(args.log_dir, "natex.log", args.log_level)
    lplib.configure(float_timing=args.float_timing)

    try:
        code = args.handler(args)
    except InstanceError as exc:
        for diagnostic in exc.diagnostics:
            print(f"error: {diagnostic}", file=sys.stderr)
        code = EXIT_INPUT
    except (QueryError, SpaceMismatchError, PreconditionError, ScopeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_INPUT
    except IncoherentError as exc:
        print(f"incoherent: {exc}", file=sys.stderr)
        code = EXIT_INCOHERENT

    if args.issues_csv:
        count = issue_tracker.write_csv(args.issues_csv)
        logger.info(f"Wrote {count} issues to {args.issues_csv}")
    return code


if __name__ == "__main__":
    sys.exit(main())

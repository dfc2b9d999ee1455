import argparse

from natexlib import CoherenceReport, check_coherence, check_coherence_direct
from logtools import get_logger

from ._common import EXIT_INCOHERENT, EXIT_OK, emit, load_instance

logger = get_logger(__name__)


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "check", parents=parents, help="check Williams-coherence of an assessment file"
    )
    parser.add_argument("file", help="instance file")
    parser.add_argument(
        "--direct",
        action="store_true",
        help="use subset enumeration instead of the cone route (capped by --max-subsets)",
    )
    parser.set_defaults(handler=run)


def report_document(report: CoherenceReport) -> dict:
    document = {
        "verdict": report.verdict,
        "size": report.size,
        "route": report.route,
        "summary": report.summary(),
    }
    if report.certificate is not None:
        document["certificate"] = {
            "weights": list(report.certificate.weights),
            "margin": report.certificate.margin,
        }
    if report.index is not None:
        document["index"] = report.index
        document["value"] = report.value
    if report.details:
        document["details"] = [
            {"index": d.index, "lower": d.lower_bound, "natural_extension": d.natural_extension}
            for d in report.details
        ]
    return document


def run(args: argparse.Namespace) -> int:
    """Prints the coherence verdict; exit 0 when coherent, 3 otherwise."""
    instance = load_instance(args.file)
    if args.direct:
        report = check_coherence_direct(instance.assessments, args.max_subsets)
    else:
        report = check_coherence(instance.assessments)
    logger.info(f"{args.file}: {report.summary()}")
    emit(args, report_document(report), report.summary())
    return EXIT_OK if report.is_coherent else EXIT_INCOHERENT

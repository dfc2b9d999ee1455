from __future__ import annotations

import argparse
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from natexlib import ConditioningFamily, Event, Gamble, Instance, InstanceError, Space, validate_instance
from natexlib.core import resolve_event, resolve_gamble
from natexlib.errors import Diagnostic
from natexlib.reports import to_document

# Exit codes
EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INCOHERENT = 3
EXIT_VIOLATION = 4


def read_document(path: str | Path) -> Any:
    """Reads a UTF-8 JSON document; unreadable or malformed files become an InstanceError."""
    try:
        with open(path, encoding="utf8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise InstanceError([Diagnostic(str(path), f"cannot read file: {exc.strerror}")]) from exc
    except json.JSONDecodeError as exc:
        raise InstanceError([Diagnostic(f"{path}:{exc.lineno}:{exc.colno}", exc.msg)]) from exc


def load_instance(path: str | Path) -> Instance:
    return validate_instance(read_document(path))


def parse_gamble(instance: Instance, raw: str) -> Gamble:
    """A gamble named in the instance, or an inline JSON list such as "[0,1]"."""
    value: Any = raw
    if raw.lstrip().startswith(("[", "{")):
        try:
            value = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise InstanceError([Diagnostic("--gamble", exc.msg)]) from exc
    return resolve_gamble(instance.space, instance.gambles, value, "--gamble")


def parse_event(space: Space, raw: str | None, where: str = "--event") -> Event:
    """"all", a comma-separated label list, or a JSON list of labels."""
    if raw is None or raw == "all":
        return space.full()
    if raw.lstrip().startswith("["):
        try:
            value = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise InstanceError([Diagnostic(where, exc.msg)]) from exc
    else:
        value = [label.strip() for label in raw.split(",") if label.strip()]
    return resolve_event(space, value, where)


def parse_family(spec: str, space: Space, families: Mapping[str, ConditioningFamily]) -> ConditioningFamily:
    """Resolves a family spec: singletons, all, none, algebra:<name> or a family named in the file."""
    if spec == "singletons":
        return ConditioningFamily.singletons(space)
    if spec == "all":
        return ConditioningFamily.all_subsets(space)
    if spec == "none":
        return ConditioningFamily.empty(space)
    if spec.startswith("algebra:"):
        name = spec.removeprefix("algebra:")
        if name not in families:
            raise InstanceError([Diagnostic("family", f"unknown family {name!r}")])
        return ConditioningFamily.algebra_from_partition(families[name].events)
    if spec in families:
        return families[spec]
    raise InstanceError([Diagnostic("family", f"unknown family {spec!r}")])


def render(value: Fraction, digits: int | None = None) -> str:
    if digits is None:
        return str(value)
    return f"{value} ({float(value):.{digits}f})"


def emit(args: argparse.Namespace, document: dict[str, Any], text: str) -> None:
    """Prints the structured document (sorted-key JSON) or the text rendering to stdout."""
    if args.format == "structured":
        print(json.dumps(to_document(document), sort_keys=True, indent=2))
    else:
        print(text)

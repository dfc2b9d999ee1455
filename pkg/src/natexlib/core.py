from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Iterator, Mapping, Sequence

from logtools import get_logger

from .errors import Diagnostic, InstanceError, PreconditionError, ScopeError, SpaceMismatchError

logger = get_logger(__name__)

# Largest space for which the "all non-empty subsets" family may be generated
MAX_ALL_SUBSETS = 12

Number = Fraction | int | str


def to_fraction(value: Any) -> Fraction:
    """Converts an int, a Fraction, or a "p/q" / decimal string to an exact Fraction.

    Floats are accepted through their shortest decimal representation, so 0.3 becomes 3/10.

    Raises:
        ValueError: If the value is not a rational literal.
    """
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
    raise ValueError(f"not a rational: {value!r}")


def format_fraction(value: Fraction) -> str:
    """Renders a Fraction as "p/q", or "p" when integral."""
    return str(value)


# ====================== Spaces, gambles, events ======================


@dataclass(frozen=True)
class Space:
    """A finite possibility space: an ordered list of distinct outcome labels."""

    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(str(label) for label in self.labels)
        if not labels:
            raise PreconditionError("a space needs at least one outcome")
        if len(set(labels)) != len(labels):
            raise PreconditionError(f"duplicate outcome labels in {labels}")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_positions", {label: k for k, label in enumerate(labels)})

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels)

    def __contains__(self, label: object) -> bool:
        return isinstance(label, str) and label in self._positions

    def index(self, label: str) -> int:
        try:
            return self._positions[label]
        except KeyError:
            raise PreconditionError(f"unknown outcome label {label!r}") from None

    # Convenience constructors

    def gamble(self, values: Sequence[Number] | Mapping[str, Number]) -> Gamble:
        """Builds a gamble from one value per outcome (in space order) or a label mapping."""
        if isinstance(values, Mapping):
            return Gamble(self, tuple(to_fraction(values.get(label, 0)) for label in self.labels))
        return Gamble(self, tuple(to_fraction(v) for v in values))

    def constant(self, value: Number) -> Gamble:
        return Gamble(self, (to_fraction(value),) * len(self))

    def event(self, members: Iterable[str]) -> Event:
        return Event(self, frozenset(members))

    def full(self) -> Event:
        return Event(self, frozenset(self.labels))

    def events(self) -> Iterator[Event]:
        """Yields every non-empty event, smallest first."""
        for size in range(1, len(self) + 1):
            for members in itertools.combinations(self.labels, size):
                yield Event(self, frozenset(members))


@dataclass(frozen=True)
class Gamble:
    """A map from the outcomes of a space to exact rational payoffs."""

    space: Space
    values: tuple[Fraction, ...]

    def __post_init__(self):
        values = tuple(Fraction(v) for v in self.values)
        if len(values) != len(self.space):
            raise PreconditionError(
                f"arity mismatch: {len(values)} values for a space of {len(self.space)} outcomes"
            )
        object.__setattr__(self, "values", values)

    def __getitem__(self, label: str) -> Fraction:
        return self.values[self.space.index(label)]

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def _other_values(self, other: Gamble | Number) -> tuple[Fraction, ...]:
        if isinstance(other, Gamble):
            if other.space != self.space:
                raise SpaceMismatchError("gambles live on different spaces")
            return other.values
        return (to_fraction(other),) * len(self.values)

    def __add__(self, other: Gamble | Number) -> Gamble:
        return Gamble(self.space, tuple(a + b for a, b in zip(self.values, self._other_values(other))))

    __radd__ = __add__

    def __sub__(self, other: Gamble | Number) -> Gamble:
        return Gamble(self.space, tuple(a - b for a, b in zip(self.values, self._other_values(other))))

    def __rsub__(self, other: Number) -> Gamble:
        return Gamble(self.space, tuple(b - a for a, b in zip(self.values, self._other_values(other))))

    def __neg__(self) -> Gamble:
        return Gamble(self.space, tuple(-a for a in self.values))

    def __mul__(self, other: Gamble | Number) -> Gamble:
        """Scales by a rational, or multiplies pointwise with another gamble."""
        return Gamble(self.space, tuple(a * b for a, b in zip(self.values, self._other_values(other))))

    __rmul__ = __mul__

    def restricted(self, event: Event | None) -> list[Fraction]:
        if event is None:
            return list(self.values)
        self._check_event(event)
        return [v for label, v in zip(self.space.labels, self.values) if label in event.members]

    def min(self, event: Event | None = None) -> Fraction:
        return min(self.restricted(event))

    def max(self, event: Event | None = None) -> Fraction:
        return max(self.restricted(event))

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for v in self.values)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def is_constant_on(self, event: Event | None = None) -> bool:
        return len(set(self.restricted(event))) == 1

    def dominates(self, other: Gamble) -> bool:
        """Pointwise self >= other."""
        return all(a >= b for a, b in zip(self.values, self._other_values(other)))

    def _check_event(self, event: Event) -> None:
        if event.space != self.space:
            raise SpaceMismatchError("gamble and event live on different spaces")

    def __str__(self) -> str:
        return "[" + ", ".join(format_fraction(v) for v in self.values) + "]"


@dataclass(frozen=True)
class Event:
    """A non-empty subset of the outcomes of a space."""

    space: Space
    members: frozenset[str]

    def __post_init__(self):
        members = frozenset(self.members)
        if not members:
            raise PreconditionError("empty conditioning event")
        unknown = sorted(m for m in members if m not in self.space)
        if unknown:
            raise PreconditionError(f"unknown outcome label(s) {unknown}")
        object.__setattr__(self, "members", members)

    @property
    def labels(self) -> tuple[str, ...]:
        """Members in space order."""
        return tuple(label for label in self.space.labels if label in self.members)

    @property
    def positions(self) -> frozenset[int]:
        return frozenset(self.space.index(label) for label in self.members)

    def __contains__(self, label: object) -> bool:
        return label in self.members

    def __len__(self) -> int:
        return len(self.members)

    def is_full(self) -> bool:
        return len(self.members) == len(self.space)

    def issubset(self, other: Event) -> bool:
        self._check(other)
        return self.members <= other.members

    def intersection(self, other: Event) -> Event | None:
        """The intersection, or None when it is empty."""
        self._check(other)
        common = self.members & other.members
        return Event(self.space, common) if common else None

    def union(self, other: Event) -> Event:
        self._check(other)
        return Event(self.space, self.members | other.members)

    def isdisjoint(self, other: Event) -> bool:
        self._check(other)
        return self.members.isdisjoint(other.members)

    def _check(self, other: Event) -> None:
        if other.space != self.space:
            raise SpaceMismatchError("events live on different spaces")

    def __str__(self) -> str:
        return "{" + ",".join(self.labels) + "}"


def indicator(event: Event) -> Gamble:
    """Returns the 0/1 gamble equal to 1 exactly on the event."""
    return Gamble(
        event.space, tuple(Fraction(1 if label in event.members else 0) for label in event.space.labels)
    )


# ====================== Assessments ======================


@dataclass(frozen=True)
class ConditionalAssessment:
    """A stated lower prevision P(f|B) >= lower_bound."""

    gamble: Gamble
    event: Event
    lower_bound: Fraction
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.event.space != self.gamble.space:
            raise SpaceMismatchError("assessment gamble and event live on different spaces")
        object.__setattr__(self, "lower_bound", to_fraction(self.lower_bound))

    @property
    def space(self) -> Space:
        return self.gamble.space

    def marginal_gamble(self) -> Gamble:
        """The gamble (f - P)·I_B whose strict versions are accepted."""
        return (self.gamble - self.lower_bound) * indicator(self.event)

    def describe(self) -> str:
        label = self.name or str(self.gamble)
        return f"P({label} | {self.event}) = {format_fraction(self.lower_bound)}"


@dataclass(frozen=True)
class AssessmentSet:
    """A conditional lower prevision on a finite domain of one space."""

    space: Space
    assessments: tuple[ConditionalAssessment, ...] = ()

    def __post_init__(self):
        assessments = tuple(self.assessments)
        seen: set[tuple[Gamble, Event]] = set()
        for a in assessments:
            if a.space != self.space:
                raise SpaceMismatchError("assessment lives on a different space than its set")
            key = (a.gamble, a.event)
            if key in seen:
                raise PreconditionError(f"duplicate assessment {a.describe()}")
            seen.add(key)
        object.__setattr__(self, "assessments", assessments)

    @classmethod
    def build(cls, space: Space, assessments: Iterable[ConditionalAssessment]) -> AssessmentSet:
        """Builds an assessment set, merging duplicates and normalising vacuous bounds.

        Duplicate (gamble, event) pairs keep the largest lower bound. Bounds below the minimum of the
        gamble on its event are raised to that minimum. Bounds above the maximum are rejected.

        Raises:
            PreconditionError: If a lower bound exceeds the maximum of its gamble on its event.
        """
        merged: dict[tuple[Gamble, Event], ConditionalAssessment] = {}
        for a in assessments:
            low, high = a.gamble.min(a.event), a.gamble.max(a.event)
            if a.lower_bound > high:
                raise PreconditionError(
                    f"lower bound exceeds maximum: {a.describe()} but max is {format_fraction(high)}"
                )
            if a.lower_bound < low:
                logger.warning(f"Normalised vacuous lower bound {a.describe()} up to {format_fraction(low)}")
                a = ConditionalAssessment(a.gamble, a.event, low, a.name)
            key = (a.gamble, a.event)
            if key in merged:
                if a.lower_bound > merged[key].lower_bound:
                    merged[key] = a
            else:
                merged[key] = a
        return cls(space, tuple(merged.values()))

    @classmethod
    def vacuous(cls, space: Space) -> AssessmentSet:
        return cls(space, ())

    def __len__(self) -> int:
        return len(self.assessments)

    def __iter__(self) -> Iterator[ConditionalAssessment]:
        return iter(self.assessments)

    def __getitem__(self, index: int) -> ConditionalAssessment:
        return self.assessments[index]

    def is_unconditional(self) -> bool:
        return all(a.event.is_full() for a in self.assessments)

    def extended(self, assessment: ConditionalAssessment) -> AssessmentSet:
        """A new set with one more assessment (merged like build)."""
        return AssessmentSet.build(self.space, (*self.assessments, assessment))


# ====================== Conditioning families ======================


@dataclass(frozen=True)
class ConditioningFamily:
    """A finite family of conditioning events on one space, without duplicates."""

    space: Space
    events: tuple[Event, ...] = ()

    def __post_init__(self):
        events = tuple(dict.fromkeys(self.events))
        for event in events:
            if event.space != self.space:
                raise SpaceMismatchError("family event lives on a different space")
        object.__setattr__(self, "events", events)

    # Presets

    @classmethod
    def empty(cls, space: Space) -> ConditioningFamily:
        return cls(space, ())

    @classmethod
    def singletons(cls, space: Space) -> ConditioningFamily:
        return cls(space, tuple(space.event([label]) for label in space.labels))

    @classmethod
    def all_subsets(cls, space: Space) -> ConditioningFamily:
        """Every non-empty event of the space.

        Raises:
            ScopeError: If the space has more than MAX_ALL_SUBSETS outcomes.
        """
        if len(space) > MAX_ALL_SUBSETS:
            raise ScopeError(
                f"the family of all subsets is limited to spaces of at most {MAX_ALL_SUBSETS} outcomes"
            )
        return cls(space, tuple(space.events()))

    @classmethod
    def algebra_from_partition(cls, partition: Sequence[Event]) -> ConditioningFamily:
        """All non-empty unions of cells of a partition.

        Raises:
            PreconditionError: If the cells do not partition the space.
        """
        if not partition:
            raise PreconditionError("a partition needs at least one cell")
        family = cls(partition[0].space, tuple(partition))
        if not family.is_partition():
            raise PreconditionError("events do not form a partition of the space")
        unions = [
            Event(family.space, frozenset().union(*(cell.members for cell in cells)))
            for size in range(1, len(partition) + 1)
            for cells in itertools.combinations(partition, size)
        ]
        return cls(family.space, tuple(unions))

    # Queries

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self) -> Iterator[Event]:
        return iter(self.events)

    def __contains__(self, event: object) -> bool:
        return event in self.events

    def is_partition(self) -> bool:
        covered: set[str] = set()
        for event in self.events:
            if not covered.isdisjoint(event.members):
                return False
            covered |= event.members
        return covered == set(self.space.labels)

    def with_disjoint_unions(self, max_parts: int) -> ConditioningFamily:
        """The family enlarged by every union of at most max_parts pairwise disjoint members."""
        extra: list[Event] = []
        for size in range(2, max_parts + 1):
            for parts in itertools.combinations(self.events, size):
                if all(a.isdisjoint(b) for a, b in itertools.combinations(parts, 2)):
                    extra.append(Event(self.space, frozenset().union(*(p.members for p in parts))))
        return ConditioningFamily(self.space, (*self.events, *extra))

    def with_full(self) -> tuple[Event, ...]:
        """The family's events preceded by the full space, without duplicates."""
        return tuple(dict.fromkeys((self.space.full(), *self.events)))


# ====================== Product spaces ======================


# backslash-escaped so that distinct pairs always get distinct labels
_PAIR_ESCAPES = str.maketrans({c: "\\" + c for c in "\\,()"})


def pair_label(a: str, b: str) -> str:
    """The product-space label of the outcome pair (a, b), e.g. "(a,c)"."""
    return f"({a.translate(_PAIR_ESCAPES)},{b.translate(_PAIR_ESCAPES)})"


@dataclass(frozen=True)
class ProductSpace:
    """The product of two factor spaces, flattened row-major on (x1, x2)."""

    factor1: Space
    factor2: Space

    def __post_init__(self):
        labels = tuple(pair_label(a, b) for a in self.factor1.labels for b in self.factor2.labels)
        object.__setattr__(self, "_space", Space(labels))

    @property
    def space(self) -> Space:
        return self._space

    def __len__(self) -> int:
        return len(self.factor1) * len(self.factor2)

    def factor(self, i: int) -> Space:
        if i == 1:
            return self.factor1
        if i == 2:
            return self.factor2
        raise PreconditionError(f"factor index must be 1 or 2, not {i}")

    def flat_index(self, i: int, j: int) -> int:
        return i * len(self.factor2) + j

    def pair(self, k: int) -> tuple[str, str]:
        i, j = divmod(k, len(self.factor2))
        return self.factor1.labels[i], self.factor2.labels[j]

    def swapped(self) -> ProductSpace:
        return ProductSpace(self.factor2, self.factor1)

    def rectangle(self, e1: Event | None, e2: Event | None) -> Event:
        """The event e1 × e2; None stands for the full factor."""
        e1 = e1 or self.factor1.full()
        e2 = e2 or self.factor2.full()
        if e1.space != self.factor1 or e2.space != self.factor2:
            raise SpaceMismatchError("rectangle sides do not match the product factors")
        members = frozenset(pair_label(a, b) for a in e1.labels for b in e2.labels)
        return Event(self.space, members)

    def cylinder(self, event: Event, i: int) -> Event:
        """The cylindrical extension of an event on factor i."""
        return self.rectangle(event, None) if i == 1 else self.rectangle(None, event)

    def product_gamble(self, g1: Gamble, g2: Gamble) -> Gamble:
        """The gamble g1(x1)·g2(x2)."""
        if g1.space != self.factor1 or g2.space != self.factor2:
            raise SpaceMismatchError("product gamble factors do not match the product space")
        return Gamble(self.space, tuple(a * b for a in g1.values for b in g2.values))

    def transpose(self, gamble: Gamble) -> Gamble:
        """The same gamble expressed on the swapped product space."""
        if gamble.space != self.space:
            raise SpaceMismatchError("gamble does not live on this product space")
        n1, n2 = len(self.factor1), len(self.factor2)
        swapped = self.swapped()
        return Gamble(
            swapped.space, tuple(gamble.values[self.flat_index(i, j)] for j in range(n2) for i in range(n1))
        )

    def transpose_event(self, event: Event) -> Event:
        if event.space != self.space:
            raise SpaceMismatchError("event does not live on this product space")
        swapped = self.swapped()
        members = set()
        for label in event.members:
            a, b = self.pair(self.space.index(label))
            members.add(pair_label(b, a))
        return Event(swapped.space, frozenset(members))


def cylindrical_extension(g: Gamble, i: int, ps: ProductSpace) -> Gamble:
    """Lifts a gamble on factor i to the product space: out(x1, x2) = g(x_i).

    Raises:
        SpaceMismatchError: If g does not live on factor i of ps.
    """
    if g.space != ps.factor(i):
        raise SpaceMismatchError(f"gamble does not live on factor {i} of the product space")
    n1, n2 = len(ps.factor1), len(ps.factor2)
    if i == 1:
        values = tuple(g.values[a] for a in range(n1) for _ in range(n2))
    else:
        values = tuple(g.values[b] for _ in range(n1) for b in range(n2))
    return Gamble(ps.space, values)


# ====================== Instance documents ======================


@dataclass(frozen=True)
class Query:
    """A (gamble, event) pair named in an instance document."""

    gamble: Gamble
    event: Event
    name: str | None = None


@dataclass(frozen=True)
class Instance:
    """A validated instance document."""

    space: Space
    gambles: Mapping[str, Gamble]
    assessments: AssessmentSet
    families: Mapping[str, ConditioningFamily]
    queries: tuple[Query, ...] = ()


class _Collector:
    def __init__(self):
        self.diagnostics: list[Diagnostic] = []

    def add(self, location: str, message: str) -> None:
        self.diagnostics.append(Diagnostic(location, message))


def _section(doc: Mapping, key: str, kind: type, out: _Collector) -> Any:
    raw = doc.get(key) or kind()
    if not isinstance(raw, kind):
        shape = "an object mapping names to entries" if kind is dict else "a list"
        out.add(key, f"{key} must be {shape}")
        return kind()
    return raw


def _parse_event(space: Space, raw: Any, where: str, out: _Collector) -> Event | None:
    if raw == "all" or raw is None:
        return space.full()
    if not isinstance(raw, list):
        out.add(where, "event must be a list of labels or \"all\"")
        return None
    if not raw:
        out.add(where, "empty conditioning event")
        return None
    unknown = [label for label in raw if label not in space]
    if unknown:
        out.add(where, f"unknown outcome label(s) {unknown}")
        return None
    return space.event(raw)


def _parse_values(space: Space, raw: Any, where: str, out: _Collector) -> Gamble | None:
    if isinstance(raw, Mapping):
        unknown = [label for label in raw if label not in space]
        if unknown:
            out.add(where, f"unknown outcome label(s) {unknown}")
            return None
        raw = [raw.get(label, 0) for label in space.labels]
    if not isinstance(raw, list):
        out.add(where, "gamble must be a list of rationals")
        return None
    if len(raw) != len(space):
        out.add(where, f"arity mismatch: {len(raw)} values for {len(space)} outcomes")
        return None
    try:
        return space.gamble([to_fraction(v) for v in raw])
    except ValueError as exc:
        out.add(where, str(exc))
        return None


def resolve_gamble(space: Space, gambles: Mapping[str, Gamble], raw: Any, where: str = "gamble") -> Gamble:
    """Resolves a gamble reference: a name from the instance or an inline value list.

    Raises:
        InstanceError: If the reference cannot be resolved.
    """
    out = _Collector()
    if isinstance(raw, str) and raw in gambles:
        return gambles[raw]
    if isinstance(raw, str):
        out.add(where, f"unknown gamble {raw!r}")
        raise InstanceError(out.diagnostics)
    gamble = _parse_values(space, raw, where, out)
    if gamble is None:
        raise InstanceError(out.diagnostics)
    return gamble


def resolve_event(space: Space, raw: Any, where: str = "event") -> Event:
    """Resolves an event given as a label list or "all".

    Raises:
        InstanceError: If the event is malformed.
    """
    out = _Collector()
    event = _parse_event(space, raw, where, out)
    if event is None:
        raise InstanceError(out.diagnostics)
    return event


def validate_instance(doc: Any) -> Instance:
    """Validates a parsed instance document into an Instance.

    The document carries `space`, `gambles`, `assessments`, `families` and `queries`; rationals are
    "p/q" strings or integers.

    Raises:
        InstanceError: With every located diagnostic found; no partial model is returned.
    """
    out = _Collector()
    if not isinstance(doc, Mapping):
        out.add("document", "instance must be a JSON object")
        raise InstanceError(out.diagnostics)

    raw_space = doc.get("space")
    if not isinstance(raw_space, list) or not raw_space:
        out.add("space", "space must be a non-empty list of labels")
        raise InstanceError(out.diagnostics)
    if len(set(map(str, raw_space))) != len(raw_space):
        out.add("space", "outcome labels must be distinct")
        raise InstanceError(out.diagnostics)
    space = Space(tuple(str(label) for label in raw_space))

    gambles: dict[str, Gamble] = {}
    for name, raw in _section(doc, "gambles", dict, out).items():
        gamble = _parse_values(space, raw, f"gambles.{name}", out)
        if gamble is not None:
            gambles[name] = gamble

    assessments: list[ConditionalAssessment] = []
    seen: dict[tuple[Gamble, Event], int] = {}
    for k, raw in enumerate(_section(doc, "assessments", list, out)):
        where = f"assessments[{k}]"
        if not isinstance(raw, Mapping) or "gamble" not in raw or "lower" not in raw:
            out.add(where, "assessment needs \"gamble\" and \"lower\"")
            continue
        ref = raw["gamble"]
        if isinstance(ref, str):
            gamble = gambles.get(ref)
            if gamble is None:
                out.add(f"{where}.gamble", f"unknown gamble {ref!r}")
        else:
            gamble = _parse_values(space, ref, f"{where}.gamble", out)
        event = _parse_event(space, raw.get("event", "all"), f"{where}.event", out)
        try:
            lower = to_fraction(raw["lower"])
        except ValueError as exc:
            out.add(f"{where}.lower", str(exc))
            continue
        if gamble is None or event is None:
            continue
        key = (gamble, event)
        if key in seen:
            out.add(where, f"duplicate assessment (same gamble and event as assessments[{seen[key]}])")
            continue
        seen[key] = k
        if lower > gamble.max(event):
            out.add(f"{where}.lower", "lower bound exceeds the maximum of the gamble on its event")
            continue
        assessments.append(
            ConditionalAssessment(gamble, event, lower, ref if isinstance(ref, str) else None)
        )

    families: dict[str, ConditioningFamily] = {}
    for name, raw in _section(doc, "families", dict, out).items():
        if not isinstance(raw, list):
            out.add(f"families.{name}", "family must be a list of events")
            continue
        events = [_parse_event(space, e, f"families.{name}[{k}]", out) for k, e in enumerate(raw)]
        if all(e is not None for e in events):
            families[name] = ConditioningFamily(space, tuple(events))

    queries: list[Query] = []
    for k, raw in enumerate(_section(doc, "queries", list, out)):
        where = f"queries[{k}]"
        if not isinstance(raw, Mapping) or "gamble" not in raw:
            out.add(where, "query needs a \"gamble\"")
            continue
        ref = raw["gamble"]
        if isinstance(ref, str):
            gamble = gambles.get(ref)
            if gamble is None:
                out.add(f"{where}.gamble", f"unknown gamble {ref!r}")
        else:
            gamble = _parse_values(space, ref, f"{where}.gamble", out)
        event = _parse_event(space, raw.get("event", "all"), f"{where}.event", out)
        if gamble is not None and event is not None:
            queries.append(Query(gamble, event, ref if isinstance(ref, str) else None))

    if out.diagnostics:
        for d in out.diagnostics:
            logger.debug(f"Instance diagnostic {d}")
        raise InstanceError(out.diagnostics)

    return Instance(
        space=space,
        gambles=gambles,
        assessments=AssessmentSet.build(space, assessments),
        families=families,
        queries=tuple(queries),
    )


def serialize_instance(instance: Instance) -> dict[str, Any]:
    """Renders an Instance back to a document accepted by validate_instance."""

    def values(g: Gamble) -> list[str]:
        return [format_fraction(v) for v in g.values]

    def event(e: Event) -> list[str] | str:
        return "all" if e.is_full() else list(e.labels)

    names = {g: name for name, g in instance.gambles.items()}

    def ref(g: Gamble) -> str | list[str]:
        return names.get(g, values(g))

    return {
        "space": list(instance.space.labels),
        "gambles": {name: values(g) for name, g in instance.gambles.items()},
        "assessments": [
            {"gamble": ref(a.gamble), "event": event(a.event), "lower": format_fraction(a.lower_bound)}
            for a in instance.assessments
        ],
        "families": {name: [list(e.labels) for e in fam] for name, fam in instance.families.items()},
        "queries": [{"gamble": ref(q.gamble), "event": event(q.event)} for q in instance.queries],
    }

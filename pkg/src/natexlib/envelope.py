from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import sympy

from logtools import get_logger

from .core import AssessmentSet, ConditionalAssessment, Event, Gamble, Space, indicator
from .errors import IncoherentError, PreconditionError, ScopeError, SpaceMismatchError
from .lplib import LinearProgram, Relation, feasible
from .reports import PropertyResult

logger = get_logger(__name__)

# Largest space handled by basis enumeration
MAX_VERTEX_SPACE = 6

_ZERO = Fraction(0)


@dataclass(frozen=True)
class MassFunction:
    """A probability mass function on a finite space."""

    space: Space
    probabilities: tuple[Fraction, ...]

    def __post_init__(self):
        probabilities = tuple(Fraction(p) for p in self.probabilities)
        if len(probabilities) != len(self.space):
            raise PreconditionError("arity mismatch between mass function and space")
        if any(p < 0 for p in probabilities):
            raise PreconditionError("probabilities must be non-negative")
        if sum(probabilities) != 1:
            raise PreconditionError("probabilities must sum to 1")
        object.__setattr__(self, "probabilities", probabilities)

    @classmethod
    def uniform(cls, space: Space) -> MassFunction:
        return cls(space, (Fraction(1, len(space)),) * len(space))

    @property
    def support(self) -> frozenset[str]:
        return frozenset(label for label, p in zip(self.space.labels, self.probabilities) if p)

    def has_full_support(self) -> bool:
        return all(self.probabilities)

    def probability(self, event: Event) -> Fraction:
        return sum((self.probabilities[x] for x in event.positions), _ZERO)

    def expectation(self, f: Gamble) -> Fraction:
        if f.space != self.space:
            raise SpaceMismatchError("gamble lives on a different space than the mass function")
        return sum((p * v for p, v in zip(self.probabilities, f.values) if p), _ZERO)

    def as_assessments(self) -> AssessmentSet:
        """The precise model as two-sided assessments P(I_x) = p(x) and P(-I_x) = -p(x)."""
        items = []
        for label, p in zip(self.space.labels, self.probabilities):
            g = indicator(self.space.event([label]))
            items.append(ConditionalAssessment(g, self.space.full(), p))
            items.append(ConditionalAssessment(-g, self.space.full(), -p))
        return AssessmentSet.build(self.space, items)

    def __str__(self) -> str:
        return "(" + ", ".join(str(p) for p in self.probabilities) + ")"


@dataclass(frozen=True)
class CredalPolytope:
    """The mass functions dominating an unconditional assessment set, by their vertices."""

    source: AssessmentSet
    vertices: tuple[MassFunction, ...]


def _rational(value: Fraction | int) -> sympy.Rational:
    value = Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


def _rational_matrix(rows: Sequence[Sequence[Fraction]]) -> sympy.Matrix:
    return sympy.Matrix([[_rational(v) for v in row] for row in rows])


def _to_fraction(value: sympy.Rational) -> Fraction:
    return Fraction(int(value.p), int(value.q))


def _solve_square(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Exact solution of a square system; None when it is singular."""
    A = _rational_matrix(matrix)
    if A.det() == 0:
        return None
    solution = A.LUsolve(_rational_matrix([[b] for b in rhs]))
    return [_to_fraction(v) for v in solution]


def _constraint_rows(P: AssessmentSet) -> list[tuple[list[Fraction], Fraction]]:
    """The inequalities a·p >= b of the credal set: non-negativity, then one row per assessment."""
    n = len(P.space)
    rows = [([Fraction(int(x == y)) for y in range(n)], _ZERO) for x in range(n)]
    rows += [(list(a.gamble.values), a.lower_bound) for a in P]
    return rows


def _satisfies(rows: list[tuple[list[Fraction], Fraction]], p: Sequence[Fraction]) -> bool:
    return all(sum((c * v for c, v in zip(row, p)), _ZERO) >= b for row, b in rows)


def credal_vertices(P: AssessmentSet) -> CredalPolytope:
    """Enumerates the vertices of {p >= 0, Σp = 1, E_p(f_i) >= P_i} by basis enumeration.

    Raises:
        ScopeError: If an assessment is conditional or the space is too large.
        IncoherentError: If P is not coherent.
    """
    from .lowprev import check_coherence

    if not P.is_unconditional():
        raise ScopeError("credal vertices need unconditional assessments")
    n = len(P.space)
    if n > MAX_VERTEX_SPACE:
        raise ScopeError(f"vertex enumeration is limited to spaces of at most {MAX_VERTEX_SPACE} outcomes")
    report = check_coherence(P)
    if not report.is_coherent:
        raise IncoherentError(report)

    constraints = _constraint_rows(P)

    found: dict[tuple[Fraction, ...], None] = {}
    for basis in itertools.combinations(range(len(constraints)), n - 1):
        matrix = [constraints[k][0] for k in basis] + [[Fraction(1)] * n]
        rhs = [constraints[k][1] for k in basis] + [Fraction(1)]
        p = _solve_square(matrix, rhs)
        if p is None:
            continue
        if _satisfies(constraints, p):
            found[tuple(p)] = None
    vertices = tuple(MassFunction(P.space, p) for p in sorted(found, reverse=True))
    logger.debug(f"Credal set of {len(P)} assessments has {len(vertices)} vertices")
    return CredalPolytope(P, vertices)


def lower_envelope_value(cp: CredalPolytope, f: Gamble, B: Event | None = None) -> Fraction:
    """Minimum over vertices of the conditional expectation of f given B.

    Raises:
        ScopeError: If some vertex gives B zero mass.
    """
    B = B or f.space.full()
    values = []
    for vertex in cp.vertices:
        mass = vertex.probability(B)
        if not mass:
            raise ScopeError(f"vertex {vertex} gives the conditioning event {B} zero mass")
        values.append(vertex.expectation(f * indicator(B)) / mass)
    return min(values)


class LinearPrevision:
    """The conditional prevision P(f|B) = Σ_{x in B} p(x)f(x) / p(B) of a mass function."""

    def __init__(self, p: MassFunction):
        self.mass = p

    def __call__(self, f: Gamble, B: Event | None = None) -> Fraction:
        B = B or f.space.full()
        weight = self.mass.probability(B)
        if not weight:
            raise PreconditionError(f"conditioning event {B} has zero probability")
        return self.mass.expectation(f * indicator(B)) / weight


def linear_prevision_from_mass(p: MassFunction) -> LinearPrevision:
    return LinearPrevision(p)


def p_axiom_suite(p: MassFunction, samples: int = 50, seed: int | str = 0) -> PropertyResult:
    """Checks the linear prevision axioms of a full-support mass function on random queries."""
    from ._sampling import random_event, random_gamble, random_rational

    if not p.has_full_support():
        raise PreconditionError("the linear prevision axioms are checked for full-support mass functions")
    rng = random.Random(seed)
    P = linear_prevision_from_mass(p)
    result = PropertyResult("linear prevision axioms")
    space = p.space
    for _ in range(samples):
        f = random_gamble(rng, space)
        g = random_gamble(rng, space)
        A = random_event(rng, space)
        B = random_event(rng, space)
        e = P(f, A)
        shown = {"f": str(f), "A": str(A)}
        result.record(f.min(A) <= e <= f.max(A), axiom="boundedness", **shown)
        lam = random_rational(rng, -3, 3)
        result.record(P(f * lam, A) == lam * e, axiom="homogeneity", factor=str(lam), **shown)
        result.record(P(f + g, A) == e + P(g, A), axiom="additivity", g=str(g), **shown)
        AB = A.intersection(B)
        lhs = P(indicator(B) * f, A)
        rhs = (P(f, AB) * P(indicator(B), A)) if AB is not None else _ZERO
        result.record(lhs == rhs, axiom="Bayes rule", B=str(B), **shown)
        delta = random_gamble(rng, space, low=-1, high=1)
        bound = max(abs(v) for v in delta.values)
        result.record(abs(P(f + delta, A) - e) <= bound, axiom="perturbation bound", **shown)
    return result


def vertex_supports_active_constraints(cp: CredalPolytope) -> bool:
    """Whether every vertex makes n-1 linearly independent constraints active."""
    n = len(cp.source.space)
    constraints = _constraint_rows(cp.source)
    for vertex in cp.vertices:
        active = [
            row for row, b in constraints if sum((c * v for c, v in zip(row, vertex.probabilities)), _ZERO) == b
        ]
        if _rank(active + [[Fraction(1)] * n]) < n:
            return False
    return True


def _rank(matrix: Sequence[Sequence[Fraction]]) -> int:
    return _rational_matrix(matrix).rank() if matrix else 0


# ====================== Independent vertex oracles ======================


# Largest space searched by the rational grid oracle
MAX_GRID_SPACE = 4


def grid_points(size: int, max_denominator: int) -> list[tuple[Fraction, ...]]:
    """Every mass function on `size` outcomes whose masses share a denominator up to max_denominator."""
    points: set[tuple[Fraction, ...]] = set()
    for d in range(1, max_denominator + 1):
        # stars and bars: bar positions split d units into `size` parts
        for bars in itertools.combinations(range(d + size - 1), size - 1):
            edges = (-1, *bars, d + size - 1)
            points.add(tuple(Fraction(edges[k + 1] - edges[k] - 1, d) for k in range(size)))
    return sorted(points)


def in_convex_hull(vertices: Sequence[MassFunction], point: Sequence[Fraction]) -> bool:
    """Whether point is a convex combination of the vertices, decided by an exact LP."""
    lp = LinearProgram(len(vertices))
    lp.add_constraint([1] * len(vertices), Relation.EQ, 1)
    for x, value in enumerate(point):
        lp.add_constraint([v.probabilities[x] for v in vertices], Relation.EQ, value)
    return feasible(lp).is_feasible


def grid_oracle_check(cp: CredalPolytope, max_denominator: int = 12) -> PropertyResult:
    """Compares the vertex list with the credal set on a rational grid of the simplex.

    Every vertex must satisfy the assessments, so the hull lies inside the credal set, and
    every grid point of the credal set must be a convex combination of the vertices.

    Raises:
        ScopeError: If the space has more than MAX_GRID_SPACE outcomes.
    """
    n = len(cp.source.space)
    if n > MAX_GRID_SPACE:
        raise ScopeError(f"the grid oracle is limited to spaces of at most {MAX_GRID_SPACE} outcomes")
    constraints = _constraint_rows(cp.source)
    result = PropertyResult("credal vertices match grid oracle")
    for vertex in cp.vertices:
        result.record(_satisfies(constraints, vertex.probabilities), vertex=str(vertex), direction="sound")

    inside = [p for p in grid_points(n, max_denominator) if _satisfies(constraints, p)]
    for p in inside:
        shown = "(" + ", ".join(str(v) for v in p) + ")"
        result.record(in_convex_hull(cp.vertices, p), point=shown, direction="complete")
    result.notes.append(f"{len(inside)} grid points with denominators up to {max_denominator} in the credal set")
    return result


def cdd_vertices(P: AssessmentSet) -> set[tuple[Fraction, ...]]:
    """Vertices of the credal set from pycddlib's double description, in exact fractions.

    Raises:
        ScopeError: If pycddlib is not installed (it ships in the `cdd` extra).
    """
    try:
        import cdd
    except ImportError as exc:
        raise ScopeError("vertex cross-check needs pycddlib (install the 'cdd' extra)") from exc

    n = len(P.space)
    # cdd H-representation rows [b, A] mean b + A·p >= 0
    rows = [[-b, *a] for a, b in _constraint_rows(P)]
    simplex = [Fraction(-1)] + [Fraction(1)] * n
    if hasattr(cdd, "Matrix"):
        mat = cdd.Matrix(rows, number_type="fraction")
        mat.rep_type = cdd.RepType.INEQUALITY
        mat.extend([simplex], linear=True)
        generators = cdd.Polyhedron(mat).get_generators()
        found = [generators[k] for k in range(generators.row_size)]
    else:
        import cdd.gmp

        mat = cdd.gmp.matrix_from_array(rows + [simplex], lin_set={len(rows)}, rep_type=cdd.RepType.INEQUALITY)
        found = cdd.gmp.copy_generators(cdd.gmp.polyhedron_from_matrix(mat)).array
    return {tuple(Fraction(v) / Fraction(row[0]) for v in row[1:]) for row in found if row[0]}

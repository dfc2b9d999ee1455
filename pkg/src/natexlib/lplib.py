"""Exact rational linear programming.

A dense two-phase tableau simplex over Fractions with Bland's rule. Every optimal or feasible
witness is re-checked exactly against the original program before it is returned.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from logtools import get_logger

from .errors import LpWitnessError, PreconditionError

logger = get_logger(__name__)

_ZERO = Fraction(0)
_ONE = Fraction(1)

_settings = {"float_timing": False}


def configure(float_timing: bool = False) -> None:
    """Enables or disables the inexact timing comparison run next to every exact solve."""
    _settings["float_timing"] = bool(float_timing)


class Sense(StrEnum):
    MAXIMIZE = "maximize"
    MINIMIZE = "minimize"


class Relation(StrEnum):
    LE = "<="
    EQ = "="
    GE = ">="


class Status(StrEnum):
    OPTIMAL = "optimal"
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Constraint:
    coefficients: tuple[Fraction, ...]
    relation: Relation
    rhs: Fraction

    def holds(self, x: Sequence[Fraction]) -> bool:
        lhs = sum((a * v for a, v in zip(self.coefficients, x) if a), _ZERO)
        if self.relation is Relation.LE:
            return lhs <= self.rhs
        if self.relation is Relation.GE:
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass
class LinearProgram:
    """A linear program over n variables.

    Variables default to the bounds [0, +inf). Use set_bounds to change them; None means unbounded
    on that side.

    Usage:
        lp = LinearProgram(2, sense=Sense.MAXIMIZE, objective=[1, 1])
        lp.add_constraint([1, 2], Relation.LE, 4)
        outcome = solve(lp)
    """

    n: int
    sense: Sense = Sense.MAXIMIZE
    objective: Sequence[Fraction | int] | None = None
    constraints: list[Constraint] = field(default_factory=list)
    lower: list[Fraction | None] = field(default_factory=list)
    upper: list[Fraction | None] = field(default_factory=list)

    def __post_init__(self):
        if self.n < 0:
            raise PreconditionError("variable count must be non-negative")
        objective = [_ZERO] * self.n if self.objective is None else [Fraction(c) for c in self.objective]
        if len(objective) != self.n:
            raise PreconditionError(f"objective has {len(objective)} coefficients, expected {self.n}")
        self.objective = tuple(objective)
        if not self.lower:
            self.lower = [_ZERO] * self.n
        if not self.upper:
            self.upper = [None] * self.n

    def add_constraint(
        self, coefficients: Sequence[Fraction | int], relation: Relation | str, rhs: Fraction | int
    ) -> None:
        row = tuple(Fraction(a) for a in coefficients)
        if len(row) != self.n:
            raise PreconditionError(f"constraint has {len(row)} coefficients, expected {self.n}")
        self.constraints.append(Constraint(row, Relation(relation), Fraction(rhs)))

    def set_bounds(self, j: int, lower: Fraction | int | None = 0, upper: Fraction | int | None = None) -> None:
        self.lower[j] = None if lower is None else Fraction(lower)
        self.upper[j] = None if upper is None else Fraction(upper)

    def objective_value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.objective, x) if c), _ZERO)

    def check(self, x: Sequence[Fraction]) -> bool:
        """Exact feasibility check of an assignment."""
        for j, v in enumerate(x):
            if self.lower[j] is not None and v < self.lower[j]:
                return False
            if self.upper[j] is not None and v > self.upper[j]:
                return False
        return all(c.holds(x) for c in self.constraints)


@dataclass(frozen=True)
class LpOutcome:
    status: Status
    value: Fraction | None = None
    witness: tuple[Fraction, ...] | None = None

    @property
    def is_optimal(self) -> bool:
        return self.status is Status.OPTIMAL

    @property
    def is_feasible(self) -> bool:
        return self.status in (Status.OPTIMAL, Status.FEASIBLE, Status.UNBOUNDED)


@dataclass(frozen=True)
class InexactOutcome:
    status: str
    value: float | None
    seconds: float


# ====================== Standard form ======================


class _StandardForm:
    """Maps x to y >= 0 and rows to equalities with non-negative right-hand sides."""

    def __init__(self, lp: LinearProgram):
        self.lp = lp
        self.offset = [_ZERO] * lp.n
        # each original variable as a list of (column, sign)
        self.columns: list[list[tuple[int, int]]] = []
        rows: list[tuple[list[Fraction], Relation, Fraction]] = []
        ny = 0
        extra_rows: list[tuple[int, Fraction]] = []
        for j in range(lp.n):
            low, high = lp.lower[j], lp.upper[j]
            if low is not None:
                self.offset[j] = low
                self.columns.append([(ny, 1)])
                if high is not None:
                    extra_rows.append((ny, high - low))
                ny += 1
            elif high is not None:
                self.offset[j] = high
                self.columns.append([(ny, -1)])
                ny += 1
            else:
                self.columns.append([(ny, 1), (ny + 1, -1)])
                ny += 2
        self.ny = ny

        for c in lp.constraints:
            row = [_ZERO] * ny
            shift = _ZERO
            for j, a in enumerate(c.coefficients):
                if not a:
                    continue
                shift += a * self.offset[j]
                for col, sign in self.columns[j]:
                    row[col] += a * sign
            rows.append((row, c.relation, c.rhs - shift))
        for col, width in extra_rows:
            row = [_ZERO] * ny
            row[col] = _ONE
            rows.append((row, Relation.LE, width))

        self.cost = [_ZERO] * ny
        sign = 1 if lp.sense is Sense.MAXIMIZE else -1
        for j, c in enumerate(lp.objective):
            for col, s in self.columns[j]:
                self.cost[col] += sign * c * s
        self.rows = rows

    def recover(self, y: Sequence[Fraction]) -> tuple[Fraction, ...]:
        return tuple(
            self.offset[j] + sum((s * y[col] for col, s in self.columns[j]), _ZERO)
            for j in range(self.lp.n)
        )


# ====================== Tableau simplex ======================


class _Tableau:
    """Dense tableau with rows [coefficients..., rhs] and an explicit basis."""

    def __init__(self, rows: list[list[Fraction]], basis: list[int], width: int):
        self.rows = rows
        self.basis = basis
        self.width = width

    def pivot(self, r: int, c: int) -> None:
        pivot_row = self.rows[r]
        p = pivot_row[c]
        if p != 1:
            pivot_row = [v / p for v in pivot_row]
            self.rows[r] = pivot_row
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            factor = row[c]
            if factor:
                self.rows[i] = [a - factor * b if b else a for a, b in zip(row, pivot_row)]
        self.basis[r] = c

    def reduced_costs(self, cost: Sequence[Fraction], allowed: int) -> list[Fraction]:
        basic_cost = [cost[b] for b in self.basis]
        reduced = list(cost[:allowed])
        for cb, row in zip(basic_cost, self.rows):
            if cb:
                for j in range(allowed):
                    if row[j]:
                        reduced[j] -= cb * row[j]
        return reduced

    def maximize(self, cost: Sequence[Fraction], allowed: int) -> bool:
        """Runs Bland's rule on columns < allowed; returns False when unbounded."""
        while True:
            reduced = self.reduced_costs(cost, allowed)
            basic = set(self.basis)
            entering = next((j for j in range(allowed) if reduced[j] > 0 and j not in basic), None)
            if entering is None:
                return True
            leaving = None
            best: Fraction | None = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = row[-1] / a
                    if (
                        best is None
                        or ratio < best
                        or (ratio == best and self.basis[i] < self.basis[leaving])
                    ):
                        best, leaving = ratio, i
            if leaving is None:
                return False
            self.pivot(leaving, entering)

    def values(self) -> list[Fraction]:
        x = [_ZERO] * self.width
        for i, b in enumerate(self.basis):
            x[b] = self.rows[i][-1]
        return x


def _simplex(form: _StandardForm) -> tuple[Status, list[Fraction] | None]:
    ny = form.ny
    m = len(form.rows)
    n_slack = sum(1 for _, rel, _ in form.rows if rel is not Relation.EQ)

    width = ny + n_slack
    rows: list[list[Fraction]] = []
    basis: list[int] = []
    needs_artificial: list[int] = []
    slack = ny
    for i, (coeffs, rel, rhs) in enumerate(form.rows):
        row = list(coeffs) + [_ZERO] * n_slack
        slack_col = None
        if rel is Relation.LE:
            row[slack] = _ONE
            slack_col = slack
            slack += 1
        elif rel is Relation.GE:
            row[slack] = -_ONE
            slack_col = slack
            slack += 1
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
        row.append(rhs)
        rows.append(row)
        if slack_col is not None and row[slack_col] == 1:
            basis.append(slack_col)
        else:
            basis.append(-1)
            needs_artificial.append(i)

    if needs_artificial:
        n_art = len(needs_artificial)
        for row in rows:
            row[-1:-1] = [_ZERO] * n_art
        for k, i in enumerate(needs_artificial):
            rows[i][width + k] = _ONE
            basis[i] = width + k
        tableau = _Tableau(rows, basis, width + n_art)
        phase_one = [_ZERO] * width + [-_ONE] * n_art
        tableau.maximize(phase_one, width + n_art)
        if any(tableau.rows[i][-1] for i, b in enumerate(tableau.basis) if b >= width):
            return Status.INFEASIBLE, None

        # drive artificials out of the basis; rows where that is impossible are redundant
        redundant = []
        for i, b in enumerate(tableau.basis):
            if b < width:
                continue
            c = next((j for j in range(width) if tableau.rows[i][j]), None)
            if c is None:
                redundant.append(i)
            else:
                tableau.pivot(i, c)
        for i in reversed(redundant):
            del tableau.rows[i]
            del tableau.basis[i]
        tableau.rows = [row[:width] + [row[-1]] for row in tableau.rows]
        tableau.width = width
    else:
        tableau = _Tableau(rows, basis, width)

    logger.debug(f"Simplex phase two on {m} rows and {width} columns")
    cost = list(form.cost) + [_ZERO] * n_slack
    if not tableau.maximize(cost, width):
        return Status.UNBOUNDED, None
    return Status.OPTIMAL, tableau.values()[:ny]


def solve(lp: LinearProgram) -> LpOutcome:
    """Solves a linear program exactly.

    Returns:
        LpOutcome: OPTIMAL with value and witness, INFEASIBLE, or UNBOUNDED. The result is
        deterministic for a fixed program.

    Raises:
        LpWitnessError: If the witness fails the exact post-solve check.
    """
    started = time.perf_counter()
    form = _StandardForm(lp)
    status, y = _simplex(form)
    elapsed = time.perf_counter() - started

    if _settings["float_timing"]:
        inexact = solve_inexact(lp)
        logger.info(
            f"LP timing: exact {elapsed:.6f}s ({status}), inexact {inexact.seconds:.6f}s ({inexact.status})",
            extra={"exact_seconds": elapsed, "inexact_seconds": inexact.seconds, "rows": len(lp.constraints)},
        )

    if status is not Status.OPTIMAL:
        return LpOutcome(status)
    x = form.recover(y)
    if not lp.check(x):
        raise LpWitnessError(f"simplex witness violates the program: {x}")
    return LpOutcome(Status.OPTIMAL, lp.objective_value(x), x)


def feasible(lp: LinearProgram) -> LpOutcome:
    """Decides feasibility of the constraints of lp, ignoring its objective.

    Returns:
        LpOutcome: FEASIBLE with a witness, or INFEASIBLE.
    """
    constraints_only = LinearProgram(
        lp.n,
        Sense.MAXIMIZE,
        None,
        list(lp.constraints),
        list(lp.lower),
        list(lp.upper),
    )
    outcome = solve(constraints_only)
    if outcome.is_optimal:
        return LpOutcome(Status.FEASIBLE, _ZERO, outcome.witness)
    return LpOutcome(Status.INFEASIBLE)


def solve_inexact(lp: LinearProgram) -> InexactOutcome:
    """Solves the same program in double precision with HiGHS, for timing comparisons only."""
    if not lp.n:
        return InexactOutcome("skipped", None, 0.0)
    sign = -1.0 if lp.sense is Sense.MAXIMIZE else 1.0
    c = np.array([sign * float(v) for v in lp.objective], dtype=float)
    ub_rows, ub_rhs, eq_rows, eq_rhs = [], [], [], []
    for con in lp.constraints:
        row = [float(a) for a in con.coefficients]
        if con.relation is Relation.LE:
            ub_rows.append(row)
            ub_rhs.append(float(con.rhs))
        elif con.relation is Relation.GE:
            ub_rows.append([-a for a in row])
            ub_rhs.append(-float(con.rhs))
        else:
            eq_rows.append(row)
            eq_rhs.append(float(con.rhs))
    bounds = [
        (None if lo is None else float(lo), None if hi is None else float(hi))
        for lo, hi in zip(lp.lower, lp.upper)
    ]
    started = time.perf_counter()
    result = linprog(
        c if lp.n else np.zeros(0),
        A_ub=np.array(ub_rows, dtype=float) if ub_rows else None,
        b_ub=np.array(ub_rhs, dtype=float) if ub_rows else None,
        A_eq=np.array(eq_rows, dtype=float) if eq_rows else None,
        b_eq=np.array(eq_rhs, dtype=float) if eq_rows else None,
        bounds=bounds,
        method="highs",
    )
    seconds = time.perf_counter() - started
    status = {0: "optimal", 2: "infeasible", 3: "unbounded"}.get(result.status, "error")
    value = sign * float(result.fun) if result.status == 0 else None
    return InexactOutcome(status, value, seconds)

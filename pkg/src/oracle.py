"""Exact rational reference solver.

Ground truth for tests only: every number here is a ``Fraction`` and every
pivot is exact, so optimal values and vertices carry no rounding at all.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
import logging
import math
import random

from src.errors import OracleSizeError
from src.interval import Interval
from src.models import Box, IntervalLinearProgram, LinearForm, Row

logger = logging.getLogger(__name__)

MAX_VARIABLES = 8
MAX_ROWS = 12
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

Point = dict[str, Fraction]
Side = Fraction | None


@dataclass(frozen=True, slots=True)
class ExactRow:
    """``lo <= sum(c_j x_j) <= hi``; ``None`` marks an absent side."""

    coefficients: dict[str, Fraction]
    lo: Side = None
    hi: Side = None


@dataclass(frozen=True, slots=True)
class ExactProgram:
    variables: tuple[str, ...]
    rows: tuple[ExactRow, ...]
    box: dict[str, tuple[Side, Side]] = field(default_factory=dict)
    infeasible: bool = False


@dataclass(frozen=True, slots=True)
class Sample:
    point: Point
    realization: ExactProgram


# --- conversions ----------------------------------------------------------------


def _side(value: float) -> Side:
    return None if math.isinf(value) else Fraction(value)


def exact_program(program: IntervalLinearProgram | ExactProgram) -> ExactProgram:
    """Exact copy of a program whose coefficients are all thin."""
    if isinstance(program, ExactProgram):
        return program
    rows: list[ExactRow] = []
    for row in program.rows:
        coefficients: dict[str, Fraction] = {}
        for name, value in row.form.coefficients.items():
            if value.lo != value.hi:
                raise ValueError(f"coefficient of {name} in '{row.label}' is not thin")
            coefficients[name] = Fraction(value.lo)
        rows.append(ExactRow(coefficients, _side(row.bound.lo), _side(row.bound.hi)))
    box = {name: (_side(value.lo), _side(value.hi)) for name, value in program.box.items()}
    return ExactProgram(program.variables, tuple(rows), box, bool(program.infeasible))


def to_interval_program(program: ExactProgram) -> IntervalLinearProgram:
    """Outward-rounded interval program containing the exact one."""

    def hull(lo: Side, hi: Side) -> Interval:
        return Interval(
            Interval.from_fraction(lo).lo if lo is not None else -math.inf,
            Interval.from_fraction(hi).hi if hi is not None else math.inf,
        )

    rows = tuple(
        Row(
            LinearForm({name: Interval.from_fraction(value) for name, value in row.coefficients.items() if value}),
            hull(row.lo, row.hi),
            f"row {index}",
        )
        for index, row in enumerate(program.rows)
    )
    box = Box({name: hull(*program.box.get(name, (None, None))) for name in program.variables})
    return IntervalLinearProgram(program.variables, rows, box)


def _literal(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"({value.numerator}/{value.denominator})"


def to_model_text(program: ExactProgram) -> str:
    """Model text whose relaxation is ``to_interval_program(program)`` up to row order."""
    lines: list[str] = []
    for name in program.variables:
        lo, hi = program.box.get(name, (None, None))
        if lo is not None and hi is not None:
            lines.append(f"{name} in [{lo}, {hi}];")
        elif lo is not None:
            lines.append(f"{_literal(lo)} <= {name};")
        elif hi is not None:
            lines.append(f"{name} <= {_literal(hi)};")
    for row in program.rows:
        expression = " + ".join(f"{_literal(value)}*{name}" for name, value in row.coefficients.items())
        if row.lo is not None and row.lo == row.hi:
            lines.append(f"{expression} = {_literal(row.lo)};")
        elif row.lo is not None and row.hi is not None:
            lines.append(f"{_literal(row.lo)} <= {expression} <= {_literal(row.hi)};")
        elif row.lo is not None:
            lines.append(f"{_literal(row.lo)} <= {expression};")
        elif row.hi is not None:
            lines.append(f"{expression} <= {_literal(row.hi)};")
    return "\n".join(lines) + "\n"


def _check_size(program: ExactProgram) -> None:
    if len(program.variables) > MAX_VARIABLES or len(program.rows) > MAX_ROWS:
        raise OracleSizeError(
            f"oracle handles at most {MAX_VARIABLES} variables and {MAX_ROWS} rows, "
            f"got {len(program.variables)} and {len(program.rows)}"
        )


def satisfies(program: ExactProgram, point: Mapping[str, Fraction]) -> bool:
    if program.infeasible:
        return False
    for name in program.variables:
        lo, hi = program.box.get(name, (None, None))
        if (lo is not None and point[name] < lo) or (hi is not None and point[name] > hi):
            return False
    for row in program.rows:
        value = sum((coefficient * point[name] for name, coefficient in row.coefficients.items()), Fraction(0))
        if (row.lo is not None and value < row.lo) or (row.hi is not None and value > row.hi):
            return False
    return True


# --- exact simplex --------------------------------------------------------------


class _ExactTableau:
    """Sparse rational tableau, Bland's rule in both phases.

    Variables with a finite lower bound are shifted to start at zero, those with
    only an upper bound are reflected, free ones are split in two.
    """

    def __init__(self, program: ExactProgram) -> None:
        _check_size(program)
        self.names = program.variables
        self.offsets: dict[str, Fraction] = {}
        self.parts: dict[str, list[tuple[int, int]]] = {}
        constraints: list[tuple[dict[int, Fraction], Side, Side]] = []
        column = 0
        for name in self.names:
            lo, hi = program.box.get(name, (None, None))
            if lo is not None:
                self.offsets[name] = lo
                self.parts[name] = [(column, 1)]
                if hi is not None:
                    constraints.append(({column: Fraction(1)}, None, hi - lo))
                column += 1
            elif hi is not None:
                self.offsets[name] = hi
                self.parts[name] = [(column, -1)]
                column += 1
            else:
                self.offsets[name] = Fraction(0)
                self.parts[name] = [(column, 1), (column + 1, -1)]
                column += 2
        self.structural = column

        for row in program.rows:
            coefficients: dict[int, Fraction] = {}
            shift = Fraction(0)
            for name, value in row.coefficients.items():
                shift += value * self.offsets[name]
                for index, sign in self.parts[name]:
                    coefficients[index] = coefficients.get(index, Fraction(0)) + sign * value
            coefficients = {index: value for index, value in coefficients.items() if value}
            lo = None if row.lo is None else row.lo - shift
            hi = None if row.hi is None else row.hi - shift
            constraints.append((coefficients, lo, hi))

        self.rows: list[dict[int, Fraction]] = []
        self.rhs: list[Fraction] = []
        self.trivially_infeasible = program.infeasible
        slack = self.structural
        pending: list[tuple[dict[int, Fraction], Fraction]] = []
        for coefficients, lo, hi in constraints:
            if lo is not None and hi is not None and lo > hi:
                self.trivially_infeasible = True
            if lo is not None and lo == hi:
                pending.append((dict(coefficients), lo))
                continue
            for value, sign in ((lo, -1), (hi, 1)):
                if value is None:
                    continue
                row = dict(coefficients)
                row[slack] = Fraction(sign)
                slack += 1
                pending.append((row, value))
        self.first_artificial = slack
        for offset, (row, value) in enumerate(pending):
            if value < 0:
                row = {index: -entry for index, entry in row.items()}
                value = -value
            row[slack + offset] = Fraction(1)
            self.rows.append(row)
            self.rhs.append(value)
        self.basis = [slack + offset for offset in range(len(pending))]
        self.feasible: bool | None = None

    def _pivot(self, row: int, column: int) -> None:
        pivot_row = self.rows[row]
        pivot = pivot_row[column]
        if pivot != 1:
            pivot_row = {index: value / pivot for index, value in pivot_row.items()}
            self.rows[row] = pivot_row
            self.rhs[row] /= pivot
        for other, target in enumerate(self.rows):
            if other == row:
                continue
            factor = target.get(column)
            if not factor:
                continue
            for index, value in pivot_row.items():
                updated = target.get(index, Fraction(0)) - factor * value
                if updated:
                    target[index] = updated
                else:
                    target.pop(index, None)
            self.rhs[other] -= factor * self.rhs[row]
        self.basis[row] = column

    def _run(self, costs: dict[int, Fraction]) -> bool:
        """Minimize ``costs``; False when the objective is unbounded below."""
        while True:
            reduced = dict(costs)
            for row, basic in enumerate(self.basis):
                weight = costs.get(basic)
                if not weight:
                    continue
                for index, value in self.rows[row].items():
                    reduced[index] = reduced.get(index, Fraction(0)) - weight * value
            basic_columns = set(self.basis)
            entering = min(
                (
                    index
                    for index, value in reduced.items()
                    if value < 0 and index < self.first_artificial and index not in basic_columns
                ),
                default=None,
            )
            if entering is None:
                return True
            leaving: int | None = None
            best: Fraction | None = None
            for row, entries in enumerate(self.rows):
                value = entries.get(entering)
                if value is None or value <= 0:
                    continue
                ratio = self.rhs[row] / value
                if best is None or ratio < best or (ratio == best and self.basis[row] < self.basis[leaving]):
                    leaving, best = row, ratio
            if leaving is None:
                return False
            self._pivot(leaving, entering)

    def solve_feasibility(self) -> bool:
        if self.feasible is not None:
            return self.feasible
        if self.trivially_infeasible:
            self.feasible = False
            return False
        artificial_costs = {column: Fraction(1) for column in self.basis}
        self._run(artificial_costs)
        residual = sum(
            (self.rhs[row] for row, basic in enumerate(self.basis) if basic >= self.first_artificial),
            Fraction(0),
        )
        if residual > 0:
            self.feasible = False
            return False
        redundant: list[int] = []
        for row, basic in enumerate(self.basis):
            if basic < self.first_artificial:
                continue
            candidate = next((index for index in sorted(self.rows[row]) if index < self.first_artificial), None)
            if candidate is None:
                redundant.append(row)
            else:
                self._pivot(row, candidate)
        for row in reversed(redundant):
            del self.rows[row], self.rhs[row], self.basis[row]
        for entries in self.rows:
            for index in [index for index in entries if index >= self.first_artificial]:
                del entries[index]
        self.feasible = True
        return True

    def point(self) -> Point:
        values = {basic: self.rhs[row] for row, basic in enumerate(self.basis)}
        return {
            name: self.offsets[name] + sum((sign * values.get(index, Fraction(0)) for index, sign in self.parts[name]), Fraction(0))
            for name in self.names
        }

    def minimize(self, direction: Mapping[str, Fraction]) -> Point | None:
        """Vertex minimizing ``direction . x``, continuing from the current basis."""
        if not self.solve_feasibility():
            raise ValueError("program is infeasible")
        costs: dict[int, Fraction] = {}
        for name, weight in direction.items():
            for index, sign in self.parts[name]:
                costs[index] = costs.get(index, Fraction(0)) + sign * weight
        if not self._run(costs):
            return None
        return self.point()


# --- public operations ----------------------------------------------------------


def exact_optimum(program: IntervalLinearProgram | ExactProgram, variable: str, direction: str) -> Fraction | str:
    """Exact min or max of one variable, or ``"infeasible"`` / ``"unbounded"``."""
    if direction not in {"min", "max"}:
        raise ValueError(f"direction must be 'min' or 'max', not {direction!r}")
    exact = exact_program(program)
    if variable not in exact.variables:
        raise ValueError(f"unknown variable {variable!r}")
    tableau = _ExactTableau(exact)
    if not tableau.solve_feasibility():
        return INFEASIBLE
    sign = Fraction(1 if direction == "min" else -1)
    point = tableau.minimize({variable: sign})
    if point is None:
        return UNBOUNDED
    return point[variable]


def exact_hull(program: IntervalLinearProgram | ExactProgram) -> dict[str, tuple[Side, Side]] | None:
    """Exact per-variable range of the feasible set; None when it is empty."""
    tableau = _ExactTableau(exact_program(program))
    if not tableau.solve_feasibility():
        return None
    hull: dict[str, tuple[Side, Side]] = {}
    for name in tableau.names:
        low = tableau.minimize({name: Fraction(1)})
        high = tableau.minimize({name: Fraction(-1)})
        hull[name] = (None if low is None else low[name], None if high is None else high[name])
    return hull


def vertices(
    program: IntervalLinearProgram | ExactProgram,
    rng: random.Random | None = None,
    extra_directions: int = 2,
) -> list[Point]:
    """Distinct optimal vertices over the axis directions and a few random ones."""
    rng = rng or random.Random(0)
    tableau = _ExactTableau(exact_program(program))
    if not tableau.solve_feasibility():
        return []
    found = [tableau.point()]
    directions: list[dict[str, Fraction]] = []
    for name in tableau.names:
        directions.append({name: Fraction(1)})
        directions.append({name: Fraction(-1)})
    for _ in range(extra_directions):
        directions.append({name: Fraction(rng.randint(-3, 3)) for name in tableau.names})
    for direction in directions:
        point = tableau.minimize(direction)
        if point is not None and point not in found:
            found.append(point)
    return found


def _pick(lo: float, hi: float, rng: random.Random) -> Fraction:
    if lo == hi:
        return Fraction(lo)
    if math.isinf(lo) and math.isinf(hi):
        return Fraction(rng.randint(-4, 4))
    if math.isinf(lo):
        return Fraction(hi) - rng.randint(0, 4)
    if math.isinf(hi):
        return Fraction(lo) + rng.randint(0, 4)
    return Fraction(lo) + Fraction(rng.randint(0, 16), 16) * (Fraction(hi) - Fraction(lo))


def realize(program: IntervalLinearProgram, rng: random.Random) -> ExactProgram:
    """Exact program with every interval coefficient replaced by a random member."""
    rows = tuple(
        ExactRow(
            {name: _pick(value.lo, value.hi, rng) for name, value in row.form.coefficients.items()},
            _side(row.bound.lo),
            _side(row.bound.hi),
        )
        for row in program.rows
    )
    box = {name: (_side(value.lo), _side(value.hi)) for name, value in program.box.items()}
    return ExactProgram(program.variables, rows, box, bool(program.infeasible))


def _is_thin(program: IntervalLinearProgram) -> bool:
    return all(row.form.is_thin() for row in program.rows)


def sample_solutions(
    program: IntervalLinearProgram | ExactProgram,
    count: int,
    rng: random.Random | None = None,
) -> list[Sample]:
    """Points of the solution set, each with the realization it satisfies exactly.

    Points are strictly positive combinations of realized vertices. An
    infeasible realization is skipped, so fewer than ``count`` may come back.
    """
    rng = rng or random.Random(0)
    fixed = isinstance(program, ExactProgram) or _is_thin(program)
    samples: list[Sample] = []
    realization: ExactProgram | None = None
    corners: list[Point] = []
    for _ in range(count):
        if realization is None or not fixed:
            if isinstance(program, ExactProgram):
                realization = program
            elif fixed:
                realization = exact_program(program)
            else:
                realization = realize(program, rng)
            corners = vertices(realization, rng)
        if not corners:
            if fixed:
                break
            continue
        weights = [Fraction(rng.randint(1, 5)) for _ in corners]
        total = sum(weights, Fraction(0))
        point = {
            name: sum((weight * corner[name] for weight, corner in zip(weights, corners)), Fraction(0)) / total
            for name in realization.variables
        }
        if not satisfies(realization, point):
            logger.warning("discarding a sample that misses its realization")
            continue
        samples.append(Sample(point, realization))
    return samples


def random_program(rng: random.Random, variables: int, rows: int) -> ExactProgram:
    """Bounded program with small rational data, feasible by construction."""
    names = tuple(f"x{index}" for index in range(variables))
    center = {name: Fraction(rng.randint(-12, 12), rng.choice((1, 2, 3, 4))) for name in names}
    box = {name: (center[name] - rng.randint(1, 6), center[name] + rng.randint(1, 6)) for name in names}
    generated: list[ExactRow] = []
    for _ in range(rows):
        chosen = rng.sample(names, rng.randint(2, min(3, variables)))
        coefficients = {
            name: Fraction(rng.choice((-5, -4, -3, -2, -1, 1, 2, 3, 4, 5)), rng.choice((1, 1, 2, 3)))
            for name in sorted(chosen, key=names.index)
        }
        value = sum((coefficient * center[name] for name, coefficient in coefficients.items()), Fraction(0))
        kind = rng.random()
        if kind < 0.25:
            generated.append(ExactRow(coefficients, value, value))
        elif kind < 0.5:
            generated.append(ExactRow(coefficients, value - rng.randint(0, 3), None))
        elif kind < 0.75:
            generated.append(ExactRow(coefficients, None, value + rng.randint(0, 3)))
        else:
            generated.append(ExactRow(coefficients, value - rng.randint(0, 2), value + rng.randint(1, 3)))
    return ExactProgram(names, tuple(generated), box)

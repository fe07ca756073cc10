"""Approximate LP solving over the midpoint realization of an interval program.

Dense two-phase tableau simplex: most-negative reduced cost enters (lowest
index on ties), the leaving row is chosen by a lexicographic ratio test on the
rows of the basis inverse, which rules out cycling. Results are NOT reliable;
``safebound`` turns the multipliers into certified bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import logging
import math

import numpy as np

from src.interval import mid
from src.models import IntervalLinearProgram

logger = logging.getLogger(__name__)

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"
ITERATION_LIMIT = "iteration-limit"

FEASIBILITY_TOL = 1e-9
REDUCED_COST_TOL = 1e-9
PIVOT_TOL = 1e-11
ITERATIONS_PER_DIMENSION = 50
_REFINEMENT_STEPS = 2


@dataclass(slots=True)
class SimplexSolution:
    """Outcome of one solve.

    ``duals`` follow the sign convention of the bound they support: positive
    multipliers support a row's lower bound, negative ones its upper bound.
    For a max objective they are the multipliers of min(-v). ``farkas`` holds
    the phase-1 multipliers when the midpoint program looks infeasible.
    """

    status: str
    objective: float = math.nan
    primal: dict[str, float] = field(default_factory=dict)
    duals: dict[int, float] = field(default_factory=dict)
    box_duals: dict[str, float] = field(default_factory=dict)
    farkas: dict[int, float] = field(default_factory=dict)
    farkas_box: dict[str, float] = field(default_factory=dict)
    ray: dict[str, float] = field(default_factory=dict)
    iterations: int = 0


@dataclass(frozen=True, slots=True)
class _Origin:
    row: int | None
    name: str | None


class _Tableau:
    """Standard form ``A z = b, z >= 0`` with one artificial column per row."""

    def __init__(self, matrix: np.ndarray, rhs: np.ndarray) -> None:
        m, structural = matrix.shape
        self.m = m
        self.first_artificial = structural
        self.columns = structural + m
        self.table = np.zeros((m, self.columns + 1))
        self.table[:, :structural] = matrix
        self.table[:, structural:self.columns] = np.eye(m)
        self.table[:, -1] = rhs
        self.basis = list(range(structural, self.columns))
        self.iterations = 0
        self.unbounded_column = -1

    @property
    def rhs(self) -> np.ndarray:
        return self.table[:, -1]

    def reduced_costs(self, costs: np.ndarray) -> np.ndarray:
        basic_costs = costs[self.basis]
        return costs - basic_costs @ self.table[:, : self.columns]

    def pivot(self, row: int, column: int) -> None:
        self.table[row] /= self.table[row, column]
        factors = self.table[:, column].copy()
        factors[row] = 0.0
        self.table -= np.outer(factors, self.table[row])
        self.table[:, column] = 0.0
        self.table[row, column] = 1.0
        self.basis[row] = column
        self.iterations += 1

    def leaving_row(self, column: int) -> int | None:
        entries = self.table[:, column]
        candidates = np.flatnonzero(entries > PIVOT_TOL)
        if candidates.size == 0:
            return None
        ratios = np.maximum(self.rhs[candidates], 0.0) / entries[candidates]
        best = ratios.min()
        tied = candidates[ratios <= best + FEASIBILITY_TOL * (1.0 + abs(best))]
        if tied.size == 1:
            return int(tied[0])
        inverse = self.table[:, self.first_artificial : self.columns]
        return int(min(tied, key=lambda i: tuple(inverse[i] / entries[i])))

    def run(self, costs: np.ndarray, limit: int) -> str:
        while True:
            reduced = self.reduced_costs(costs)[: self.first_artificial]
            if reduced.size == 0:
                return OPTIMAL
            column = int(np.argmin(reduced))
            if reduced[column] >= -REDUCED_COST_TOL:
                return OPTIMAL
            if self.iterations >= limit:
                return ITERATION_LIMIT
            row = self.leaving_row(column)
            if row is None:
                self.unbounded_column = column
                return UNBOUNDED
            logger.debug("pivot row=%d column=%d reduced=%.3e", row, column, reduced[column])
            self.pivot(row, column)

    def drive_out_artificials(self) -> None:
        for row, column in enumerate(self.basis):
            if column < self.first_artificial:
                continue
            entries = np.abs(self.table[row, : self.first_artificial])
            candidate = int(np.argmax(entries)) if entries.size else 0
            if entries.size and entries[candidate] > PIVOT_TOL:
                self.pivot(row, candidate)

    def basic_values(self) -> np.ndarray:
        values = np.zeros(self.columns)
        values[self.basis] = self.rhs
        return values


def _standard_form(program: IntervalLinearProgram) -> tuple[np.ndarray, np.ndarray, np.ndarray, list[_Origin]]:
    names = program.variables
    position = {name: j for j, name in enumerate(names)}
    constraints: list[tuple[np.ndarray, str, float, _Origin]] = []

    def add(coefficients: np.ndarray, lo: float, hi: float, origin: _Origin) -> None:
        if lo == hi:
            constraints.append((coefficients, "eq", lo, origin))
            return
        if math.isfinite(lo):
            constraints.append((coefficients, "ge", lo, origin))
        if math.isfinite(hi):
            constraints.append((coefficients, "le", hi, origin))

    for index, row in enumerate(program.rows):
        coefficients = np.zeros(len(names))
        for name, value in row.form.coefficients.items():
            coefficients[position[name]] = mid(value)
        add(coefficients, row.bound.lo, row.bound.hi, _Origin(index, None))
    for name in names:
        interval = program.box.get(name)
        if interval is None:
            continue
        unit = np.zeros(len(names))
        unit[position[name]] = 1.0
        add(unit, interval.lo, interval.hi, _Origin(None, name))

    slack_count = sum(1 for _, kind, _, _ in constraints if kind != "eq")
    matrix = np.zeros((len(constraints), 2 * len(names) + slack_count))
    rhs = np.zeros(len(constraints))
    signs = np.ones(len(constraints))
    slack = 2 * len(names)
    for k, (coefficients, kind, value, _) in enumerate(constraints):
        matrix[k, 0 : 2 * len(names) : 2] = coefficients
        matrix[k, 1 : 2 * len(names) : 2] = -coefficients
        if kind != "eq":
            matrix[k, slack] = -1.0 if kind == "ge" else 1.0
            slack += 1
        rhs[k] = value
        if value < 0:
            matrix[k] = -matrix[k]
            rhs[k] = -value
            signs[k] = -1.0
    return matrix, rhs, signs, [origin for _, _, _, origin in constraints]


def _basis_duals(tableau: _Tableau, matrix: np.ndarray, costs: np.ndarray, signs: np.ndarray) -> np.ndarray:
    """Solve B^T y = c_B, refined with exactly computed residuals, unscaled by the row signs."""
    m = tableau.m
    if m == 0:
        return np.zeros(0)
    full = np.hstack([matrix, np.eye(m)])
    basis_matrix = full[:, tableau.basis]
    basic_costs = costs[tableau.basis]
    try:
        duals = np.linalg.solve(basis_matrix.T, basic_costs)
        for _ in range(_REFINEMENT_STEPS):
            residual = np.array(
                [
                    float(
                        Fraction(float(basic_costs[j]))
                        - sum(
                            (Fraction(float(basis_matrix[k, j])) * Fraction(float(duals[k]))
                             for k in np.flatnonzero(basis_matrix[:, j])),
                            Fraction(0),
                        )
                    )
                    for j in range(m)
                ]
            )
            if not residual.any():
                break
            duals = duals + np.linalg.solve(basis_matrix.T, residual)
    except np.linalg.LinAlgError:
        logger.warning("singular basis while extracting multipliers; reporting zeros")
        return np.zeros(m)
    return duals * signs


def _collect(values: np.ndarray, origins: list[_Origin], rows: int) -> tuple[dict[int, float], dict[str, float]]:
    by_row = {index: 0.0 for index in range(rows)}
    by_name: dict[str, float] = {}
    for value, origin in zip(values, origins):
        if origin.row is not None:
            by_row[origin.row] += float(value)
        elif origin.name is not None:
            by_name[origin.name] = by_name.get(origin.name, 0.0) + float(value)
    return by_row, by_name


def solve_lp(
    program: IntervalLinearProgram,
    objective: tuple[str, str],
    max_iterations: int | None = None,
) -> SimplexSolution:
    """Minimize or maximize one variable over the midpoint program.

    ``objective`` is ``(variable, "min" | "max")``.
    """
    variable, direction = objective
    if variable not in program.variables:
        raise ValueError(f"unknown objective variable {variable!r}")
    if direction not in {"min", "max"}:
        raise ValueError(f"direction must be 'min' or 'max', not {direction!r}")

    names = program.variables
    matrix, rhs, signs, origins = _standard_form(program)
    m = matrix.shape[0]
    limit = max_iterations or ITERATIONS_PER_DIMENSION * (len(program.rows) + len(names))
    tableau = _Tableau(matrix, rhs)

    phase_one_costs = np.zeros(tableau.columns)
    phase_one_costs[tableau.first_artificial :] = 1.0
    status = tableau.run(phase_one_costs, limit)
    if status == ITERATION_LIMIT:
        logger.warning("phase 1 hit the iteration limit (%d)", limit)
        return SimplexSolution(ITERATION_LIMIT, iterations=tableau.iterations)
    infeasibility = float(phase_one_costs[tableau.basis] @ tableau.rhs)
    if infeasibility > FEASIBILITY_TOL * (1.0 + (float(np.max(np.abs(rhs))) if m else 0.0)):
        duals = _basis_duals(tableau, matrix, phase_one_costs, signs)
        farkas, farkas_box = _collect(duals, origins, len(program.rows))
        logger.debug("phase 1 ended with infeasibility %.3e", infeasibility)
        return SimplexSolution(
            INFEASIBLE,
            farkas=farkas,
            farkas_box=farkas_box,
            iterations=tableau.iterations,
        )
    tableau.drive_out_artificials()

    sense = 1.0 if direction == "min" else -1.0
    costs = np.zeros(tableau.columns)
    j = names.index(variable)
    costs[2 * j] = sense
    costs[2 * j + 1] = -sense
    status = tableau.run(costs, limit)
    if status == ITERATION_LIMIT:
        logger.warning("phase 2 hit the iteration limit (%d)", limit)
        return SimplexSolution(ITERATION_LIMIT, iterations=tableau.iterations)

    values = tableau.basic_values()
    primal = {name: float(values[2 * k] - values[2 * k + 1]) for k, name in enumerate(names)}
    if status == UNBOUNDED:
        step = np.zeros(tableau.columns)
        step[tableau.unbounded_column] = 1.0
        for row, column in enumerate(tableau.basis):
            step[column] -= tableau.table[row, tableau.unbounded_column]
        ray = {name: float(step[2 * k] - step[2 * k + 1]) for k, name in enumerate(names)}
        return SimplexSolution(UNBOUNDED, primal=primal, ray=ray, iterations=tableau.iterations)

    duals, box_duals = _collect(_basis_duals(tableau, matrix, costs, signs), origins, len(program.rows))
    return SimplexSolution(
        OPTIMAL,
        objective=primal[variable],
        primal=primal,
        duals=duals,
        box_duals=box_duals,
        iterations=tableau.iterations,
    )

"""Certified bounds from approximate multipliers, and the per-variable enclosure loop.

For multipliers y and rows ``a_i x in [L_i, U_i]`` every feasible x satisfies

    v = r.x + sum_i y_i a_i x  >=  inf(r.B) + sum_i (y_i L_i if y_i >= 0 else y_i U_i)

with the interval residual ``r = e_v - sum_i y_i A_i``. Evaluating the right side
with outward rounding gives a bound that holds whatever the quality of y.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import logging
import math

from src.interval import INF, ONE, ZERO, Interval, add_down, dot_lower, mul, mul_down, neg, sub, width
from src.models import Box, IntervalLinearProgram, LinearForm
from src.output import print_outward
from src.simplex import INFEASIBLE, OPTIMAL, SimplexSolution, solve_lp

logger = logging.getLogger(__name__)

DEFAULT_SWEEPS = 3
DEFAULT_THRESHOLD = 0.01


@dataclass(slots=True)
class SafeBoundReport:
    bound: float
    residual: LinearForm
    used_duals: dict[int, float]


@dataclass(slots=True)
class TightenStats:
    sweeps: int = 0
    simplex_iterations: int = 0
    solves: int = 0
    failures: int = 0
    history: list[Box] = field(default_factory=list)


def _clamped(program: IntervalLinearProgram, duals: dict[int, float]) -> dict[int, float]:
    used: dict[int, float] = {}
    for index, value in duals.items():
        if index >= len(program.rows) or not value or math.isnan(value):
            continue
        bound = program.rows[index].bound
        if value > 0 and bound.lo == -INF:
            continue
        if value < 0 and bound.hi == INF:
            continue
        used[index] = value
    return used


def _certified_bound(
    program: IntervalLinearProgram,
    objective: dict[str, Interval],
    duals: dict[int, float],
    box: Box,
) -> SafeBoundReport:
    used = _clamped(program, duals)
    residual = dict(objective)
    for index, value in used.items():
        multiplier = Interval.point(value)
        for name, coefficient in program.rows[index].form.coefficients.items():
            residual[name] = sub(residual.get(name, ZERO), mul(multiplier, coefficient))
    bound = dot_lower(residual, box)
    for index, value in used.items():
        row_bound = program.rows[index].bound
        bound = add_down(bound, mul_down(value, row_bound.lo if value > 0 else row_bound.hi))
    return SafeBoundReport(bound, LinearForm(residual), used)


def safe_lower_bound(
    program: IntervalLinearProgram,
    objective: str,
    duals: dict[int, float],
    box: Box,
    negate: bool = False,
) -> SafeBoundReport:
    """Rigorous lower bound of ``v`` (or of ``-v`` when ``negate``) over the program.

    Multipliers with a sign the row cannot support are dropped; the result is
    sound for any input and -inf when nothing can be certified.
    """
    return _certified_bound(program, {objective: neg(ONE) if negate else ONE}, duals, box)


def certify_infeasible(program: IntervalLinearProgram, farkas: dict[int, float], box: Box) -> bool:
    """True when the multipliers prove, rigorously, that no point of ``box`` is feasible."""
    return _certified_bound(program, {}, farkas, box).bound > 0


def _certify_direction(
    program: IntervalLinearProgram, name: str, direction: str, max_iterations: int | None
) -> tuple[str, str, float | None, bool, SimplexSolution]:
    solution = solve_lp(program, (name, direction), max_iterations)
    if solution.status == OPTIMAL:
        report = safe_lower_bound(program, name, solution.duals, program.box, negate=direction == "max")
        value = report.bound if direction == "min" else -report.bound
        logger.debug("%s %s: simplex %.17g certified %.17g", direction, name, solution.objective, value)
        return name, direction, value, False, solution
    if solution.status == INFEASIBLE:
        proven = certify_infeasible(program, solution.farkas, program.box)
        logger.debug("%s %s: simplex reports infeasible, certified=%s", direction, name, proven)
        return name, direction, None, proven, solution
    logger.debug("%s %s: simplex status %s, keeping prior interval", direction, name, solution.status)
    return name, direction, None, False, solution


def _improved(old: Interval, new: Interval, threshold: float) -> bool:
    old_width, new_width = width(old), width(new)
    if math.isinf(old_width):
        return not math.isinf(new_width) or (old.lo, old.hi) != (new.lo, new.hi)
    if old_width == 0:
        return False
    return (old_width - new_width) >= threshold * old_width


def tighten_box(
    program: IntervalLinearProgram,
    sweeps: int = DEFAULT_SWEEPS,
    threshold: float = DEFAULT_THRESHOLD,
    *,
    workers: int = 1,
    max_iterations: int | None = None,
    stats: TightenStats | None = None,
) -> Box:
    """Certified min/max per variable, intersected into the box, repeated in sweeps.

    Within a sweep every solve sees the box from the start of the sweep; the
    certified bounds are intersected at the end of the sweep.
    """
    stats = stats if stats is not None else TightenStats()
    box = program.box
    if program.infeasible or box.infeasible:
        return Box.infeasible_box(program.variables, program.infeasible or box.infeasible or "infeasible")

    jobs = [(name, direction) for name in program.variables for direction in ("min", "max")]
    for sweep in range(sweeps):
        current = program.with_box(box)
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(lambda job: _certify_direction(current, *job, max_iterations), jobs))
        else:
            results = [_certify_direction(current, name, direction, max_iterations) for name, direction in jobs]

        updated = box
        for name, direction, value, proven_infeasible, solution in results:
            stats.solves += 1
            stats.simplex_iterations += solution.iterations
            if proven_infeasible:
                stats.sweeps = sweep + 1
                return Box.infeasible_box(program.variables, "certified infeasible by phase-1 multipliers")
            if value is None:
                if solution.status != INFEASIBLE:
                    stats.failures += 1
                continue
            side = Interval(value, INF) if direction == "min" else Interval(-INF, value)
            updated = updated.with_interval(name, side)
        stats.sweeps = sweep + 1
        stats.history.append(updated)
        if updated.infeasible:
            logger.info("certified bounds crossed in sweep %d: %s", sweep + 1, updated.infeasible)
            return Box.infeasible_box(program.variables, "certified bounds cross")

        improved = [name for name in program.variables if _improved(box[name], updated[name], threshold)]
        logger.debug("sweep %d improved %s", sweep + 1, improved)
        box = updated
        if not improved:
            break
    return box


def enclosure_to_constraints(box: Box, digits: int = 17) -> tuple[list[str], bool]:
    """Single-variable statements equivalent to the box, and whether it is feasible."""
    if box.infeasible:
        return ["1 = 0;"], False
    statements: list[str] = []
    for name, value in box.items():
        lo, hi = print_outward(value, digits)
        if not math.isinf(value.lo):
            statements.append(f"{lo} <= {name};")
        if not math.isinf(value.hi):
            statements.append(f"{name} <= {hi};")
    return statements, True

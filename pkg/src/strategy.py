"""Split the relaxed rows, run Gauss on the thin equations, then LIN on everything."""

from __future__ import annotations

from dataclasses import dataclass, field
import logging

from src.gauss import interval_gauss
from src.interval import mid, width
from src.model import Model, evaluate_ranges
from src.models import Box, IntervalLinearProgram, Row
from src.relax import relax
from src.safebound import DEFAULT_SWEEPS, DEFAULT_THRESHOLD, TightenStats, tighten_box

logger = logging.getLogger(__name__)

LIN_ONLY = "lin"
GAUSS_ONLY = "gauss"
COMBINED = "combined"
MODES = (LIN_ONLY, GAUSS_ONLY, COMBINED)
DEFAULT_THIN_EPS = 1e-10


@dataclass(slots=True)
class SolverOptions:
    mode: str = COMBINED
    order: tuple[str, ...] | None = None
    thin_eps: float = DEFAULT_THIN_EPS
    sweeps: int = DEFAULT_SWEEPS
    threshold: float = DEFAULT_THRESHOLD
    workers: int = 1
    max_iterations: int | None = None


@dataclass(slots=True)
class RunReport:
    mode: str
    stages: dict[str, Box] = field(default_factory=dict)
    sweeps: int = 0
    simplex_iterations: int = 0
    gauss_resolved: int = 0
    thin_rows: int = 0
    infeasible_stage: str | None = None
    program: IntervalLinearProgram | None = None


def split_thin(program: IntervalLinearProgram, thin_eps: float = DEFAULT_THIN_EPS) -> tuple[list[Row], list[Row]]:
    """Rows whose bound is (relatively) thin, and the rest."""
    equations: list[Row] = []
    rest: list[Row] = []
    for row in program.rows:
        bound = row.bound
        if bound.is_bounded and width(bound) <= thin_eps * max(1.0, abs(mid(bound))):
            equations.append(row)
        else:
            rest.append(row)
    return equations, rest


def _stop(report: RunReport, stage: str, box: Box, variables: tuple[str, ...]) -> tuple[Box, RunReport]:
    report.infeasible_stage = stage
    logger.info("infeasible at stage %s: %s", stage, box.infeasible)
    result = box if box.infeasible else Box.infeasible_box(variables, f"infeasible at {stage}")
    report.stages[stage] = result
    return result, report


def _columns(rows: list[Row] | tuple[Row, ...]) -> set[str]:
    return {name for row in rows for name in row.form.coefficients}


def _order_within(rows: list[Row] | tuple[Row, ...], order: tuple[str, ...] | None) -> tuple[str, ...] | None:
    if order is None:
        return None
    columns = _columns(rows)
    dropped = [name for name in order if name not in columns]
    if dropped:
        logger.warning(
            "elimination order entries %s appear in none of %d rows; skipping them", ", ".join(dropped), len(rows)
        )
    return tuple(name for name in order if name in columns)


def _gauss(report: RunReport, rows: list[Row] | tuple[Row, ...], box: Box, order: tuple[str, ...] | None) -> Box:
    result = interval_gauss(rows, box, order)
    report.gauss_resolved = max(report.gauss_resolved, len(result.resolved))
    logger.info("gauss over %d rows resolved %d variables", len(rows), len(result.resolved))
    return result.box


def _lin(report: RunReport, program: IntervalLinearProgram, box: Box, options: SolverOptions) -> Box:
    stats = TightenStats()
    box = tighten_box(
        program.with_box(box),
        options.sweeps,
        options.threshold,
        workers=options.workers,
        max_iterations=options.max_iterations,
        stats=stats,
    )
    report.sweeps += stats.sweeps
    report.simplex_iterations += stats.simplex_iterations
    logger.info("lin finished after %d sweeps, %d simplex iterations", stats.sweeps, stats.simplex_iterations)
    return box


def solve(model: Model, options: SolverOptions | None = None) -> tuple[Box, RunReport]:
    """Run the selected pipeline and return the enclosure with a per-stage report.

    The combined box is intersected with the gauss-only and lin-only boxes, so
    it is never wider than either on any side.
    """
    options = options or SolverOptions()
    if options.mode not in MODES:
        raise ValueError(f"unknown solver mode {options.mode!r}")
    report = RunReport(options.mode)
    variables = tuple(model.variables)

    model = evaluate_ranges(model)
    if model.infeasible:
        return _stop(report, "ranges", Box.infeasible_box(variables, model.infeasible), variables)

    program = relax(model)
    report.program = program
    box = program.box
    report.stages["relax"] = box
    logger.info("relaxed to %d rows over %d variables", len(program.rows), len(program.variables))
    if program.infeasible:
        return _stop(report, "relax", box, variables)

    if options.mode == LIN_ONLY:
        if options.order is not None:
            logger.warning("elimination order is ignored by the lin solver")
        box = _lin(report, program, box, options)
        report.stages["lin"] = box
        if box.infeasible:
            return _stop(report, "lin", box, variables)
        return box, report

    if options.mode == GAUSS_ONLY:
        report.thin_rows = len(program.rows)
        if program.rows:
            box = _gauss(report, program.rows, box, options.order)
            report.stages["gauss"] = box
            if box.infeasible:
                return _stop(report, "gauss", box, variables)
        return box, report

    equations = split_thin(program, options.thin_eps)[0]
    report.thin_rows = len(equations)
    if equations:
        narrowed = _gauss(report, equations, box, _order_within(equations, options.order))
        if len(equations) < len(program.rows):
            narrowed = narrowed.intersect(_gauss(report, program.rows, box, _order_within(program.rows, options.order)))
        report.stages["gauss"] = narrowed
        if narrowed.infeasible:
            return _stop(report, "gauss", narrowed, variables)
        result = _lin(report, program, narrowed, options).intersect(narrowed)
        if result.infeasible:
            return _stop(report, "lin", result, variables)
        result = result.intersect(_lin(report, program, box, options))
    else:
        result = _lin(report, program, box, options)
        if result.infeasible:
            return _stop(report, "lin", result, variables)
        if program.rows:
            # keeps the result inside the gauss-only box
            eliminated = _gauss(report, program.rows, box, _order_within(program.rows, options.order))
            if eliminated.infeasible:
                return _stop(report, "gauss", eliminated, variables)
            result = result.intersect(eliminated)

    report.stages["lin"] = result
    if result.infeasible:
        return _stop(report, "lin", result, variables)
    return result, report

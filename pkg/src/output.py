"""Rendering certified boxes as text statements or JSON."""

from __future__ import annotations

from decimal import ROUND_CEILING, ROUND_FLOOR, Context, Decimal
import math
from typing import TYPE_CHECKING

from src.interval import Interval
from src.models import Box
from src.schemas import Bounds, RunReportModel, SolveResponse

if TYPE_CHECKING:
    from src.strategy import RunReport


def _outward(value: float, digits: int, rounding: str) -> str:
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if value == 0:
        return "0"
    context = Context(prec=digits, rounding=rounding)
    rounded = context.plus(Decimal(value)).normalize(context)
    if rounded == 0:
        return "0"
    if -7 <= rounded.adjusted() < 21:
        return format(rounded, "f")
    return format(rounded, "e")


def print_outward(value: Interval, digits: int) -> tuple[str, str]:
    """Decimal endpoints with ``digits`` significant digits, rounded away from the interval."""
    if digits < 1:
        raise ValueError("digits must be at least 1")
    if value.is_empty:
        raise ValueError("cannot print an empty interval")
    return _outward(value.lo, digits, ROUND_FLOOR), _outward(value.hi, digits, ROUND_CEILING)


def render_text(box: Box, digits: int) -> str:
    if box.infeasible:
        return f"1 = 0;  # infeasible: {box.infeasible}\n"
    lines: list[str] = []
    for name, value in box.items():
        lo, hi = print_outward(value, digits)
        statements = []
        if not math.isinf(value.lo):
            statements.append(f"{lo} <= {name};")
        if not math.isinf(value.hi):
            statements.append(f"{name} <= {hi};")
        lines.append(" ".join(statements) if statements else f"# {name} is unbounded")
    return "\n".join(lines) + "\n"


def _endpoint(value: float) -> float | str:
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


def build_response(box: Box, report: RunReport) -> SolveResponse:
    """JSON payload; endpoints are the certified binary values, never re-rounded decimals."""
    summary = RunReportModel(
        sweeps=report.sweeps,
        simplex_iterations=report.simplex_iterations,
        gauss_resolved=report.gauss_resolved,
    )
    if box.infeasible:
        return SolveResponse(status="infeasible", solver=report.mode, report=summary, message=box.infeasible)
    variables = {name: Bounds(lo=_endpoint(value.lo), hi=_endpoint(value.hi)) for name, value in box.items()}
    return SolveResponse(status="solved", solver=report.mode, variables=variables, report=summary)


def render_json(box: Box, report: RunReport) -> str:
    return build_response(box, report).model_dump_json(indent=2, exclude_none=True) + "\n"

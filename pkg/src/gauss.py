"""Interval Gaussian elimination for equations with interval right-hand sides."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
import logging

from src.interval import ENTIRE, ZERO, Interval, div, intersect, mignitude, mul, sub
from src.models import Box, Row

logger = logging.getLogger(__name__)


@dataclass(slots=True)
class GaussResult:
    box: Box
    resolved: tuple[str, ...]
    progress: bool


def _is_zero(value: Interval) -> bool:
    return value.lo == 0 and value.hi == 0


class _Elimination:
    def __init__(self, rows: Sequence[Row]) -> None:
        self.matrix = [dict(row.form.coefficients) for row in rows]
        self.rhs = [row.bound for row in rows]
        self.remaining = list(range(len(rows)))
        self.pivots: list[tuple[int, str]] = []
        self.columns: list[str] = []
        for coefficients in self.matrix:
            for name in coefficients:
                if name not in self.columns:
                    self.columns.append(name)

    def best_row(self, column: str) -> int | None:
        best, best_value = None, 0.0
        for index in self.remaining:
            value = mignitude(self.matrix[index].get(column, ZERO))
            if value > best_value:
                best, best_value = index, value
        return best

    def best_pivot(self) -> tuple[int, str] | None:
        resolved = {name for _, name in self.pivots}
        best: tuple[int, str] | None = None
        best_value = 0.0
        for index in self.remaining:
            for column in self.columns:
                if column in resolved:
                    continue
                value = mignitude(self.matrix[index].get(column, ZERO))
                if value > best_value:
                    best, best_value = (index, column), value
        return best

    def eliminate(self, pivot_row: int, column: str) -> None:
        logger.debug("gauss pivot on %s in row %d", column, pivot_row)
        self.remaining.remove(pivot_row)
        self.pivots.append((pivot_row, column))
        pivot = self.matrix[pivot_row][column]
        for index in self.remaining:
            target = self.matrix[index]
            value = target.pop(column, None)
            if value is None or _is_zero(value):
                continue
            factor = div(value, pivot)
            for name, coefficient in self.matrix[pivot_row].items():
                if name == column:
                    continue
                updated = sub(target.get(name, ZERO), mul(factor, coefficient))
                if _is_zero(updated):
                    target.pop(name, None)
                else:
                    target[name] = updated
            self.rhs[index] = sub(self.rhs[index], mul(factor, self.rhs[pivot_row]))


def interval_gauss(rows: Sequence[Row], box: Box, order: Sequence[str] | None = None) -> GaussResult:
    """Forward elimination then back substitution, all in interval arithmetic.

    Variables named in ``order`` are eliminated first, in that order; after
    that the pivot with the largest mignitude is taken each step. Candidate pivots that
    contain zero are never used; their variables keep the box value.
    """
    elimination = _Elimination(rows)
    if order is not None:
        for column in order:
            if column not in elimination.columns:
                raise ValueError(f"elimination order names {column!r}, which no equation contains")
            pivot_row = elimination.best_row(column)
            if pivot_row is None:
                logger.warning("no zero-free pivot for %s; it keeps its box interval", column)
                continue
            elimination.eliminate(pivot_row, column)
    while (pivot := elimination.best_pivot()) is not None:
        elimination.eliminate(*pivot)

    if not elimination.pivots:
        return GaussResult(box, (), False)

    for index in elimination.remaining:
        if not elimination.matrix[index] and not elimination.rhs[index].contains(0.0):
            return GaussResult(Box.infeasible_box(tuple(box), "inconsistent equations after elimination"), (), True)

    current = dict(box.intervals)
    for pivot_row, column in reversed(elimination.pivots):
        accumulated = elimination.rhs[pivot_row]
        for name, coefficient in elimination.matrix[pivot_row].items():
            if name != column:
                accumulated = sub(accumulated, mul(coefficient, current.get(name, ENTIRE)))
        value = div(accumulated, elimination.matrix[pivot_row][column])
        narrowed = intersect(current.get(column, ENTIRE), value)
        if narrowed.is_empty:
            reason = f"elimination emptied the interval of {column}"
            return GaussResult(Box.infeasible_box(tuple(box), reason), (), True)
        current[column] = narrowed

    resolved = tuple(column for _, column in elimination.pivots)
    return GaussResult(box.intersect({name: current[name] for name in resolved}), resolved, True)

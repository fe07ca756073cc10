"""Linear relaxation: the interval linear program that follows from a model."""

from __future__ import annotations

import logging
import math

from src.interval import ENTIRE, INF, ZERO, Interval, div, intersect, mid, mignitude, neg, sub
from src.model import BINARY, COMPARISON, CONSTANT, FUNCTION, UNARY, VARIABLE, Model, format_node
from src.models import Box, IntervalLinearProgram, LinearForm, Row

logger = logging.getLogger(__name__)

_RELATION_BOUNDS = {
    "=": ZERO,
    "<=": Interval(-INF, 0.0),
    ">=": Interval(0.0, INF),
}


def _divided(form: LinearForm, divisor: Interval) -> LinearForm:
    return LinearForm(
        {name: div(value, divisor) for name, value in form.coefficients.items()},
        div(form.constant, divisor),
    )


def linear_form_of(model: Model, index: int, cache: dict[int, LinearForm | None] | None = None) -> LinearForm | None:
    """Linear form of a node's expression, or None when the expression is nonlinear."""
    if cache is None:
        cache = {}
    if index in cache:
        return cache[index]
    node = model.node(index)
    result: LinearForm | None = None
    if node.kind == VARIABLE:
        result = LinearForm.unit(str(node.payload))
    elif node.kind == CONSTANT:
        result = LinearForm.of_constant(Interval.from_fraction(node.payload))
    elif node.kind == UNARY:
        operand = linear_form_of(model, node.operands[0], cache)
        result = operand.negated() if operand is not None else None
    elif node.kind == BINARY:
        left = linear_form_of(model, node.operands[0], cache)
        right = linear_form_of(model, node.operands[1], cache)
        if left is not None and right is not None:
            op = node.payload
            if op == "+":
                result = left.plus(right)
            elif op == "-":
                result = left.minus(right)
            elif op == "*":
                if left.is_constant:
                    result = right.scaled(left.constant)
                elif right.is_constant:
                    result = left.scaled(right.constant)
            elif right.is_constant and mignitude(right.constant) > 0:
                result = _divided(left, right.constant)
    cache[index] = result
    return result


def _oriented(form: LinearForm, bound: Interval, order: tuple[str, ...]) -> tuple[LinearForm, Interval]:
    # Canonical sign: the first variable (in declaration order) has a positive coefficient.
    for name in order:
        coefficient = form.coefficients.get(name)
        if coefficient is None:
            continue
        if mid(coefficient) < 0:
            return form.negated(), neg(bound)
        break
    return form, bound


def _row_key(form: LinearForm) -> tuple:
    return tuple(sorted((name, value.lo, value.hi) for name, value in form.coefficients.items()))


def relax(model: Model) -> IntervalLinearProgram:
    variables = tuple(model.variables)
    if model.infeasible:
        return IntervalLinearProgram(variables, (), Box.infeasible_box(variables, model.infeasible), model.infeasible)

    cache: dict[int, LinearForm | None] = {}
    rows: list[Row] = []

    for root in model.roots:
        node = model.node(root)
        assert node.kind == COMPARISON and isinstance(node.payload, tuple)
        label = format_node(model, root)
        chain: dict[tuple, Row] = {}
        for left, relation, right in zip(node.operands, node.payload, node.operands[1:]):
            left_form = linear_form_of(model, left, cache)
            right_form = linear_form_of(model, right, cache)
            if left_form is None or right_form is None:
                continue
            difference = left_form.minus(right_form)
            bound = sub(_RELATION_BOUNDS[relation], difference.constant)
            form, bound = _oriented(difference.without_constant(), bound, variables)
            key = _row_key(form)
            if key in chain:
                bound = intersect(chain[key].bound, bound)
            chain[key] = Row(form, bound, label)
        rows.extend(chain.values())

    seen: set[int] = set()
    for index, node in enumerate(model.nodes):
        if node.kind not in {UNARY, BINARY, FUNCTION} or linear_form_of(model, index, cache) is not None:
            continue
        for operand in node.operands:
            form = linear_form_of(model, operand, cache)
            if operand in seen or form is None or form.is_constant:
                continue
            enclosure = model.node(operand).enclosure
            if math.isinf(enclosure.lo) and math.isinf(enclosure.hi):
                continue
            seen.add(operand)
            bound = sub(enclosure, form.constant)
            oriented, bound = _oriented(form.without_constant(), bound, variables)
            rows.append(Row(oriented, bound, f"range of {format_node(model, operand)}"))

    box = Box(dict(model.variables))
    kept: list[Row] = []
    for row in rows:
        if row.bound.is_empty:
            reason = f"constraint '{row.label}' has an empty bound"
            return IntervalLinearProgram(variables, (), Box.infeasible_box(variables, reason), reason)
        coefficients = row.form.coefficients
        if not coefficients:
            if not row.bound.contains(0.0):
                reason = f"constraint '{row.label}' is violated"
                return IntervalLinearProgram(variables, (), Box.infeasible_box(variables, reason), reason)
            continue
        if len(coefficients) == 1:
            (name, coefficient), = coefficients.items()
            if mignitude(coefficient) > 0:
                box = box.with_interval(name, div(row.bound, coefficient))
                continue
        if row.bound == ENTIRE:
            continue
        kept.append(row)

    if box.infeasible:
        logger.info("relaxation proved infeasibility: %s", box.infeasible)
    logger.debug("relaxation produced %d rows over %d variables", len(kept), len(variables))
    return IntervalLinearProgram(variables, tuple(kept), box, box.infeasible)

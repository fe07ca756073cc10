from fractions import Fraction
import logging
import random

import pytest

from src.gauss import interval_gauss
from src.interval import INF, Interval, width
from src.model import evaluate_ranges, parse
from src.models import Box, LinearForm, Row
from src.relax import relax

SQUARE = "0 <= x + y <= 1; 0 <= x - y <= 1;"
ILL_CONDITIONED = "x + y = 3e-7; x + (1 + 1e-7)*y = 1e-7; x in [-1e7, 1e7]; y in [-1e7, 1e7];"


def _program(text: str):
    return relax(evaluate_ranges(parse(text)))


def _close(value: Interval, lo: float, hi: float) -> bool:
    return value.lo <= lo <= value.lo + 1e-12 and value.hi - 1e-12 <= hi <= value.hi


def test_eliminating_x_first_on_the_square() -> None:
    program = _program(SQUARE)

    result = interval_gauss(program.rows, program.box, order=("x", "y"))

    assert result.progress
    assert result.resolved == ("x", "y")
    assert _close(result.box["x"], -0.5, 1.5)
    assert _close(result.box["y"], -0.5, 0.5)


def test_eliminating_y_first_on_the_square() -> None:
    program = _program(SQUARE)

    result = interval_gauss(program.rows, program.box, order=("y", "x"))

    assert _close(result.box["x"], 0.0, 1.0)
    assert _close(result.box["y"], -1.0, 1.0)


def test_ill_conditioned_equations_are_resolved_tightly() -> None:
    program = _program(ILL_CONDITIONED)

    result = interval_gauss(program.rows, program.box)

    x, y = result.box["x"], result.box["y"]
    assert Fraction(x.lo) <= 2 + Fraction(3, 10**7) <= Fraction(x.hi)
    assert -2.0 in y
    assert width(x) <= 1e-6
    assert width(y) <= 1e-6


def test_result_stays_inside_the_input_box() -> None:
    program = _program("x in [0, 0.25]; y in [-3, 3]; " + SQUARE)

    result = interval_gauss(program.rows, program.box)

    assert result.box.is_subset(program.box)


def test_pivots_containing_zero_are_skipped(caplog: pytest.LogCaptureFixture) -> None:
    rows = [Row(LinearForm({"x": Interval(-1.0, 1.0), "y": Interval(1.0, 1.0)}), Interval(0.0, 1.0))]
    box = Box({"x": Interval(0.0, 2.0), "y": Interval(-10.0, 10.0)})

    with caplog.at_level(logging.WARNING, logger="src.gauss"):
        result = interval_gauss(rows, box, order=("x",))

    assert "no zero-free pivot for x" in caplog.text
    assert result.resolved == ("y",)
    assert result.box["x"] == Interval(0.0, 2.0)
    assert result.box["y"] == Interval(-2.0, 3.0)


def test_no_usable_pivot_leaves_the_box_alone() -> None:
    rows = [Row(LinearForm({"x": Interval(-1.0, 1.0)}), Interval(1.0, 2.0))]
    box = Box({"x": Interval(0.0, 2.0)})

    result = interval_gauss(rows, box)

    assert not result.progress
    assert result.box == box


def test_inconsistent_equations_give_an_infeasible_box() -> None:
    program = _program("x + y = 1; 2*x + 2*y = 3;")

    result = interval_gauss(program.rows, program.box)

    assert result.box.infeasible is not None


def test_empty_back_substitution_gives_an_infeasible_box() -> None:
    program = _program("x + y <= 1; x + 2*y >= 3; y <= 1;")

    result = interval_gauss(program.rows, program.box)

    assert result.box.infeasible is not None


def test_unknown_order_name_is_rejected() -> None:
    program = _program(SQUARE)

    with pytest.raises(ValueError, match="no equation contains"):
        interval_gauss(program.rows, program.box, order=("z",))


def _solve_exact(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    size = len(matrix)
    rows = [list(matrix[i]) + [rhs[i]] for i in range(size)]
    for column in range(size):
        pivot = next((i for i in range(column, size) if rows[i][column] != 0), None)
        if pivot is None:
            return None
        rows[column], rows[pivot] = rows[pivot], rows[column]
        for i in range(size):
            if i != column and rows[i][column] != 0:
                factor = rows[i][column] / rows[column][column]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[column])]
    return [rows[i][size] / rows[i][i] for i in range(size)]


def _rows(names: list[str], matrix: list[list[Fraction]], bounds: list[Interval]) -> list[Row]:
    return [
        Row(LinearForm({name: Interval.point(float(a)) for name, a in zip(names, line) if a != 0}), bound)
        for line, bound in zip(matrix, bounds)
    ]


def _inside(value: Interval, exact: Fraction) -> bool:
    return (value.lo == -INF or Fraction(value.lo) <= exact) and (value.hi == INF or exact <= Fraction(value.hi))


def _realize(bound: Interval, rng: random.Random) -> Fraction:
    t = Fraction(rng.randint(0, 1000), 1000)
    return Fraction(bound.lo) + t * (Fraction(bound.hi) - Fraction(bound.lo))


def test_random_interval_systems_enclose_every_realization() -> None:
    rng = random.Random(4242)
    for _ in range(200):
        size = rng.randint(2, 4)
        names = [f"x{index}" for index in range(size)]
        while True:
            matrix = [[Fraction(rng.randint(-5, 5)) for _ in names] for _ in names]
            if _solve_exact(matrix, [Fraction(0)] * size) is not None:
                break
        centers = [Fraction(rng.randint(-40, 40), 4) for _ in names]
        radii = [Fraction(rng.randint(0, 8), 8) for _ in names]
        bounds = [Interval(float(c - r), float(c + r)) for c, r in zip(centers, radii)]

        result = interval_gauss(_rows(names, matrix, bounds), Box.entire(names))

        assert result.box.infeasible is None
        for _ in range(100):
            rhs = [_realize(bound, rng) for bound in bounds]
            solution = _solve_exact(matrix, rhs)
            assert all(_inside(result.box[name], value) for name, value in zip(names, solution))


def test_triangular_system_with_exact_operations_is_solved_exactly() -> None:
    rows = _rows(
        ["x", "y", "z"],
        [[Fraction(v) for v in line] for line in ((2, 1, -1), (0, 4, 1), (0, 0, 2))],
        [Interval.point(3.0), Interval.point(9.0), Interval.point(2.0)],
    )

    result = interval_gauss(rows, Box.entire(["x", "y", "z"]), order=("x", "y", "z"))

    assert result.resolved == ("x", "y", "z")
    assert result.box["x"] == Interval(1.0, 1.0)
    assert result.box["y"] == Interval(2.0, 2.0)
    assert result.box["z"] == Interval(1.0, 1.0)


def _upper_entry(rng: random.Random, i: int, j: int) -> Fraction:
    if j == i:
        return Fraction(rng.choice((1, 2, 3, 5, 7)))
    return Fraction(rng.randint(-3, 3)) if j > i else Fraction(0)


def test_triangular_systems_match_exact_back_substitution() -> None:
    rng = random.Random(99)
    for _ in range(100):
        size = rng.randint(2, 5)
        names = [f"x{index}" for index in range(size)]
        matrix = [[_upper_entry(rng, i, j) for j in range(size)] for i in range(size)]
        rhs = [Fraction(rng.randint(-20, 20)) for _ in names]
        rows = _rows(names, matrix, [Interval.point(float(b)) for b in rhs])

        result = interval_gauss(rows, Box.entire(names), order=tuple(names))

        solution = _solve_exact(matrix, rhs)
        for name, value in zip(names, solution):
            enclosure = result.box[name]
            assert Fraction(enclosure.lo) <= value <= Fraction(enclosure.hi)
            assert width(enclosure) <= 1e-12 * (1 + abs(float(value))) * 4 ** size

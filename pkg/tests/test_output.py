from fractions import Fraction
import json
import random

import pytest

from src.interval import ENTIRE, INF, Interval
from src.models import Box
from src.output import build_response, print_outward, render_json, render_text
from src.strategy import RunReport


def test_print_outward_rounds_both_ends_away() -> None:
    assert print_outward(Interval(1.9437, 2.0361), 2) == ("1.9", "2.1")
    assert print_outward(Interval(-2.0361, -1.9437), 3) == ("-2.04", "-1.94")


@pytest.mark.parametrize("digits", [1, 5, 17])
def test_print_outward_of_zero(digits: int) -> None:
    assert print_outward(Interval(0.0, 0.0), digits) == ("0", "0")


def test_print_outward_of_exact_and_extreme_values() -> None:
    assert print_outward(Interval(0.5, 3.0), 17) == ("0.5", "3")
    assert print_outward(ENTIRE, 3) == ("-inf", "inf")
    assert print_outward(Interval(1e25, 1e25), 3) == ("1e+25", "1.01e+25")
    assert print_outward(Interval(1e-9, 1e-9), 3) == ("1e-9", "1.01e-9")


def test_print_outward_rejects_bad_input() -> None:
    with pytest.raises(ValueError, match="digits"):
        print_outward(Interval(0.0, 1.0), 0)
    with pytest.raises(ValueError, match="empty"):
        print_outward(Interval(INF, -INF), 3)


def test_printed_endpoints_contain_the_interval() -> None:
    rng = random.Random(31337)
    for _ in range(10_000):
        scale = 10.0 ** rng.randint(-12, 12)
        a, b = rng.uniform(-1.0, 1.0) * scale, rng.uniform(-1.0, 1.0) * scale
        value = Interval(min(a, b), max(a, b))
        lo, hi = print_outward(value, rng.randint(1, 12))
        assert Fraction(lo) <= Fraction(value.lo)
        assert Fraction(hi) >= Fraction(value.hi)


def test_render_text_writes_one_line_per_variable() -> None:
    box = Box({"x": Interval(0.0, 1.0), "y": Interval(-INF, 5.0), "z": ENTIRE})

    assert render_text(box, 17) == "0 <= x; x <= 1;\ny <= 5;\n# z is unbounded\n"


def test_render_text_with_two_digits() -> None:
    box = Box({"x": Interval(1.9437, 2.0361), "y": Interval(-2.0361, -1.9437)})

    assert render_text(box, 2) == "1.9 <= x; x <= 2.1;\n-2.1 <= y; y <= -1.9;\n"


def test_render_text_of_infeasible_box() -> None:
    box = Box.infeasible_box(("x",), "crossed")

    assert render_text(box, 17) == "1 = 0;  # infeasible: crossed\n"


def test_json_keeps_binary_endpoints_and_spells_infinities() -> None:
    box = Box({"x": Interval(0.1, 0.30000000000000004), "y": Interval(-INF, 2.0)})
    report = RunReport("lin", sweeps=2, simplex_iterations=9)

    payload = json.loads(render_json(box, report))

    assert payload["status"] == "solved"
    assert payload["solver"] == "lin"
    assert payload["variables"] == {"x": {"lo": 0.1, "hi": 0.30000000000000004}, "y": {"lo": "-inf", "hi": 2.0}}
    assert payload["report"] == {"sweeps": 2, "simplex_iterations": 9, "gauss_resolved": 0}
    assert "message" not in payload


def test_json_of_infeasible_box_carries_the_reason() -> None:
    response = build_response(Box.infeasible_box(("x",), "crossed"), RunReport("combined"))

    assert response.status == "infeasible"
    assert response.variables == {}
    assert response.message == "crossed"


def test_json_of_infeasible_box_spells_out_the_message() -> None:
    payload = json.loads(render_json(Box.infeasible_box(("x",), "crossed"), RunReport("lin")))

    assert payload["status"] == "infeasible"
    assert payload["message"] == "crossed"


def test_json_rendering_is_deterministic() -> None:
    box = Box({"x": Interval(-0.5, 1.5), "y": Interval(-0.5, 0.5)})
    report = RunReport("gauss", gauss_resolved=2)

    assert render_json(box, report) == render_json(box, report)
    assert render_json(box, report).endswith("}\n")

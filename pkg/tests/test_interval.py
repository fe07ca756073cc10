from fractions import Fraction
import math
import random

import pytest

from src.interval import (
    DOMAIN_VIOLATION,
    ENTIRE,
    INF,
    UNDEFINED_QUOTIENT,
    ZERO,
    Interval,
    add,
    add_down,
    add_up,
    div,
    dot_lower,
    eval_std,
    hull,
    intersect,
    is_subset,
    mid,
    mignitude,
    mul,
    mul_down,
    mul_up,
    neg,
    sub,
    width,
)


def _random_interval(rng: random.Random) -> Interval:
    scale = 10.0 ** rng.randint(-8, 8)
    a = rng.uniform(-1.0, 1.0) * scale
    b = rng.uniform(-1.0, 1.0) * scale
    if rng.random() < 0.1:
        return Interval.point(a)
    return Interval(min(a, b), max(a, b))


def _members(value: Interval, rng: random.Random) -> list[Fraction]:
    points = [Fraction(value.lo), Fraction(value.hi)]
    for _ in range(3):
        t = Fraction(rng.randint(0, 1000), 1000)
        points.append(Fraction(value.lo) + t * (Fraction(value.hi) - Fraction(value.lo)))
    return points


def _encloses(value: Interval, exact: Fraction) -> bool:
    return Fraction(value.lo) <= exact <= Fraction(value.hi)


@pytest.mark.parametrize(
    "operation, exact",
    [
        (add, lambda x, y: x + y),
        (sub, lambda x, y: x - y),
        (mul, lambda x, y: x * y),
    ],
)
def test_arithmetic_encloses_every_exact_result(operation, exact) -> None:
    rng = random.Random(20240611)
    for _ in range(10_000):
        a, b = _random_interval(rng), _random_interval(rng)
        result = operation(a, b)
        for x in _members(a, rng)[:3]:
            for y in _members(b, rng)[:2]:
                assert _encloses(result, exact(x, y)), (a, b, x, y, result)


def test_division_encloses_every_exact_quotient() -> None:
    rng = random.Random(7)
    for _ in range(10_000):
        a, b = _random_interval(rng), _random_interval(rng)
        if b.lo <= 0 <= b.hi:
            continue
        result = div(a, b)
        for x in _members(a, rng)[:3]:
            for y in _members(b, rng)[:2]:
                assert _encloses(result, x / y)


def _inner(value: Interval, rng: random.Random) -> Interval:
    a, b = (float(point) for point in _members(value, rng)[2:4])
    return Interval(min(a, b), max(a, b))


@pytest.mark.parametrize("operation", [add, sub, mul, div])
def test_operations_are_inclusion_monotone(operation) -> None:
    rng = random.Random(1729)
    for _ in range(2_000):
        a, b = _random_interval(rng), _random_interval(rng)
        if operation is div and b.lo <= 0 <= b.hi:
            continue
        inner_a, inner_b = _inner(a, rng), _inner(b, rng)
        assert is_subset(inner_a, a) and is_subset(inner_b, b)
        assert is_subset(operation(inner_a, inner_b), operation(a, b)), (a, b, inner_a, inner_b)


def test_difference_with_itself_contains_zero() -> None:
    rng = random.Random(11)
    for _ in range(10_000):
        a = _random_interval(rng)
        assert 0.0 in sub(a, a)
    assert 0.0 in sub(ENTIRE, ENTIRE)


def test_double_negation_is_exact() -> None:
    rng = random.Random(12)
    for _ in range(10_000):
        a = _random_interval(rng)
        assert neg(neg(a)) == a
    assert neg(neg(ENTIRE)) == ENTIRE
    assert neg(neg(Interval(-INF, 3.0))) == Interval(-INF, 3.0)


def test_addition_rounds_outward_on_inexact_sums() -> None:
    result = add(Interval(0.1, 0.1), Interval(0.2, 0.2))

    assert result.lo < result.hi
    assert _encloses(result, Fraction(0.1) + Fraction(0.2))
    assert result.hi == math.nextafter(result.lo, INF)


def test_exact_operations_stay_thin() -> None:
    assert add(Interval(1.0, 2.0), Interval(3.0, 4.0)) == Interval(4.0, 6.0)
    assert mul(Interval(2.0, 3.0), Interval(-1.0, 1.0)) == Interval(-3.0, 3.0)
    assert div(Interval(1.0, 2.0), Interval(4.0, 4.0)) == Interval(0.25, 0.5)


def test_directed_scalars_bracket_the_exact_value() -> None:
    assert add_down(0.1, 0.2) <= Fraction(0.1) + Fraction(0.2) <= add_up(0.1, 0.2)
    assert mul_down(0.1, 3.0) <= Fraction(0.1) * 3 <= mul_up(0.1, 3.0)
    assert add_down(1e308, 1e308) == 1.7976931348623157e308
    assert add_up(1e308, 1e308) == INF


def test_division_by_zero_interval_is_an_undefined_quotient() -> None:
    result = div(Interval(1.0, 2.0), ZERO)

    assert result.is_empty
    assert result.reason == UNDEFINED_QUOTIENT


def test_division_by_interval_containing_zero() -> None:
    assert div(Interval(1.0, 2.0), Interval(-1.0, 1.0)) == ENTIRE
    assert div(Interval(1.0, 2.0), Interval(0.0, 2.0)) == Interval(0.5, INF)
    assert div(Interval(-2.0, -1.0), Interval(0.0, 4.0)) == Interval(-INF, -0.25)
    assert div(ZERO, Interval(-1.0, 1.0)) == ZERO


def test_square_root_of_negative_interval_is_a_domain_violation() -> None:
    result = eval_std("sqrt", Interval(-2.0, -1.0))

    assert result.is_empty
    assert result.reason == DOMAIN_VIOLATION
    assert eval_std("sqrt", Interval(-1.0, 4.0)) == Interval(0.0, 2.0)


def test_standard_functions_enclose_sampled_values() -> None:
    rng = random.Random(99)
    functions = {
        "sin": math.sin,
        "cos": math.cos,
        "exp": math.exp,
        "ln": math.log,
        "sqrt": math.sqrt,
        "abs": abs,
    }
    for name, fn in functions.items():
        for _ in range(500):
            lo = rng.uniform(-20.0, 20.0)
            value = Interval(lo, lo + rng.uniform(0.0, 8.0))
            if name in {"ln", "sqrt"}:
                value = Interval(abs(value.lo) + 1e-3, abs(value.lo) + 1e-3 + width(value))
            enclosure = eval_std(name, value)
            for x in (value.lo, value.hi, mid(value)):
                assert enclosure.lo <= fn(x) <= enclosure.hi


def test_sine_reaches_one_at_half_pi() -> None:
    assert eval_std("sin", Interval(1.0, 2.0)).hi == 1.0
    assert eval_std("cos", Interval(-0.5, 0.5)).hi == 1.0
    assert eval_std("sin", Interval(0.0, 100.0)) == Interval(-1.0, 1.0)


def test_ln_of_interval_touching_zero_is_unbounded_below() -> None:
    assert eval_std("ln", Interval(0.0, 1.0)).lo == -INF
    assert eval_std("ln", Interval(-1.0, 0.0)).reason == DOMAIN_VIOLATION


def test_from_fraction_is_tight_and_contains_the_rational() -> None:
    third = Interval.from_fraction(Fraction(1, 3))

    assert _encloses(third, Fraction(1, 3))
    assert third.hi == math.nextafter(third.lo, INF)
    assert Interval.from_fraction(Fraction(3, 4)) == Interval(0.75, 0.75)
    assert Interval.from_fraction(Fraction(10) ** 400).hi == INF


def test_set_operations() -> None:
    a = Interval(0.0, 2.0)
    b = Interval(1.0, 3.0)

    assert hull(a, b) == Interval(0.0, 3.0)
    assert intersect(a, b) == Interval(1.0, 2.0)
    assert intersect(a, Interval(5.0, 6.0)).is_empty
    assert is_subset(Interval(1.0, 1.5), a)
    assert not is_subset(b, a)
    assert 1.5 in a
    assert 2.5 not in a


def test_width_mid_mignitude() -> None:
    assert width(Interval(1.0, 3.0)) == 2.0
    assert width(ENTIRE) == INF
    assert mid(Interval(-2.0, 4.0)) == 1.0
    assert mid(ENTIRE) == 0.0
    assert mignitude(Interval(-1.0, 2.0)) == 0.0
    assert mignitude(Interval(-3.0, -2.0)) == 2.0
    with pytest.raises(ValueError):
        width(Interval(INF, -INF))


def test_invalid_endpoints_are_rejected() -> None:
    with pytest.raises(ValueError):
        Interval(2.0, 1.0)
    with pytest.raises(ValueError):
        Interval(math.nan, 1.0)


def test_empty_intervals_compare_equal_regardless_of_reason() -> None:
    assert div(Interval(1.0, 1.0), ZERO) == eval_std("sqrt", Interval(-2.0, -1.0))


def test_dot_lower_skips_zero_coefficients_and_treats_missing_as_entire() -> None:
    box = {"x": Interval(1.0, 2.0), "y": Interval(-1.0, 1.0)}

    assert dot_lower({"x": Interval(2.0, 2.0), "y": Interval(1.0, 1.0)}, box) == 1.0
    assert dot_lower({"x": Interval(1.0, 1.0), "z": ZERO}, box) == 1.0
    assert dot_lower({"z": Interval(1.0, 1.0)}, box) == -INF


def test_dot_lower_with_interval_coefficients_stays_below_the_exact_infimum() -> None:
    coefficients = {"x": Interval(0.1, 0.2), "y": Interval(-0.3, -0.1)}
    box = {"x": Interval(-1.0, 2.0), "y": Interval(0.0, 4.0)}
    exact = sum(
        (
            min(Fraction(c) * Fraction(v) for c in (value.lo, value.hi) for v in (box[name].lo, box[name].hi))
            for name, value in coefficients.items()
        ),
        Fraction(0),
    )

    result = dot_lower(coefficients, box)

    assert exact == Fraction(0.2) * -1 + Fraction(-0.3) * 4
    assert Fraction(result) <= exact
    assert float(exact) - result <= 1e-12


def test_operator_overloads_match_functions() -> None:
    a = Interval(1.0, 2.0)

    assert a + 1.0 == Interval(2.0, 3.0)
    assert 1.0 - a == Interval(-1.0, 0.0)
    assert -a == neg(a)
    assert a * 2.0 == Interval(2.0, 4.0)
    assert a / 2.0 == Interval(0.5, 1.0)

"""Outward-rounded interval arithmetic over IEEE-754 doubles.

Rounding is done in software: every operation is computed in round-to-nearest
and each endpoint is then moved one unit in the last place outward unless an
error-free transformation shows the nearest result is already exact. The
results are therefore valid under any thread's rounding mode.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import math
import sys
from typing import Mapping

INF = math.inf
MAX_FLOAT = sys.float_info.max
STD_FUNCTIONS = ("sin", "cos", "exp", "ln", "sqrt", "abs")

UNDEFINED_QUOTIENT = "undefined quotient"
DOMAIN_VIOLATION = "domain violation"

# Libm results are faithfully rounded on every supported platform; 4 ulp of
# padding covers that with a wide margin.
_TRANSCENDENTAL_PAD_ULPS = 4
_TWO_PI = 2.0 * math.pi
_HALF_PI = 0.5 * math.pi
# Beyond this magnitude argument reduction is not trusted and sin/cos fall back to [-1, 1].
_TRIG_ARGUMENT_LIMIT = 1.0e8

_fma = getattr(math, "fma", None)


@dataclass(frozen=True, slots=True)
class Interval:
    lo: float
    hi: float
    reason: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise ValueError("interval endpoints must not be NaN")
        if self.lo == INF and self.hi == -INF:
            return
        if self.lo > self.hi or self.lo == INF or self.hi == -INF:
            raise ValueError(f"invalid interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, value: float) -> Interval:
        value = float(value)
        return cls(value, value)

    @classmethod
    def from_fraction(cls, value: Fraction | int) -> Interval:
        """Tightest interval of doubles containing the exact rational ``value``."""
        exact = Fraction(value)
        try:
            nearest = float(exact)
        except OverflowError:
            return cls(MAX_FLOAT, INF) if exact > 0 else cls(-INF, -MAX_FLOAT)
        if math.isinf(nearest):
            return cls(MAX_FLOAT, INF) if nearest > 0 else cls(-INF, -MAX_FLOAT)
        represented = Fraction(nearest)
        if represented == exact:
            return cls(nearest, nearest)
        if represented < exact:
            return cls(nearest, math.nextafter(nearest, INF))
        return cls(math.nextafter(nearest, -INF), nearest)

    @property
    def is_empty(self) -> bool:
        return self.lo == INF

    @property
    def is_thin(self) -> bool:
        return not self.is_empty and self.lo == self.hi

    @property
    def is_bounded(self) -> bool:
        return not self.is_empty and math.isfinite(self.lo) and math.isfinite(self.hi)

    def contains(self, value: float | Fraction | Interval) -> bool:
        if isinstance(value, Interval):
            return is_subset(value, self)
        if self.is_empty:
            return False
        return self.lo <= value <= self.hi

    __contains__ = contains

    def __add__(self, other: Interval | float) -> Interval:
        return add(self, _coerce(other))

    __radd__ = __add__

    def __sub__(self, other: Interval | float) -> Interval:
        return sub(self, _coerce(other))

    def __rsub__(self, other: Interval | float) -> Interval:
        return sub(_coerce(other), self)

    def __mul__(self, other: Interval | float) -> Interval:
        return mul(self, _coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other: Interval | float) -> Interval:
        return div(self, _coerce(other))

    def __rtruediv__(self, other: Interval | float) -> Interval:
        return div(_coerce(other), self)

    def __neg__(self) -> Interval:
        return neg(self)

    def __repr__(self) -> str:
        if self.is_empty:
            return f"Interval.empty({self.reason!r})" if self.reason else "Interval.empty()"
        return f"Interval({self.lo!r}, {self.hi!r})"


def empty(reason: str | None = None) -> Interval:
    return Interval(INF, -INF, reason)


EMPTY = empty()
ENTIRE = Interval(-INF, INF)
ZERO = Interval(0.0, 0.0)
ONE = Interval(1.0, 1.0)


def _coerce(value: Interval | float) -> Interval:
    if isinstance(value, Interval):
        return value
    if isinstance(value, Fraction):
        return Interval.from_fraction(value)
    return Interval.point(value)


# --- directed scalar operations -------------------------------------------------


def _down(value: float) -> float:
    return math.nextafter(value, -INF)


def _up(value: float) -> float:
    return math.nextafter(value, INF)


def _sum_error(a: float, b: float, s: float) -> float:
    # Knuth's TwoSum: s + err == a + b exactly when s is finite.
    bb = s - a
    return (a - (s - bb)) + (b - bb)


def add_down(a: float, b: float) -> float:
    s = a + b
    if math.isinf(s):
        if math.isinf(a) or math.isinf(b) or s < 0:
            return s
        return MAX_FLOAT
    return _down(s) if _sum_error(a, b, s) < 0 else s


def add_up(a: float, b: float) -> float:
    s = a + b
    if math.isinf(s):
        if math.isinf(a) or math.isinf(b) or s > 0:
            return s
        return -MAX_FLOAT
    return _up(s) if _sum_error(a, b, s) > 0 else s


def _product_sign_of_error(a: float, b: float, p: float) -> int:
    """Sign of (a*b - p) for finite operands and a finite nearest product p."""
    if _fma is not None and abs(p) > 2.0**-960:
        err = _fma(a, b, -p)
        return (err > 0) - (err < 0)
    exact = Fraction(a) * Fraction(b)
    represented = Fraction(p)
    return (exact > represented) - (exact < represented)


def mul_down(a: float, b: float) -> float:
    if a == 0 or b == 0:
        return 0.0
    p = a * b
    if math.isinf(p):
        if math.isinf(a) or math.isinf(b) or p < 0:
            return p
        return MAX_FLOAT
    return _down(p) if _product_sign_of_error(a, b, p) < 0 else p


def mul_up(a: float, b: float) -> float:
    if a == 0 or b == 0:
        return 0.0
    p = a * b
    if math.isinf(p):
        if math.isinf(a) or math.isinf(b) or p > 0:
            return p
        return -MAX_FLOAT
    return _up(p) if _product_sign_of_error(a, b, p) > 0 else p


def _quotient_sign_of_error(a: float, b: float, q: float) -> int:
    """Sign of (a/b - q) for finite operands, b != 0."""
    exact = Fraction(a) / Fraction(b)
    represented = Fraction(q)
    return (exact > represented) - (exact < represented)


def _div_infinite(a: float, b: float, upward: bool) -> float:
    if math.isinf(a) and math.isinf(b):
        same_sign = (a > 0) == (b > 0)
        if upward:
            return INF if same_sign else 0.0
        return 0.0 if same_sign else -INF
    if math.isinf(b):
        return 0.0
    return a / b


def div_down(a: float, b: float) -> float:
    if math.isinf(a) or math.isinf(b):
        return _div_infinite(a, b, upward=False)
    q = a / b
    if math.isinf(q):
        return q if q < 0 else MAX_FLOAT
    return _down(q) if _quotient_sign_of_error(a, b, q) < 0 else q


def div_up(a: float, b: float) -> float:
    if math.isinf(a) or math.isinf(b):
        return _div_infinite(a, b, upward=True)
    q = a / b
    if math.isinf(q):
        return q if q > 0 else -MAX_FLOAT
    return _up(q) if _quotient_sign_of_error(a, b, q) > 0 else q


def sub_up(a: float, b: float) -> float:
    return add_up(a, -b)


def sub_down(a: float, b: float) -> float:
    return add_down(a, -b)


def _pad(value: float, ulps: int, toward: float) -> float:
    for _ in range(ulps):
        value = math.nextafter(value, toward)
    return value


# --- interval operations --------------------------------------------------------


def add(a: Interval, b: Interval) -> Interval:
    if a.is_empty or b.is_empty:
        return a if a.is_empty else b
    return Interval(add_down(a.lo, b.lo), add_up(a.hi, b.hi))


def neg(a: Interval) -> Interval:
    if a.is_empty:
        return a
    return Interval(-a.hi, -a.lo)


def sub(a: Interval, b: Interval) -> Interval:
    return add(a, neg(b))


def mul(a: Interval, b: Interval) -> Interval:
    if a.is_empty or b.is_empty:
        return a if a.is_empty else b
    corners = [(x, y) for x in (a.lo, a.hi) for y in (b.lo, b.hi)]
    return Interval(
        min(mul_down(x, y) for x, y in corners),
        max(mul_up(x, y) for x, y in corners),
    )


def div(a: Interval, b: Interval) -> Interval:
    if a.is_empty or b.is_empty:
        return a if a.is_empty else b
    if b.lo == 0 and b.hi == 0:
        return empty(UNDEFINED_QUOTIENT)
    if a.lo == 0 and a.hi == 0:
        return ZERO
    if b.lo < 0 < b.hi:
        return ENTIRE
    if b.lo == 0:
        # b = [0, d]: only the positive branch exists.
        if a.lo >= 0:
            return Interval(div_down(a.lo, b.hi), INF)
        if a.hi <= 0:
            return Interval(-INF, div_up(a.hi, b.hi))
        return ENTIRE
    if b.hi == 0:
        if a.lo >= 0:
            return Interval(-INF, div_up(a.lo, b.lo))
        if a.hi <= 0:
            return Interval(div_down(a.hi, b.lo), INF)
        return ENTIRE
    corners = [(x, y) for x in (a.lo, a.hi) for y in (b.lo, b.hi)]
    return Interval(
        min(div_down(x, y) for x, y in corners),
        max(div_up(x, y) for x, y in corners),
    )


def hull(a: Interval, b: Interval) -> Interval:
    if a.is_empty:
        return b
    if b.is_empty:
        return a
    return Interval(min(a.lo, b.lo), max(a.hi, b.hi))


def intersect(a: Interval, b: Interval) -> Interval:
    if a.is_empty or b.is_empty:
        return a if a.is_empty else b
    lo = max(a.lo, b.lo)
    hi = min(a.hi, b.hi)
    if lo > hi:
        return EMPTY
    return Interval(lo, hi)


def is_subset(a: Interval, b: Interval) -> bool:
    if a.is_empty:
        return True
    if b.is_empty:
        return False
    return b.lo <= a.lo and a.hi <= b.hi


def width(a: Interval) -> float:
    if a.is_empty:
        raise ValueError("width of an empty interval is undefined")
    return sub_up(a.hi, a.lo)


def mid(a: Interval) -> float:
    if a.is_empty:
        raise ValueError("midpoint of an empty interval is undefined")
    if math.isinf(a.lo) and math.isinf(a.hi):
        return 0.0
    if math.isinf(a.lo):
        return -MAX_FLOAT
    if math.isinf(a.hi):
        return MAX_FLOAT
    m = 0.5 * a.lo + 0.5 * a.hi
    return min(max(m, a.lo), a.hi)


def mignitude(a: Interval) -> float:
    if a.is_empty:
        raise ValueError("mignitude of an empty interval is undefined")
    if a.lo <= 0 <= a.hi:
        return 0.0
    return min(abs(a.lo), abs(a.hi))


# --- standard functions ---------------------------------------------------------


def eval_std(name: str, a: Interval) -> Interval:
    if name not in STD_FUNCTIONS:
        raise ValueError(f"unknown standard function {name!r}")
    if a.is_empty:
        return a
    if name == "abs":
        return _abs(a)
    if name == "sqrt":
        return _sqrt(a)
    if name == "exp":
        return _exp(a)
    if name == "ln":
        return _ln(a)
    return _trig(name, a)


def _abs(a: Interval) -> Interval:
    if a.lo >= 0:
        return a
    if a.hi <= 0:
        return neg(a)
    return Interval(0.0, max(-a.lo, a.hi))


def _sqrt_down(x: float) -> float:
    if x == 0 or math.isinf(x):
        return x
    r = math.sqrt(x)
    square = Fraction(r) ** 2
    return _down(r) if square > Fraction(x) else r


def _sqrt_up(x: float) -> float:
    if x == 0 or math.isinf(x):
        return x
    r = math.sqrt(x)
    square = Fraction(r) ** 2
    return _up(r) if square < Fraction(x) else r


def _sqrt(a: Interval) -> Interval:
    if a.hi < 0:
        return empty(DOMAIN_VIOLATION)
    return Interval(_sqrt_down(max(a.lo, 0.0)), _sqrt_up(a.hi))


def _exp_bound(x: float, upward: bool) -> float:
    if x == -INF:
        return 0.0
    if x == INF:
        return INF
    try:
        value = math.exp(x)
    except OverflowError:
        return INF if upward else MAX_FLOAT
    if upward:
        return _pad(value, _TRANSCENDENTAL_PAD_ULPS, INF)
    return max(0.0, _pad(value, _TRANSCENDENTAL_PAD_ULPS, -INF))


def _exp(a: Interval) -> Interval:
    return Interval(_exp_bound(a.lo, upward=False), _exp_bound(a.hi, upward=True))


def _ln(a: Interval) -> Interval:
    if a.hi <= 0:
        return empty(DOMAIN_VIOLATION)
    if a.lo <= 0:
        lo = -INF
    else:
        lo = _pad(math.log(a.lo), _TRANSCENDENTAL_PAD_ULPS, -INF)
    hi = INF if a.hi == INF else _pad(math.log(a.hi), _TRANSCENDENTAL_PAD_ULPS, INF)
    return Interval(lo, hi)


def _hits_period(a: Interval, anchor: float) -> bool:
    """Whether some anchor + 2*k*pi may lie in a, erring on the side of yes."""
    slack = 1e-9 * max(1.0, abs(a.lo), abs(a.hi))
    k = math.ceil((a.lo - slack - anchor) / _TWO_PI)
    return anchor + k * _TWO_PI <= a.hi + slack


def _trig(name: str, a: Interval) -> Interval:
    if (
        not a.is_bounded
        or max(abs(a.lo), abs(a.hi)) > _TRIG_ARGUMENT_LIMIT
        or a.hi - a.lo >= _TWO_PI
    ):
        return Interval(-1.0, 1.0)
    fn = math.sin if name == "sin" else math.cos
    maximum_at = _HALF_PI if name == "sin" else 0.0
    minimum_at = -_HALF_PI if name == "sin" else math.pi
    values = (fn(a.lo), fn(a.hi))
    lo = _pad(min(values), _TRANSCENDENTAL_PAD_ULPS, -INF)
    hi = _pad(max(values), _TRANSCENDENTAL_PAD_ULPS, INF)
    if _hits_period(a, maximum_at):
        hi = 1.0
    if _hits_period(a, minimum_at):
        lo = -1.0
    return Interval(max(lo, -1.0), min(hi, 1.0))


# --- linear forms against boxes ------------------------------------------------


def dot_lower(coefficients: Mapping[str, Interval], box: Mapping[str, Interval]) -> float:
    """Lower bound of sum(r_j * x_j) over r_j in coefficients and x in box.

    Variables missing from ``box`` range over the whole real line.
    """
    total = 0.0
    for name, coefficient in coefficients.items():
        if coefficient.lo == 0 and coefficient.hi == 0:
            continue
        term = mul(coefficient, box.get(name, ENTIRE))
        if term.is_empty:
            continue
        total = add_down(total, term.lo)
        if total == -INF:
            return total
    return total

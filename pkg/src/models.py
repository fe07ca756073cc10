from __future__ import annotations

from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field, replace

from src.interval import ENTIRE, ONE, ZERO, Interval, add, intersect, is_subset, mul, neg


@dataclass(frozen=True, slots=True)
class LinearForm:
    """Interval-coefficient linear expression ``sum(c_j * x_j) + constant``.

    Absent variables have coefficient [0, 0].
    """

    coefficients: dict[str, Interval] = field(default_factory=dict)
    constant: Interval = ZERO

    @classmethod
    def unit(cls, name: str) -> LinearForm:
        return cls({name: ONE})

    @classmethod
    def of_constant(cls, value: Interval) -> LinearForm:
        return cls({}, value)

    @property
    def is_constant(self) -> bool:
        return not self.coefficients

    def plus(self, other: LinearForm) -> LinearForm:
        merged = dict(self.coefficients)
        for name, value in other.coefficients.items():
            merged[name] = add(merged[name], value) if name in merged else value
        return LinearForm(_drop_zeros(merged), add(self.constant, other.constant))

    def minus(self, other: LinearForm) -> LinearForm:
        return self.plus(other.negated())

    def negated(self) -> LinearForm:
        return LinearForm(
            {name: neg(value) for name, value in self.coefficients.items()},
            neg(self.constant),
        )

    def scaled(self, factor: Interval) -> LinearForm:
        return LinearForm(
            _drop_zeros({name: mul(factor, value) for name, value in self.coefficients.items()}),
            mul(factor, self.constant),
        )

    def without_constant(self) -> LinearForm:
        return LinearForm(dict(self.coefficients))

    def is_thin(self) -> bool:
        return all(value.is_thin for value in self.coefficients.values()) and self.constant.is_thin


def _drop_zeros(coefficients: dict[str, Interval]) -> dict[str, Interval]:
    return {name: value for name, value in coefficients.items() if not (value.lo == 0 and value.hi == 0)}


@dataclass(frozen=True, slots=True)
class Row:
    """Constraint ``form in bound``; ``form`` carries no constant."""

    form: LinearForm
    bound: Interval
    label: str = ""


@dataclass(frozen=True)
class Box(Mapping[str, Interval]):
    intervals: dict[str, Interval] = field(default_factory=dict)
    infeasible: str | None = None

    @classmethod
    def entire(cls, names: tuple[str, ...] | list[str]) -> Box:
        return cls({name: ENTIRE for name in names})

    @classmethod
    def infeasible_box(cls, names: tuple[str, ...] | list[str], reason: str) -> Box:
        return cls({name: ENTIRE for name in names}, infeasible=reason)

    def __getitem__(self, name: str) -> Interval:
        return self.intervals[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def with_interval(self, name: str, value: Interval) -> Box:
        """Intersect one variable's interval; an empty result marks the box infeasible."""
        current = self.intervals.get(name, ENTIRE)
        narrowed = intersect(current, value)
        intervals = dict(self.intervals)
        intervals[name] = narrowed
        if narrowed.is_empty:
            return Box(intervals, infeasible=self.infeasible or f"empty interval for {name}")
        return Box(intervals, infeasible=self.infeasible)

    def intersect(self, other: Mapping[str, Interval]) -> Box:
        if isinstance(other, Box) and other.infeasible:
            return Box(dict(self.intervals), infeasible=self.infeasible or other.infeasible)
        box = self
        for name, value in other.items():
            box = box.with_interval(name, value)
        return box

    def is_subset(self, other: Box) -> bool:
        if self.infeasible:
            return True
        if other.infeasible:
            return False
        return all(is_subset(value, other.get(name, ENTIRE)) for name, value in self.intervals.items())


@dataclass(frozen=True, slots=True)
class IntervalLinearProgram:
    """Rows ``form_i in bound_i`` over a variable box.

    A point x belongs to the program when it lies in ``box`` and, for every row,
    some realization of the row's coefficient intervals maps x into the bound.
    """

    variables: tuple[str, ...]
    rows: tuple[Row, ...]
    box: Box
    infeasible: str | None = None

    def with_box(self, box: Box) -> IntervalLinearProgram:
        return replace(self, box=box, infeasible=self.infeasible or box.infeasible)

    def describe(self) -> str:
        lines = [f"variables: {', '.join(self.variables)}"]
        if self.infeasible:
            lines.append(f"infeasible: {self.infeasible}")
        for index, row in enumerate(self.rows):
            terms = " + ".join(f"[{value.lo!r}, {value.hi!r}]*{name}" for name, value in row.form.coefficients.items())
            lines.append(f"row {index}: {terms or '0'} in [{row.bound.lo!r}, {row.bound.hi!r}]  {row.label}".rstrip())
        for name in self.variables:
            value = self.box.get(name, ENTIRE)
            lines.append(f"box {name}: [{value.lo!r}, {value.hi!r}]")
        return "\n".join(lines)

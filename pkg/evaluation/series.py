"""Truncated jets (f, f', ..., f^(L-1)) at a point with exact Leibniz arithmetic."""

from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable, Mapping, Sequence, Tuple

from core.jets import VarKey
from core.rational import DiffRational


@lru_cache(maxsize=None)
def _binomial_row(n: int) -> Tuple[int, ...]:
    row = [1]
    for k in range(1, n + 1):
        row.append(row[-1] * (n - k + 1) // k)
    return tuple(row)


class JetSeries:
    """Derivative values of a function at one point, up to a fixed length.

    Products follow the general Leibniz rule, quotients solve it for the
    unknown factor; lengths of operands are truncated to the shorter one.
    """

    __slots__ = ("values",)

    def __init__(self, values: Iterable[Any]):
        self.values: Tuple[Fraction, ...] = tuple(Fraction(v) for v in values)
        if not self.values:
            raise ValueError("a jet series needs at least one value")

    @classmethod
    def constant(cls, value: Any, length: int) -> "JetSeries":
        return cls((value,) + (0,) * (length - 1))

    @classmethod
    def of_variable(cls, assignment: Mapping[VarKey, Fraction], key: VarKey, length: int) -> "JetSeries":
        """Series of d^key.order v built from the jets of v in the assignment."""
        try:
            return cls(assignment[key.at_order(key.order + k)] for k in range(length))
        except KeyError as missing:
            raise ValueError(f"assignment is missing {missing.args[0]} for a series of length {length}")

    def __len__(self) -> int:
        return len(self.values)

    @property
    def value(self) -> Fraction:
        return self.values[0]

    def __repr__(self) -> str:
        return f"JetSeries({', '.join(str(v) for v in self.values)})"

    def _coerce(self, other: Any) -> "JetSeries":
        if isinstance(other, JetSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return JetSeries.constant(other, len(self))
        return NotImplemented

    def __add__(self, other: Any) -> "JetSeries":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return JetSeries(a + b for a, b in zip(self.values, other.values))

    __radd__ = __add__

    def __neg__(self) -> "JetSeries":
        return JetSeries(-a for a in self.values)

    def __sub__(self, other: Any) -> "JetSeries":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other: Any) -> "JetSeries":
        return (-self) + other

    def __mul__(self, other: Any) -> "JetSeries":
        if isinstance(other, (int, Fraction)):
            return JetSeries(a * other for a in self.values)
        if not isinstance(other, JetSeries):
            return NotImplemented
        length = min(len(self), len(other))
        f, g = self.values, other.values
        return JetSeries(
            sum(c * f[n - k] * g[k] for k, c in enumerate(_binomial_row(n)))
            for n in range(length))

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "JetSeries":
        if isinstance(other, (int, Fraction)):
            return JetSeries(a / other for a in self.values)
        if not isinstance(other, JetSeries):
            return NotImplemented
        if other.value == 0:
            raise ZeroDivisionError("division by a series vanishing at the point")
        length = min(len(self), len(other))
        g = other.values
        q = []
        for n in range(length):
            row = _binomial_row(n)
            known = sum(row[k] * q[k] * g[n - k] for k in range(n))
            q.append((self.values[n] - known) / g[0])
        return JetSeries(q)

    def __rtruediv__(self, other: Any) -> "JetSeries":
        return JetSeries.constant(other, len(self)) / self

    def derive(self) -> "JetSeries":
        """The series of f': drops the last known derivative."""
        if len(self) < 2:
            raise ValueError("cannot derive a series of length 1")
        return JetSeries(self.values[1:])


def series_of(f: Any, assignment: Mapping[VarKey, Fraction], length: int) -> JetSeries:
    """Jets of length `length` of the function f along the point described by the assignment.

    Every variable v of f contributes the series (v, dv, ...) read from the
    assignment, so jets of v up to order ord(v) + length - 1 must be present.
    """
    f = DiffRational.of(f)
    cache = {key: JetSeries.of_variable(assignment, key, length) for key in f.variables()}
    num = f.num.evaluate(cache)
    den = f.den.evaluate(cache)
    if not isinstance(num, JetSeries):
        num = JetSeries.constant(num, length)
    if not isinstance(den, JetSeries):
        if den == 0:
            raise ZeroDivisionError("denominator vanishes at the assignment")
        return num / den
    return num / den


def delta_series(start: JetSeries, divisor: JetSeries, count: int) -> Sequence[Fraction]:
    """Values of (divisor^-1 d)^k applied to `start`, k = 0..count."""
    values = [start.value]
    current = start
    for _ in range(count):
        current = current.derive() / divisor
        values.append(current.value)
    return values

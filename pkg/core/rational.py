"""Differential rational functions: quotients of DiffPolynomials.

No multivariate gcd is computed.  A DiffRational is kept in a normal form:
numerator and denominator share no monomial factor, the denominator's
leading coefficient is 1, and a denominator that exactly divides the
numerator is cancelled.  Equality is decided by cross-multiplication.
"""

from fractions import Fraction
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple, Union

from .jets import VarKey
from .polynomial import (DiffPolynomial, Monomial, monomial_div, monomial_gcd,
                         monomial_lcm)

Scalar = Union[int, Fraction]

_ONE = DiffPolynomial.constant(1)


def _as_polynomial(value: Any) -> DiffPolynomial:
    if isinstance(value, DiffPolynomial):
        return value
    if isinstance(value, (int, Fraction)):
        return DiffPolynomial.constant(value)
    raise TypeError(f"cannot use {type(value).__name__} as a polynomial")


def _split(den: DiffPolynomial) -> Tuple[Monomial, DiffPolynomial]:
    """Write den as monomial * primitive part."""
    mono = den.content_monomial()
    return mono, den.divide_monomial(mono)


def _divides(divisor: DiffPolynomial, dividend: DiffPolynomial) -> Optional[DiffPolynomial]:
    if divisor.total_degree() > dividend.total_degree():
        return None
    return dividend.exquo(divisor)


def _cancel(num: DiffPolynomial, den: DiffPolynomial) -> Tuple[DiffPolynomial, DiffPolynomial]:
    """Cancel common monomial content and exact factors between num and den."""
    if den.is_constant():
        return num, den
    common = monomial_gcd(num.content_monomial(), den.content_monomial())
    if common:
        num, den = num.divide_monomial(common), den.divide_monomial(common)
        if den.is_constant():
            return num, den
    if num == den:
        return _ONE, _ONE
    quotient = _divides(den, num)
    if quotient is not None:
        return quotient, _ONE
    if not num.is_constant():
        quotient = _divides(num, den)
        if quotient is not None:
            return _ONE, quotient
    return num, den


def _normalize(num: DiffPolynomial, den: DiffPolynomial) -> Tuple[DiffPolynomial, DiffPolynomial]:
    if not den:
        raise ZeroDivisionError("denominator is the zero polynomial")
    if not num:
        return num, _ONE
    common = monomial_gcd(num.content_monomial(), den.content_monomial())
    if common:
        num, den = num.divide_monomial(common), den.divide_monomial(common)
    if den.is_constant():
        return num.scale(Fraction(1) / den.constant_term()), _ONE
    quotient = _divides(den, num)
    if quotient is not None:
        return quotient, _ONE
    _, lead = den.leading_term()
    if lead != 1:
        factor = Fraction(1) / lead
        num, den = num.scale(factor), den.scale(factor)
    return num, den


class DiffRational:
    """Immutable element of the field of differential rational functions."""

    __slots__ = ("_num", "_den")

    def __init__(self, num: Any = 0, den: Any = 1):
        self._num, self._den = _normalize(_as_polynomial(num), _as_polynomial(den))

    @classmethod
    def _trusted(cls, num: DiffPolynomial, den: DiffPolynomial) -> "DiffRational":
        obj = cls.__new__(cls)
        obj._num = num
        obj._den = den
        return obj

    @classmethod
    def of(cls, value: Any) -> "DiffRational":
        """Coerce a scalar, polynomial or rational to a DiffRational."""
        if isinstance(value, DiffRational):
            return value
        if isinstance(value, DiffPolynomial):
            return cls._trusted(value, _ONE)
        if isinstance(value, (int, Fraction)):
            return cls._trusted(DiffPolynomial.constant(value), _ONE)
        raise TypeError(f"cannot use {type(value).__name__} as a rational function")

    @classmethod
    def variable(cls, key: VarKey) -> "DiffRational":
        return cls._trusted(DiffPolynomial.variable(key), _ONE)

    @property
    def num(self) -> DiffPolynomial:
        return self._num

    @property
    def den(self) -> DiffPolynomial:
        return self._den

    def is_zero(self) -> bool:
        return not self._num

    def is_polynomial(self) -> bool:
        return self._den.is_constant()

    def is_constant(self) -> bool:
        return self._den.is_constant() and self._num.is_constant()

    def variables(self) -> FrozenSet[VarKey]:
        return self._num.variables() | self._den.variables()

    def max_order(self, base: str, index: Optional[int] = None) -> Optional[int]:
        orders = [o for o in (self._num.max_order(base, index), self._den.max_order(base, index))
                  if o is not None]
        return max(orders) if orders else None

    def size(self) -> int:
        """Number of stored terms, numerator plus denominator."""
        return len(self._num) + len(self._den)

    # ------------------------------------------------------------------
    # Field operations

    @staticmethod
    def _coerce(other: Any) -> Optional["DiffRational"]:
        if isinstance(other, (DiffRational, DiffPolynomial, int, Fraction)):
            return DiffRational.of(other)
        return None

    def __add__(self, other: Any) -> "DiffRational":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self._num:
            return other
        if not other._num:
            return self
        if self._den == other._den:
            return DiffRational(self._num + other._num, self._den)
        mono_a, prim_a = _split(self._den)
        mono_b, prim_b = _split(other._den)
        lcm = monomial_lcm(mono_a, mono_b)
        num_a = self._num.multiply_monomial(monomial_div(lcm, mono_a))
        num_b = other._num.multiply_monomial(monomial_div(lcm, mono_b))
        if prim_a == prim_b:
            return DiffRational(num_a + num_b, prim_a.multiply_monomial(lcm))
        quotient = None if prim_a.is_constant() else _divides(prim_b, prim_a)
        if quotient is not None:
            return DiffRational(num_a + num_b * quotient, prim_a.multiply_monomial(lcm))
        quotient = None if prim_b.is_constant() else _divides(prim_a, prim_b)
        if quotient is not None:
            return DiffRational(num_a * quotient + num_b, prim_b.multiply_monomial(lcm))
        return DiffRational(num_a * prim_b + num_b * prim_a,
                            (prim_a * prim_b).multiply_monomial(lcm))

    __radd__ = __add__

    def __neg__(self) -> "DiffRational":
        return DiffRational._trusted(-self._num, self._den)

    def __sub__(self, other: Any) -> "DiffRational":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> "DiffRational":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: Any) -> "DiffRational":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self._num or not other._num:
            return DiffRational.of(0)
        n1, d2 = _cancel(self._num, other._den)
        n2, d1 = _cancel(other._num, self._den)
        return DiffRational(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def inverse(self) -> "DiffRational":
        if not self._num:
            raise ZeroDivisionError("inverse of the zero rational function")
        return DiffRational(self._den, self._num)

    def __truediv__(self, other: Any) -> "DiffRational":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: Any) -> "DiffRational":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int) -> "DiffRational":
        if not isinstance(exponent, int):
            raise ValueError(f"exponent must be an integer, got {exponent!r}")
        if exponent < 0:
            return self.inverse() ** (-exponent)
        if exponent == 0:
            return DiffRational.of(1)
        return DiffRational._trusted(self._num ** exponent, self._den ** exponent)

    def __eq__(self, other: Any) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return eq_rational(self, other)

    __hash__ = None

    # ------------------------------------------------------------------
    # Differential structure and evaluation

    def derive(self) -> "DiffRational":
        """Quotient rule: (dN*D - N*dD)/D^2."""
        if self._den.is_constant():
            return DiffRational._trusted(self._num.derive(), self._den)
        num = self._num.derive() * self._den - self._num * self._den.derive()
        return DiffRational(num, self._den * self._den)

    def evaluate(self, values: Mapping[VarKey, Fraction]) -> Fraction:
        """Exact value at an assignment; ZeroDivisionError on a vanishing denominator."""
        den = self._den.evaluate(values)
        if den == 0:
            raise ZeroDivisionError("denominator vanishes at the assignment")
        return Fraction(self._num.evaluate(values)) / den

    def substitute(self, mapping: Mapping[VarKey, "DiffRational"]) -> "DiffRational":
        """Replace variables by rational functions; unmapped variables stay."""
        num = substitute_polynomial(self._num, mapping)
        if self._den.is_constant():
            return num * DiffRational.of(Fraction(1) / self._den.constant_term())
        return num / substitute_polynomial(self._den, mapping)

    def __str__(self) -> str:
        if self._den.is_constant():
            return str(self._num)
        return f"({self._num})/({self._den})"

    def __repr__(self) -> str:
        return f"DiffRational('{self}')"


def eq_rational(a: DiffRational, b: DiffRational) -> bool:
    """num_a*den_b == num_b*den_a as canonical polynomials."""
    if a.den == b.den:
        return a.num == b.num
    return a.num * b.den == b.num * a.den


def derive_rational(r: DiffRational) -> DiffRational:
    return DiffRational.of(r).derive()


def rational_sum(items: Iterable[Any]) -> DiffRational:
    """Sum rationals, pooling numerators that share a denominator."""
    groups: Dict[DiffPolynomial, List[DiffPolynomial]] = {}
    for item in items:
        r = DiffRational.of(item)
        if r.num:
            groups.setdefault(r.den, []).append(r.num)
    partial = [DiffRational(DiffPolynomial.sum(nums), den) for den, nums in groups.items()]
    if not partial:
        return DiffRational.of(0)
    while len(partial) > 1:
        paired = [partial[i] + partial[i + 1] for i in range(0, len(partial) - 1, 2)]
        if len(partial) % 2:
            paired.append(partial[-1])
        partial = paired
    return partial[0]


def substitute_polynomial(p: DiffPolynomial, mapping: Mapping[VarKey, Any]) -> DiffRational:
    """Image of a polynomial under variable -> rational function."""
    images = {key: DiffRational.of(value) for key, value in mapping.items()}
    return DiffRational.of(p.evaluate(images, default=DiffRational.variable, total=rational_sum))


def order_in(f: DiffRational, i: int, base: str = "x") -> Optional[int]:
    """Largest k with a nonzero partial derivative in d^k x_i, None when absent."""
    f = DiffRational.of(f)
    keys = sorted((k for k in f.variables() if k.base == base and k.index == i),
                  key=lambda k: k.order, reverse=True)
    for key in keys:
        if f.num.partial(key) * f.den != f.num * f.den.partial(key):
            return key.order
    return None

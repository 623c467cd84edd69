"""Sparse differential polynomials over the rationals.

A monomial is a tuple of (VarKey, exponent) pairs sorted by VarKey; a
polynomial maps monomials to nonzero Fraction coefficients.  Monomials are
compared lexicographically with the largest variable most significant, which
is a monomial order and drives exact division and the leading-coefficient
convention of DiffRational.
"""

import builtins
import heapq
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Any, Callable, Dict, FrozenSet, Iterable, Iterator, Mapping, Optional, Tuple, Union

from .jets import VarKey, display_key

Monomial = Tuple[Tuple[VarKey, int], ...]
Scalar = Union[int, Fraction]

UNIT: Monomial = ()


@lru_cache(maxsize=1 << 17)
def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    """Product of two monomials."""
    if not a:
        return b
    if not b:
        return a
    merged = dict(a)
    for key, exp in b:
        merged[key] = merged.get(key, 0) + exp
    return tuple(sorted(merged.items()))


@lru_cache(maxsize=1 << 16)
def monomial_div(a: Monomial, b: Monomial) -> Optional[Monomial]:
    """Quotient a/b, or None when b does not divide a."""
    if not b:
        return a
    powers = dict(a)
    for key, exp in b:
        have = powers.get(key, 0)
        if have < exp:
            return None
        if have == exp:
            del powers[key]
        else:
            powers[key] = have - exp
    return tuple(sorted(powers.items()))


def monomial_gcd(a: Monomial, b: Monomial) -> Monomial:
    other = dict(b)
    return tuple((key, min(exp, other[key])) for key, exp in a if key in other)


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    merged = dict(a)
    for key, exp in b:
        merged[key] = max(merged.get(key, 0), exp)
    return tuple(sorted(merged.items()))


def monomial_key(m: Monomial) -> Monomial:
    """Sort key: lex order read from the largest variable down."""
    return m[::-1]


@lru_cache(maxsize=1 << 16)
def _monomial_derivative(m: Monomial) -> Tuple[Tuple[Monomial, int], ...]:
    # d(v1^e1 ... vr^er) = sum_j e_j v_j^(e_j - 1) d(v_j) prod_{l != j} v_l^e_l
    out = []
    for pos, (key, exp) in enumerate(m):
        rest = list(m)
        if exp == 1:
            del rest[pos]
        else:
            rest[pos] = (key, exp - 1)
        out.append((monomial_mul(tuple(rest), ((key.raised(), 1),)), exp))
    return tuple(out)


class _Descending:
    """Heap entry that pops the largest monomial first."""
    __slots__ = ("mono", "key")

    def __init__(self, mono: Monomial):
        self.mono = mono
        self.key = monomial_key(mono)

    def __lt__(self, other: "_Descending") -> bool:
        return self.key > other.key


def _format_monomial(m: Monomial) -> str:
    factors = []
    for key, exp in sorted(m, key=lambda pair: display_key(pair[0])):
        factors.append(str(key) if exp == 1 else f"{key}^{exp}")
    return "*".join(factors)


class DiffPolynomial:
    """Immutable sparse polynomial in jet variables.

    The constructor trusts its mapping to hold canonical monomials; use
    constant(), variable() or from_terms() to build from raw data.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Monomial, Scalar]] = None):
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            for mono, coeff in terms.items():
                if coeff:
                    clean[mono] = Fraction(coeff)
        self._terms = clean
        self._hash: Optional[int] = None

    @classmethod
    def _wrap(cls, terms: Dict[Monomial, Fraction]) -> "DiffPolynomial":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls) -> "DiffPolynomial":
        return cls._wrap({})

    @classmethod
    def constant(cls, value: Scalar) -> "DiffPolynomial":
        return cls._wrap({UNIT: Fraction(value)} if value else {})

    @classmethod
    def variable(cls, key: VarKey, exponent: int = 1) -> "DiffPolynomial":
        if exponent < 0:
            raise ValueError("exponent must be nonnegative")
        if exponent == 0:
            return cls.constant(1)
        return cls._wrap({((key, exponent),): Fraction(1)})

    @classmethod
    def from_terms(cls, terms: Iterable[Tuple[Scalar, Mapping[VarKey, int]]]) -> "DiffPolynomial":
        """Build from (coefficient, {variable: exponent}) pairs."""
        acc: Dict[Monomial, Fraction] = {}
        for coeff, powers in terms:
            mono = tuple(sorted((k, e) for k, e in powers.items() if e))
            acc[mono] = acc.get(mono, Fraction(0)) + Fraction(coeff)
        return cls._wrap({m: c for m, c in acc.items() if c})

    @classmethod
    def sum(cls, polys: Iterable["DiffPolynomial"]) -> "DiffPolynomial":
        """Sum many polynomials with a single accumulator."""
        acc: Dict[Monomial, Fraction] = {}
        for poly in polys:
            for mono, coeff in poly._terms.items():
                value = acc.get(mono)
                acc[mono] = coeff if value is None else value + coeff
        return cls._wrap({m: c for m, c in acc.items() if c})

    # ------------------------------------------------------------------
    # Inspection

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._terms)

    def items(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and UNIT in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get(UNIT, Fraction(0))

    def variables(self) -> FrozenSet[VarKey]:
        return frozenset(key for mono in self._terms for key, _ in mono)

    def max_order(self, base: str, index: Optional[int] = None) -> Optional[int]:
        """Highest jet order of (base, index) present, None when absent."""
        orders = [k.order for k in self.variables()
                  if k.base == base and (index is None or k.index == index)]
        return max(orders) if orders else None

    def total_degree(self) -> int:
        return max((sum(e for _, e in mono) for mono in self._terms), default=0)

    def leading_term(self) -> Tuple[Monomial, Fraction]:
        if not self._terms:
            raise ValueError("the zero polynomial has no leading term")
        mono = max(self._terms, key=monomial_key)
        return mono, self._terms[mono]

    def trailing_monomial(self) -> Monomial:
        return min(self._terms, key=monomial_key)

    def content_monomial(self) -> Monomial:
        """Greatest monomial dividing every term."""
        monos = iter(self._terms)
        common = next(monos, UNIT)
        for mono in monos:
            if not common:
                break
            common = monomial_gcd(common, mono)
        return common

    # ------------------------------------------------------------------
    # Ring operations

    @staticmethod
    def _coerce(other: Any) -> Optional["DiffPolynomial"]:
        if isinstance(other, DiffPolynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return DiffPolynomial.constant(other)
        return None

    def __add__(self, other: Any) -> "DiffPolynomial":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        big, small = (self, other) if len(self) >= len(other) else (other, self)
        out = dict(big._terms)
        for mono, coeff in small._terms.items():
            value = out.get(mono)
            if value is None:
                out[mono] = coeff
            else:
                value += coeff
                if value:
                    out[mono] = value
                else:
                    del out[mono]
        return DiffPolynomial._wrap(out)

    __radd__ = __add__

    def __neg__(self) -> "DiffPolynomial":
        return DiffPolynomial._wrap({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: Any) -> "DiffPolynomial":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> "DiffPolynomial":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, factor: Scalar) -> "DiffPolynomial":
        factor = Fraction(factor)
        if not factor:
            return DiffPolynomial.zero()
        return DiffPolynomial._wrap({m: c * factor for m, c in self._terms.items()})

    def multiply_monomial(self, mono: Monomial) -> "DiffPolynomial":
        if not mono:
            return self
        return DiffPolynomial._wrap({monomial_mul(m, mono): c for m, c in self._terms.items()})

    def divide_monomial(self, mono: Monomial) -> "DiffPolynomial":
        """Exact division by a monomial dividing every term."""
        if not mono:
            return self
        out = {}
        for m, c in self._terms.items():
            q = monomial_div(m, mono)
            if q is None:
                raise ValueError("monomial does not divide the polynomial")
            out[q] = c
        return DiffPolynomial._wrap(out)

    def __mul__(self, other: Any) -> "DiffPolynomial":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self._terms or not other._terms:
            return DiffPolynomial.zero()
        if other.is_constant():
            return self.scale(other.constant_term())
        if self.is_constant():
            return other.scale(self.constant_term())
        acc: Dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = monomial_mul(m1, m2)
                value = acc.get(mono)
                acc[mono] = c1 * c2 if value is None else value + c1 * c2
        return DiffPolynomial._wrap({m: c for m, c in acc.items() if c})

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "DiffPolynomial":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError(f"polynomial exponent must be a nonnegative integer, got {exponent!r}")
        if exponent == 0:
            return DiffPolynomial.constant(1)
        if len(self._terms) == 1:
            (mono, coeff), = self._terms.items()
            powered = tuple((k, e * exponent) for k, e in mono)
            return DiffPolynomial._wrap({powered: coeff ** exponent})
        result = DiffPolynomial.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __truediv__(self, other: Any):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division of a polynomial by zero")
            return self.scale(Fraction(1) / Fraction(other))
        from .rational import DiffRational
        return DiffRational(self) / other

    def __rtruediv__(self, other: Any):
        from .rational import DiffRational
        return DiffRational.of(other) / DiffRational(self)

    def __eq__(self, other: Any) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # ------------------------------------------------------------------
    # Differential structure

    def derive(self) -> "DiffPolynomial":
        """Apply d: raises every jet order by one, Leibniz on products."""
        acc: Dict[Monomial, Fraction] = {}
        for mono, coeff in self._terms.items():
            for new_mono, factor in _monomial_derivative(mono):
                value = acc.get(new_mono)
                acc[new_mono] = coeff * factor if value is None else value + coeff * factor
        return DiffPolynomial._wrap({m: c for m, c in acc.items() if c})

    def partial(self, key: VarKey) -> "DiffPolynomial":
        """Partial derivative with respect to one jet variable."""
        acc: Dict[Monomial, Fraction] = {}
        for mono, coeff in self._terms.items():
            for pos, (k, exp) in enumerate(mono):
                if k != key:
                    continue
                rest = list(mono)
                if exp == 1:
                    del rest[pos]
                else:
                    rest[pos] = (k, exp - 1)
                rest = tuple(rest)
                acc[rest] = acc.get(rest, Fraction(0)) + coeff * exp
        return DiffPolynomial._wrap({m: c for m, c in acc.items() if c})

    # ------------------------------------------------------------------
    # Division

    def exquo(self, other: "DiffPolynomial") -> Optional["DiffPolynomial"]:
        """Exact quotient self/other, or None when other does not divide self."""
        if not other:
            raise ZeroDivisionError("exact division by the zero polynomial")
        if not self._terms:
            return DiffPolynomial.zero()
        if other.is_constant():
            return self.scale(Fraction(1) / other.constant_term())
        lead_mono, lead_coeff = other.leading_term()
        if monomial_div(self.leading_term()[0], lead_mono) is None:
            return None
        if monomial_div(self.trailing_monomial(), other.trailing_monomial()) is None:
            return None

        tail = [(m, c) for m, c in other._terms.items() if m != lead_mono]
        remainder = dict(self._terms)
        heap = [_Descending(m) for m in remainder]
        heapq.heapify(heap)
        queued = set(remainder)
        quotient: Dict[Monomial, Fraction] = {}
        while heap:
            mono = heapq.heappop(heap).mono
            queued.discard(mono)
            coeff = remainder.pop(mono, None)
            if not coeff:
                continue
            q_mono = monomial_div(mono, lead_mono)
            if q_mono is None:
                return None
            q_coeff = coeff / lead_coeff
            quotient[q_mono] = q_coeff
            for b_mono, b_coeff in tail:
                target = monomial_mul(q_mono, b_mono)
                value = remainder.get(target, Fraction(0)) - q_coeff * b_coeff
                if value:
                    remainder[target] = value
                    if target not in queued:
                        queued.add(target)
                        heapq.heappush(heap, _Descending(target))
                else:
                    remainder.pop(target, None)
        return DiffPolynomial._wrap(quotient)

    # ------------------------------------------------------------------
    # Evaluation and substitution

    def evaluate(self, values: Mapping[VarKey, Any],
                 default: Optional[Callable[[VarKey], Any]] = None,
                 total: Callable[[Iterable[Any]], Any] = builtins.sum) -> Any:
        """Evaluate with variables replaced from `values`.

        Values may be any ring elements that multiply with Fractions
        (Fractions, polynomials, rational functions, series).  Variables
        missing from `values` are taken from `default`, or raise ValueError.
        """
        powers: Dict[Tuple[VarKey, int], Any] = {}

        def power(key: VarKey, exp: int) -> Any:
            cached = powers.get((key, exp))
            if cached is not None:
                return cached
            if key in values:
                base = values[key]
            elif default is not None:
                base = default(key)
            else:
                raise ValueError(f"assignment is missing {key}")
            value = base if exp == 1 else power(key, exp - 1) * base
            powers[(key, exp)] = value
            return value

        terms = []
        for mono, coeff in self._terms.items():
            term = coeff
            for key, exp in mono:
                term = term * power(key, exp)
            terms.append(term)
        if not terms:
            return Fraction(0)
        return total(terms)

    def substitute(self, mapping: Mapping[VarKey, "DiffPolynomial"]) -> "DiffPolynomial":
        """Replace variables by polynomials; unmapped variables stay."""
        return self.evaluate(mapping, default=DiffPolynomial.variable, total=_as_polynomial_sum)

    # ------------------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for mono in sorted(self._terms, key=monomial_key):
            coeff = self._terms[mono]
            body = _format_monomial(mono)
            magnitude = abs(coeff)
            if not body:
                text = str(magnitude)
            elif magnitude == 1:
                text = body
            else:
                text = f"{magnitude}*{body}"
            if not pieces:
                pieces.append(text if coeff > 0 else f"-{text}")
            else:
                pieces.append(f"+ {text}" if coeff > 0 else f"- {text}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"DiffPolynomial('{self}')"


def _as_polynomial_sum(items: Iterable[Any]) -> DiffPolynomial:
    return DiffPolynomial.sum(DiffPolynomial._coerce(item) for item in items)


def var(key: VarKey) -> DiffPolynomial:
    """Shorthand for DiffPolynomial.variable."""
    return DiffPolynomial.variable(key)


def derive(p: DiffPolynomial) -> DiffPolynomial:
    return p.derive()

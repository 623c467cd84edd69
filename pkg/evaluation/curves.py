"""Concrete rational curves: exact jets, reparametrizations and curve files.

Coordinates are sympy rational functions of one parameter t, kept in
cancelled form so repeated differentiation does not grow them.
"""

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Tuple, Union

import sympy

from config.logger_config import get_logger
from core.jets import VarKey, aux, x
from core.rational import DiffRational
from transforms.actions import AffineMap, DerivationSpec
from .points import ReparamStep

logger = get_logger("diff_invariants.evaluation")

T = sympy.Symbol("t")
PARAMETER = "t"

Scalar = Union[int, Fraction, str]


def to_rational(value: Scalar) -> sympy.Rational:
    value = Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


def to_fraction(value: sympy.Expr) -> Fraction:
    if not getattr(value, "is_Rational", False):
        raise ValueError(f"not an exact rational: {value}")
    return Fraction(int(value.p), int(value.q))


def value_at(expr: sympy.Expr, t0: Scalar) -> Fraction:
    """Exact value of a rational function of t; ZeroDivisionError at a pole."""
    num, den = sympy.fraction(sympy.cancel(sympy.sympify(expr)))
    point = to_rational(t0)
    den_value = den.subs(T, point)
    if den_value == 0:
        raise ZeroDivisionError(f"pole at t={t0}")
    return to_fraction(num.subs(T, point) / den_value)


def polynomial_to_sympy(f: DiffRational, values: Mapping[VarKey, sympy.Expr]) -> sympy.Expr:
    """Image of f with every jet variable replaced by a sympy expression."""
    f = DiffRational.of(f)

    def image(poly) -> sympy.Expr:
        terms = []
        for mono, coeff in poly.items():
            factors = [to_rational(coeff)]
            for key, exp in mono:
                if key not in values:
                    raise ValueError(f"no value for {key}")
                factors.append(values[key] ** exp)
            terms.append(sympy.Mul(*factors))
        return sympy.Add(*terms)

    den = image(f.den)
    if sympy.cancel(den) == 0:
        raise ZeroDivisionError("denominator vanishes identically along the curve")
    return sympy.cancel(image(f.num) / den)


@dataclass(frozen=True)
class CurveSpec:
    """A curve t -> (c_1(t), ..., c_n(t)) with exact rational coefficients."""
    coordinates: Tuple[sympy.Expr, ...]
    name: str = ""

    def __post_init__(self):
        coords = tuple(sympy.cancel(sympy.sympify(c)) for c in self.coordinates)
        if not coords:
            raise ValueError("a curve needs at least one coordinate")
        for c in coords:
            if c.free_symbols - {T}:
                raise ValueError(f"curve coordinate {c} uses symbols other than t")
        object.__setattr__(self, "coordinates", coords)

    @classmethod
    def from_rationals(cls, items: Iterable[DiffRational], name: str = "") -> "CurveSpec":
        """Curve from expressions in the auxiliary t (order 0 only)."""
        coords = []
        for item in items:
            item = DiffRational.of(item)
            for key in item.variables():
                if key != aux(PARAMETER):
                    raise ValueError(f"curve coordinates may only use t, found {key}")
            coords.append(polynomial_to_sympy(item, {aux(PARAMETER): T}))
        return cls(tuple(coords), name)

    @property
    def n(self) -> int:
        return len(self.coordinates)

    def derivative(self, k: int = 1) -> Tuple[sympy.Expr, ...]:
        return tuple(sympy.cancel(sympy.diff(c, T, k)) if k else c for c in self.coordinates)

    def reparametrized(self, phi: sympy.Expr) -> "CurveSpec":
        """s -> c(phi(s)), written again in the parameter t."""
        return CurveSpec(tuple(c.subs(T, phi) for c in self.coordinates), f"{self.name} reparametrized")

    def transformed(self, m: AffineMap) -> "CurveSpec":
        """h c + h0."""
        if m.n != self.n:
            raise ValueError(f"dimension mismatch: map of dimension {m.n} on a curve in dimension {self.n}")
        coords = tuple(
            sum((to_rational(m.h[i][j]) * self.coordinates[j] for j in range(self.n)), sympy.Integer(0))
            + to_rational(m.h0[i])
            for i in range(self.n))
        return CurveSpec(coords, self.name)

    def symbolic_jets(self, max_order: int) -> Dict[VarKey, sympy.Expr]:
        """d^k x_i -> d^k c_i as functions of t."""
        jets = {}
        for k in range(max_order + 1):
            for i, value in enumerate(self.derivative(k), start=1):
                jets[x(i, k)] = value
        return jets

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coordinates) + ")"


def jets_of_curve(c: CurveSpec, t0: Scalar, max_order: int) -> Dict[VarKey, Fraction]:
    """Exact values of d^k x_i at t0 for k <= max_order; ZeroDivisionError at a pole."""
    if max_order < 0:
        raise ValueError("max_order must be nonnegative")
    jets = {}
    for key, expr in c.symbolic_jets(max_order).items():
        try:
            jets[key] = value_at(expr, t0)
        except ZeroDivisionError:
            raise ZeroDivisionError(f"curve {c} has a pole at t={t0}")
    return jets


def delta_jets_along(c: CurveSpec, divisor: sympy.Expr, max_order: int) -> Dict[VarKey, sympy.Expr]:
    """delta^k x_i along the curve as functions of t, delta = divisor^-1 d/dt."""
    jets = {}
    for i, coordinate in enumerate(c.coordinates, start=1):
        current = coordinate
        jets[x(i, 0)] = current
        for k in range(1, max_order + 1):
            current = sympy.cancel(sympy.diff(current, T) / divisor)
            jets[x(i, k)] = current
    return jets


def delta_iterates(expr: sympy.Expr, divisor: sympy.Expr, count: int) -> List[sympy.Expr]:
    """expr, delta expr, ..., delta^count expr."""
    values = [sympy.cancel(expr)]
    for _ in range(count):
        values.append(sympy.cancel(sympy.diff(values[-1], T) / divisor))
    return values


def chain_rule_jets(c: CurveSpec, phi: sympy.Expr, s0: Scalar, max_order: int) -> Dict[VarKey, Fraction]:
    """Jets of c at phi(s0) recovered from the reparametrized curve v = c o phi.

    With d = d/ds and g = phi', the derivation g^-1 d is d/dt, so the
    g-reinterpretation of d^k x evaluated at the s-jets of v and of phi'
    gives the t-jets of c.
    """
    v = c.reparametrized(phi)
    point = dict(jets_of_curve(v, s0, max_order))
    speed = sympy.cancel(sympy.diff(phi, T))
    for k in range(max_order):
        point[aux("g", k)] = value_at(sympy.diff(speed, T, k) if k else speed, s0)
    needs = {("x", i): max_order for i in range(1, c.n + 1)}
    return ReparamStep(DerivationSpec.g_reparam("g")).pull(point, needs)


def load_curve(path: Union[str, Path], parse_expression) -> CurveSpec:
    """Read a curve file: one coordinate expression in t per line.

    Blank lines and lines starting with '#' are skipped.  `parse_expression`
    turns a line into a DiffRational (the command layer passes its grammar).
    """
    path = Path(path)
    with open(path, "r", encoding="utf-8") as f:
        lines = [line.strip() for line in f]
    items = [parse_expression(line) for line in lines if line and not line.startswith("#")]
    if not items:
        raise ValueError(f"curve file {path} has no coordinates")
    curve = CurveSpec.from_rationals(items, name=path.stem)
    logger.debug("loaded curve %s from %s", curve, path)
    return curve

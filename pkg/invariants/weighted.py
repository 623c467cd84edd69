"""Semi-invariants of GL(n)⋉C^n with a reparametrization weight.

A function f has weight w when f^(g^-1 d)<h x + h0> = g^-w f^d<x>.  p1 has
weight 2, p2 weight 3, and the normalizer p weight 1; delta = p^-1 d then
turns every H-invariant into an invariant of the reparametrized action.
"""

from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from functools import lru_cache
from typing import List

from config.logger_config import get_logger
from core.decorators import requires_dimension
from core.jets import VarKey
from core.polynomial import DiffPolynomial
from core.rational import DiffRational, rational_sum
from transforms.actions import DerivationSpec, delta_apply, reinterpret
from transforms.wronskian import minor_ratio, triangular, wronskian, wronskian_minor
from .brackets import normalizer_substitution, printed_bracket

logger = get_logger("diff_invariants.invariants")


class NormalizerVariant(IntEnum):
    """Which weight-1 function serves as p."""
    LOG_DERIVATIVE = 1
    RATIO = 2

    @property
    def label(self) -> str:
        return self.name.lower().replace("_", "-")

    @property
    def minimum_dimension(self) -> int:
        return 2 if self == NormalizerVariant.LOG_DERIVATIVE else 3

    @classmethod
    def from_label(cls, label: str) -> "NormalizerVariant":
        for variant in cls:
            if variant.label == label:
                return variant
        raise ValueError(f"unknown normalizer variant: {label!r} "
                         f"(expected one of {', '.join(v.label for v in cls)})")


@dataclass(frozen=True, eq=False)
class WeightedInvariant:
    """A rational function with its claimed reparametrization weight."""
    name: str
    expr: DiffRational
    weight: int
    n: int
    description: str = field(default="", compare=False)

    def order(self) -> int:
        return self.expr.max_order("x") or 0

    def __str__(self) -> str:
        return f"{self.name} (n={self.n}, weight {self.weight}): {self.expr}"


@lru_cache(maxsize=None)
def p1_numerator(n: int) -> DiffPolynomial:
    """N1 with p1 = N1 / W^2."""
    numerator, power = normalizer_substitution(printed_bracket(n, n - 1), n)
    if power != 2:
        raise ArithmeticError(f"p1 bracket has denominator W^{power}")
    return numerator


@lru_cache(maxsize=None)
def p2_numerator(n: int) -> DiffPolynomial:
    """N2 with p2 = N2 / W^3."""
    numerator, power = normalizer_substitution(printed_bracket(n, n - 2), n)
    if power != 3:
        raise ArithmeticError(f"p2 bracket has denominator W^{power}")
    return numerator


@requires_dimension(2)
def p1(n: int) -> WeightedInvariant:
    """W_(n-1)/W + (n-1)/3 d(W_n/W) - (n-1)(3n+2)/(6n(n+1)) (W_n/W)^2, weight 2."""
    expr = DiffRational(p1_numerator(n), wronskian(n) ** 2)
    logger.debug("p1 for n=%d: %d numerator terms", n, len(expr.num))
    return WeightedInvariant("p1", expr, 2, n, "bracket of W^delta_(n-1) at s = W_n/(cW)")


def p1_formula(n: int) -> DiffRational:
    """p1 assembled term by term from the ratios W_i/W."""
    ratio = minor_ratio(n, n)
    k = Fraction((n - 1) * (3 * n + 2), 6 * n * (n + 1))
    return minor_ratio(n, n - 1) + Fraction(n - 1, 3) * ratio.derive() - k * ratio ** 2


@requires_dimension(3)
def p2(n: int) -> WeightedInvariant:
    """Bracket of W^delta_(n-2)/W^delta with s := (2/(n(n+1))) W_n/W, weight 3."""
    expr = DiffRational(p2_numerator(n), wronskian(n) ** 3)
    logger.debug("p2 for n=%d: %d numerator terms", n, len(expr.num))
    return WeightedInvariant("p2", expr, 3, n, "bracket of W^delta_(n-2) at s = W_n/(cW)")


def p_weight1(n: int, variant: NormalizerVariant = NormalizerVariant.LOG_DERIVATIVE) -> WeightedInvariant:
    """Weight-1 normalizer p.

    log-derivative: n(n+1)/2 d(p1)/p1 - 2 W_n/W   (n >= 2)
    ratio:          p2 / p1                        (n >= 3)
    """
    variant = NormalizerVariant(variant)
    if n < variant.minimum_dimension:
        raise ValueError(f"the {variant.label} normalizer requires n >= {variant.minimum_dimension}, got {n}")
    W = wronskian(n)
    N1 = p1_numerator(n)
    if variant == NormalizerVariant.LOG_DERIVATIVE:
        # p1 = N1/W^2 and dW = W_n
        c = triangular(n)
        num = N1.derive() * W * c - N1 * wronskian_minor(n, n) * (2 * c + 2)
        expr = DiffRational(num, N1 * W)
    else:
        expr = DiffRational(p2_numerator(n), W * N1)
    return WeightedInvariant(f"p[{variant.label}]", expr, 1, n)


def p_log_formula(n: int) -> DiffRational:
    """n(n+1)/2 d(p1)/p1 - 2 W_n/W, by plain rational arithmetic."""
    first = p1(n).expr
    return triangular(n) * first.derive() / first - 2 * minor_ratio(n, n)


def normalized_derivation(n: int, variant: NormalizerVariant = NormalizerVariant.LOG_DERIVATIVE) -> DerivationSpec:
    """delta = p^-1 d, for which p^delta<x> = 1."""
    return DerivationSpec.p_reparam(p_weight1(n, variant).expr)


@requires_dimension(2)
def gl_generators(n: int) -> List[DiffRational]:
    """W_1/W, ..., W_n/W: differential generators for GL(n)⋉C^n."""
    return [minor_ratio(n, i) for i in range(1, n + 1)]


def normalizer_in_ratios(n: int, variant: NormalizerVariant = NormalizerVariant.LOG_DERIVATIVE,
                         symbol: str = "y") -> DiffRational:
    """p written through the generators: W_i/W replaced by y_i.

    Evaluated on the delta-generators it gives p^delta = 1, the defining
    relation of the reparametrized field.
    """
    variant = NormalizerVariant(variant)
    if n < variant.minimum_dimension:
        raise ValueError(f"the {variant.label} normalizer requires n >= {variant.minimum_dimension}, got {n}")
    first, _ = normalizer_substitution(printed_bracket(n, n - 1), n, ratio_symbol=symbol)
    if variant == NormalizerVariant.LOG_DERIVATIVE:
        last = DiffRational.variable(VarKey(symbol, n, 0))
        return triangular(n) * DiffRational(first.derive(), first) - 2 * last
    second, _ = normalizer_substitution(printed_bracket(n, n - 2), n, ratio_symbol=symbol)
    return DiffRational(second, first)


def theorem2_residual(y_expr, spec: DerivationSpec, n: int) -> DiffRational:
    """sum_{i=1}^{n+1} (-1)^(n+1-i) (W^delta_i/W^delta) delta^i y.

    Zero for y = x_j and for constants: the linear ODE of order n+1 whose
    solutions are 1, x_1, ..., x_n.
    """
    W_delta = reinterpret(wronskian(n), spec)
    iterate = DiffRational.of(y_expr)
    terms = []
    for i in range(1, n + 2):
        iterate = delta_apply(iterate, spec)
        if iterate.is_zero():
            break
        ratio = reinterpret(wronskian_minor(n, i), spec) / W_delta
        sign = -1 if (n + 1 - i) % 2 else 1
        terms.append(ratio * iterate * sign)
    return rational_sum(terms)


def ratio_form(name: str, n: int, variant: NormalizerVariant = NormalizerVariant.LOG_DERIVATIVE,
               symbol: str = "y") -> DiffRational:
    """p1, p2 or p with every W_i/W written as y_i."""
    if name == "p1":
        return DiffRational.of(normalizer_substitution(printed_bracket(n, n - 1), n, ratio_symbol=symbol)[0])
    if name == "p2":
        return DiffRational.of(normalizer_substitution(printed_bracket(n, n - 2), n, ratio_symbol=symbol)[0])
    if name == "p":
        return normalizer_in_ratios(n, variant, symbol)
    raise ValueError(f"no ratio form for {name!r}")

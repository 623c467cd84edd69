"""Wronskian W = det[dx, ..., d^n x], its minors W_i and their laws under d -> g^-1 d.

Matrices have one row per coordinate and one column per derivative order.
W_i deletes the column d^i x from [dx, ..., d^(n+1) x]; W_(n+1) = W.
"""

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Union

from core.decorators import requires_dimension, requires_index
from core.jets import aux, x
from core.matrix import JetMatrix, det
from core.polynomial import DiffPolynomial
from core.rational import DiffRational
from .actions import phi_coefficient


def _as_polynomial(value: Union[int, DiffPolynomial]) -> DiffPolynomial:
    return value if isinstance(value, DiffPolynomial) else DiffPolynomial.constant(value)


def jet_matrix(n: int, orders: Iterable[int], extra_row: Optional[str] = None) -> JetMatrix:
    """Rows x_1..x_n (plus an auxiliary row), columns the given derivative orders."""
    orders = list(orders)
    rows = [[DiffPolynomial.variable(x(r, k)) for k in orders] for r in range(1, n + 1)]
    if extra_row is not None:
        rows.append([DiffPolynomial.variable(aux(extra_row, k)) for k in orders])
    return JetMatrix.from_rows(rows)


@lru_cache(maxsize=None)
@requires_dimension(1)
def wronskian(n: int) -> DiffPolynomial:
    """W^d = det[dx, d^2 x, ..., d^n x]."""
    return _as_polynomial(det(jet_matrix(n, range(1, n + 1))))


@lru_cache(maxsize=None)
@requires_index(1, 1)
def wronskian_minor(n: int, i: int) -> DiffPolynomial:
    """W^d_i: det of [dx, ..., d^(n+1) x] with d^i x deleted."""
    if i == n + 1:
        return wronskian(n)
    orders = [k for k in range(1, n + 2) if k != i]
    return _as_polynomial(det(jet_matrix(n, orders)))


def minor_ratio(n: int, i: int) -> DiffRational:
    """W_i / W."""
    return DiffRational(wronskian_minor(n, i), wronskian(n))


def scale_ratio(symbol: str = "g") -> DiffRational:
    """dg/g."""
    return DiffRational(DiffPolynomial.variable(aux(symbol, 1)),
                        DiffPolynomial.variable(aux(symbol)))


def _g_power(exponent: int, symbol: str = "g") -> DiffRational:
    return DiffRational.variable(aux(symbol)) ** exponent


def triangular(n: int) -> int:
    """n(n+1)/2."""
    return n * (n + 1) // 2


@requires_index(1, 1)
def predicted_minor_transform(n: int, j: int, symbol: str = "g") -> DiffRational:
    """g^(-(n+1)(n+2)/2) * sum_{i=j}^{n+1} (-1)^(i-j) Phi_{i,j}{g} W_i."""
    total = DiffPolynomial.sum(
        phi_coefficient(i, j, symbol) * wronskian_minor(n, i) * (-1 if (i - j) % 2 else 1)
        for i in range(j, n + 2))
    return DiffRational(total) * _g_power(-triangular(n + 1), symbol)


@requires_index(1, 1)
def minor_display(n: int, j: int, symbol: str = "g") -> DiffRational:
    """The written-out W^delta_j for j in {n+1, n, n-1, n-2} with u = dg/g."""
    c = triangular(n)
    u = scale_ratio(symbol)
    du = u.derive()
    W = DiffRational.of(wronskian(n))
    if j == n + 1:
        return _g_power(-c, symbol) * W
    Wn = DiffRational.of(wronskian_minor(n, n))
    if j == n:
        return _g_power(-c - 1, symbol) * (Wn - c * u * W)
    Wn1 = DiffRational.of(wronskian_minor(n, n - 1))
    if j == n - 1:
        bracket = (Wn1 - Fraction(n * (n - 1), 2) * u * Wn
                   + (Fraction((n - 1) * n * (n + 1), 6) * du
                      + Fraction((n - 1) * n * (n + 1) * (3 * n - 2), 24) * u ** 2) * W)
        return _g_power(-c - 2, symbol) * bracket
    if j == n - 2 and n >= 3:
        F = falling_factorial(n + 1, 4)
        Wn2 = DiffRational.of(wronskian_minor(n, n - 2))
        bracket = (Wn2 - Fraction((n - 1) * (n - 2), 2) * u * Wn1
                   + (Fraction((n - 2) * (n - 1) * n, 6) * du
                      + Fraction((n - 2) * (n - 1) * n * (3 * n - 5), 24) * u ** 2) * Wn
                   - (Fraction(F, 24) * du.derive()
                      + Fraction((2 * n - 3) * F, 24) * u * du
                      + Fraction((n - 1) * (n - 2) * F, 48) * u ** 3) * W)
        return _g_power(-c - 3, symbol) * bracket
    raise ValueError(f"no written-out law for j={j} at n={n}")


def falling_factorial(top: int, count: int) -> int:
    """top (top-1) ... (top-count+1); (n+1)!/(n-3)! is falling_factorial(n+1, 4)."""
    result = 1
    for k in range(count):
        result *= top - k
    return result


@requires_dimension(1)
def eq2_rhs(n: int, symbol: str = "g") -> DiffRational:
    """W^delta_n/W^delta = g^-1 (W_n/W - n(n+1)/2 dg/g)."""
    return _g_power(-1, symbol) * (minor_ratio(n, n) - triangular(n) * scale_ratio(symbol))


@requires_dimension(2)
def eq3_rhs(n: int, symbol: str = "g") -> DiffRational:
    """W^delta_(n-1)/W^delta, quadratic in dg/g."""
    u = scale_ratio(symbol)
    bracket = (minor_ratio(n, n - 1)
               - Fraction(n * (n - 1), 2) * minor_ratio(n, n) * u
               + Fraction((n - 1) * n * (n + 1), 6) * u.derive()
               + Fraction((n - 1) * n * (n + 1) * (3 * n - 2), 24) * u ** 2)
    return _g_power(-2, symbol) * bracket


@requires_dimension(1)
def eq4_rhs(n: int, symbol: str = "g") -> DiffRational:
    """(W^delta_n/W^delta)^2 = g^-2 ((W_n/W)^2 - n(n+1)(W_n/W dg/g - n(n+1)/4 (dg/g)^2))."""
    u = scale_ratio(symbol)
    ratio = minor_ratio(n, n)
    inner = ratio * u - Fraction(n * (n + 1), 4) * u ** 2
    return _g_power(-2, symbol) * (ratio ** 2 - n * (n + 1) * inner)


@requires_dimension(1)
def delta_ratio_rhs(n: int, symbol: str = "g") -> DiffRational:
    """delta(W^delta_n/W^delta) = g^-2 (d(W_n/W) - W_n/W dg/g - n(n+1)/2 d^2g/g + n(n+1)(dg/g)^2)."""
    u = scale_ratio(symbol)
    ratio = minor_ratio(n, n)
    second = DiffRational(DiffPolynomial.variable(aux(symbol, 2)), DiffPolynomial.variable(aux(symbol)))
    return _g_power(-2, symbol) * (ratio.derive() - ratio * u - triangular(n) * second
                                   + n * (n + 1) * u ** 2)


@requires_dimension(1)
def alternating_sum(n: int, y: str = "y") -> DiffPolynomial:
    """sum_{i=1}^{n+1} (-1)^(n+1-i) W_i d^i y."""
    return DiffPolynomial.sum(
        wronskian_minor(n, i) * DiffPolynomial.variable(aux(y, i)) * (-1 if (n + 1 - i) % 2 else 1)
        for i in range(1, n + 2))


@requires_dimension(1)
def extended_wronskian(n: int, y: str = "y") -> DiffPolynomial:
    """det[dx, ..., d^(n+1) x] with y appended as a last row."""
    return _as_polynomial(det(jet_matrix(n, range(1, n + 2), extra_row=y)))


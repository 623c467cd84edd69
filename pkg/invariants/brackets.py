"""Ratio brackets: W^delta_j / W^delta as polynomials in r_i and s.

With r_i standing for W_i/W (r_(n+1) = 1) and s for dg/g,

    W^delta_j / W^delta = g^-(n+1-j) * E_j,
    E_j = sum_{i=j}^{n+1} (-1)^(i-j) Phi~_{i,j} r_i,

where Phi~_{i,j} is Phi_{i,j}{g}/g^j with d^m g/g rewritten as q_m(s):
q_0 = 1, q_(m+1) = d q_m + s q_m.  Substituting s := (2/(n(n+1))) W_n/W and
its derivatives into E_j gives the weighted invariants.
"""

from fractions import Fraction
from functools import lru_cache
from typing import Dict, Mapping, Optional, Tuple

from core.jets import VarKey, aux
from core.polynomial import DiffPolynomial
from transforms.actions import phi_coefficient
from transforms.wronskian import falling_factorial, triangular, wronskian, wronskian_minor

BRACKET_SCALE = "s"
BRACKET_RATIO = "r"

# (numerator, power of the base polynomial in the denominator)
HomogeneousImage = Tuple[DiffPolynomial, int]


def s_jet(k: int = 0) -> DiffPolynomial:
    return DiffPolynomial.variable(aux(BRACKET_SCALE, k))


def r_var(i: int) -> DiffPolynomial:
    return DiffPolynomial.variable(VarKey(BRACKET_RATIO, i, 0))


@lru_cache(maxsize=None)
def scale_quotient(m: int) -> DiffPolynomial:
    """q_m(s) = d^m g / g written in s = dg/g."""
    if m == 0:
        return DiffPolynomial.constant(1)
    previous = scale_quotient(m - 1)
    return previous.derive() + s_jet() * previous


@lru_cache(maxsize=None)
def reduced_phi(k: int, i: int) -> DiffPolynomial:
    """Phi_{k,i}{g} / g^i as a polynomial in s-jets."""
    images = {aux("g", m): scale_quotient(m) for m in range(k)}
    return phi_coefficient(k, i).substitute(images)


def ratio_bracket(n: int, j: int) -> DiffPolynomial:
    """E_j built from the Phi coefficients."""
    if not 1 <= j <= n + 1:
        raise ValueError(f"bracket index {j} out of range 1..{n + 1}")
    terms = []
    for i in range(j, n + 2):
        ratio = DiffPolynomial.constant(1) if i == n + 1 else r_var(i)
        sign = -1 if (i - j) % 2 else 1
        terms.append(reduced_phi(i, j) * ratio * sign)
    return DiffPolynomial.sum(terms)


def printed_bracket(n: int, j: int) -> DiffPolynomial:
    """The written-out brackets for j = n-1 (n >= 2) and j = n-2 (n >= 3)."""
    s, ds, d2s = s_jet(0), s_jet(1), s_jet(2)
    if j == n - 1 and n >= 2:
        return (r_var(n - 1)
                - r_var(n) * s * Fraction(n * (n - 1), 2)
                + ds * Fraction((n - 1) * n * (n + 1), 6)
                + s ** 2 * Fraction((n - 1) * n * (n + 1) * (3 * n - 2), 24))
    if j == n - 2 and n >= 3:
        F = falling_factorial(n + 1, 4)
        return (r_var(n - 2)
                - r_var(n - 1) * s * Fraction((n - 1) * (n - 2), 2)
                + (ds * Fraction((n - 2) * (n - 1) * n, 6)
                   + s ** 2 * Fraction((n - 2) * (n - 1) * n * (3 * n - 5), 24)) * r_var(n)
                - (d2s * Fraction(F, 24)
                   + s * ds * Fraction((2 * n - 3) * F, 24)
                   + s ** 3 * Fraction((n - 1) * (n - 2) * F, 48)))
    raise ValueError(f"no written-out bracket for j={j} at n={n}")


def substitute_homogeneous(p: DiffPolynomial, images: Mapping[VarKey, HomogeneousImage],
                           base: DiffPolynomial) -> Tuple[DiffPolynomial, int]:
    """Substitute v -> N_v / base^m_v and clear denominators.

    Returns (numerator, M) with p(images) = numerator / base^M.
    """
    weights = {}
    for mono, _ in p.items():
        weights[mono] = sum(images[key][1] * exp for key, exp in mono)
    top = max(weights.values(), default=0)
    base_powers: Dict[int, DiffPolynomial] = {0: DiffPolynomial.constant(1)}
    num_powers: Dict[Tuple[VarKey, int], DiffPolynomial] = {}

    def base_power(e: int) -> DiffPolynomial:
        if e not in base_powers:
            base_powers[e] = base_power(e - 1) * base
        return base_powers[e]

    def image_power(key: VarKey, e: int) -> DiffPolynomial:
        if (key, e) not in num_powers:
            num_powers[(key, e)] = images[key][0] if e == 1 else image_power(key, e - 1) * images[key][0]
        return num_powers[(key, e)]

    pieces = []
    for mono, coeff in p.items():
        term = base_power(top - weights[mono]).scale(coeff)
        for key, exp in mono:
            term = term * image_power(key, exp)
        pieces.append(term)
    return DiffPolynomial.sum(pieces), top


def _derive_over_base(num: DiffPolynomial, power: int, base: DiffPolynomial,
                      base_derivative: DiffPolynomial) -> HomogeneousImage:
    """d(num / base^power) = (d num * base - power * num * d base) / base^(power+1)."""
    return num.derive() * base - num * base_derivative * power, power + 1


@lru_cache(maxsize=None)
def wronskian_images(n: int, depth: int = 2) -> Dict[VarKey, HomogeneousImage]:
    """r_i -> W_i/W and s^(k) -> d^k(W_n/W)/c over the base W, c = n(n+1)/2.

    dW = W_n, so every image has the form N / W^m.
    """
    W = wronskian(n)
    Wn = wronskian_minor(n, n)
    images: Dict[VarKey, HomogeneousImage] = {
        VarKey(BRACKET_RATIO, i, 0): (wronskian_minor(n, i), 1) for i in range(1, n + 1)}
    scale = Fraction(1, triangular(n))
    current: HomogeneousImage = (Wn, 1)
    for k in range(depth + 1):
        images[aux(BRACKET_SCALE, k)] = (current[0].scale(scale), current[1])
        if k < depth:
            current = _derive_over_base(current[0], current[1], W, Wn)
    return images


def ratio_symbol_images(n: int, symbol: str = "y", depth: int = 2) -> Dict[VarKey, HomogeneousImage]:
    """r_i -> y_i and s^(k) -> d^k y_n / c: the bracket in ratio symbols."""
    scale = Fraction(1, triangular(n))
    images: Dict[VarKey, HomogeneousImage] = {
        VarKey(BRACKET_RATIO, i, 0): (DiffPolynomial.variable(VarKey(symbol, i, 0)), 0)
        for i in range(1, n + 1)}
    for k in range(depth + 1):
        images[aux(BRACKET_SCALE, k)] = (DiffPolynomial.variable(VarKey(symbol, n, k)).scale(scale), 0)
    return images


def normalizer_substitution(bracket: DiffPolynomial, n: int,
                            ratio_symbol: Optional[str] = None) -> Tuple[DiffPolynomial, int]:
    """Substitute s := (2/(n(n+1))) W_n/W into a bracket.

    Returns (N, M) with the result N / W^M; with `ratio_symbol` the ratios
    W_i/W stay symbolic as y_i and M is 0.
    """
    if ratio_symbol is not None:
        return substitute_homogeneous(bracket, ratio_symbol_images(n, ratio_symbol),
                                      DiffPolynomial.constant(1))
    return substitute_homogeneous(bracket, wronskian_images(n), wronskian(n))


"""Affine group action on jets and reparametrized derivations.

The affine map x -> h x + h0 has constant entries, so on jets it acts by
d^k x -> h d^k x for k >= 1.  A reparametrized derivation is delta = g^-1 d
for a differential indeterminate g, or delta = p^-1 d for a fixed rational
function p of the jets.
"""

import math
import threading
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, Mapping, Optional, Sequence, Tuple

from config.logger_config import get_logger
from core.jets import VarKey, aux, x
from core.matrix import fraction_det, fraction_inverse
from core.polynomial import DiffPolynomial
from core.rational import DiffRational, eq_rational

logger = get_logger("diff_invariants.transforms")

Matrix = Tuple[Tuple[Fraction, ...], ...]
Vector = Tuple[Fraction, ...]


@dataclass(frozen=True)
class AffineMap:
    """Element (h, h0) of GL(n)⋉Q^n acting by x -> h x + h0."""
    h: Matrix
    h0: Vector

    def __post_init__(self):
        h = tuple(tuple(Fraction(v) for v in row) for row in self.h)
        h0 = tuple(Fraction(v) for v in self.h0)
        n = len(h)
        if n == 0 or any(len(row) != n for row in h):
            raise ValueError("h must be a nonempty square matrix")
        if len(h0) != n:
            raise ValueError(f"h0 has length {len(h0)}, expected {n}")
        if fraction_det(h) == 0:
            raise ValueError("h is singular")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "h0", h0)

    @classmethod
    def identity(cls, n: int) -> "AffineMap":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), (0,) * n)

    @classmethod
    def linear(cls, h: Sequence[Sequence[Fraction]]) -> "AffineMap":
        return cls(tuple(map(tuple, h)), (0,) * len(h))

    @property
    def n(self) -> int:
        return len(self.h)

    def determinant(self) -> Fraction:
        return fraction_det(self.h)

    def compose(self, other: "AffineMap") -> "AffineMap":
        """(h, h0)∘(h', h0') = (h h', h h0' + h0)."""
        if other.n != self.n:
            raise ValueError("dimension mismatch in composition")
        hh = tuple(tuple(sum(self.h[i][k] * other.h[k][j] for k in range(self.n))
                         for j in range(self.n)) for i in range(self.n))
        shift = tuple(sum(self.h[i][k] * other.h0[k] for k in range(self.n)) + self.h0[i]
                      for i in range(self.n))
        return AffineMap(hh, shift)

    def inverse(self) -> "AffineMap":
        inv = fraction_inverse(self.h)
        shift = tuple(-sum(inv[i][k] * self.h0[k] for k in range(self.n)) for i in range(self.n))
        return AffineMap(inv, shift)

    def apply(self, vector: Sequence[Fraction], translate: bool = True) -> Vector:
        """h v (+ h0 when translate) for a concrete vector."""
        return tuple(sum(self.h[i][j] * vector[j] for j in range(self.n))
                     + (self.h0[i] if translate else 0) for i in range(self.n))

    def is_orthogonal(self) -> bool:
        """h^T h == I exactly."""
        return all(sum(self.h[k][i] * self.h[k][j] for k in range(self.n)) == int(i == j)
                   for i in range(self.n) for j in range(self.n))


class DerivationKind(IntEnum):
    """Which derivation D denotes."""
    BASE = 0
    G_REPARAM = 1
    P_REPARAM = 2

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def from_label(cls, label: str) -> "DerivationKind":
        try:
            return cls[label.strip().upper().replace("-", "_")]
        except KeyError:
            raise ValueError(f"unknown derivation {label!r}")


@dataclass(frozen=True, eq=False)
class DerivationSpec:
    """The derivation in force: d, g^-1 d, or p^-1 d."""
    kind: DerivationKind
    p: Optional[DiffRational] = None
    scale_symbol: str = "g"
    _jets: Dict[Tuple[VarKey, int], DiffRational] = field(
        default_factory=dict, repr=False, compare=False)
    _lock: threading.RLock = field(default_factory=threading.RLock, repr=False, compare=False)

    def __post_init__(self):
        if self.kind == DerivationKind.P_REPARAM:
            if self.p is None or DiffRational.of(self.p).is_zero():
                raise ValueError("p-reparametrization needs a nonzero p")
            object.__setattr__(self, "p", DiffRational.of(self.p))

    @classmethod
    def base(cls) -> "DerivationSpec":
        return cls(DerivationKind.BASE)

    @classmethod
    def g_reparam(cls, symbol: str = "g") -> "DerivationSpec":
        return cls(DerivationKind.G_REPARAM, scale_symbol=symbol)

    @classmethod
    def p_reparam(cls, p: DiffRational) -> "DerivationSpec":
        return cls(DerivationKind.P_REPARAM, p=p)

    def divisor(self) -> DiffRational:
        """The factor delta = divisor^-1 d."""
        if self.kind == DerivationKind.G_REPARAM:
            return DiffRational.variable(aux(self.scale_symbol))
        if self.kind == DerivationKind.P_REPARAM:
            return self.p
        return DiffRational.of(1)

    def scale_key(self, order: int = 0) -> VarKey:
        return aux(self.scale_symbol, order)


def _check_dimension(f: DiffRational, n: int) -> None:
    for key in f.variables():
        if key.is_coordinate() and key.index > n:
            raise ValueError(f"dimension mismatch: {key.symbol} under a map of dimension {n}")


def act_affine(f, m: AffineMap) -> DiffRational:
    """Substitute x -> h x + h0 into f."""
    f = DiffRational.of(f)
    _check_dimension(f, m.n)
    images: Dict[VarKey, DiffPolynomial] = {}
    for key in f.variables():
        if not key.is_coordinate():
            continue
        row = m.h[key.index - 1]
        terms = [(row[j], {x(j + 1, key.order): 1}) for j in range(m.n)]
        if key.order == 0:
            terms.append((m.h0[key.index - 1], {}))
        images[key] = DiffPolynomial.from_terms(terms)
    den = f.den if f.den.is_constant() else f.den.substitute(images)
    return DiffRational(f.num.substitute(images), den)


def delta_apply(f, spec: DerivationSpec) -> DiffRational:
    """One application of delta: g^-1 d f, p^-1 d f, or d f."""
    derived = DiffRational.of(f).derive()
    if spec.kind == DerivationKind.BASE:
        return derived
    return derived / spec.divisor()


def delta_power(key: VarKey, k: int, spec: DerivationSpec) -> DiffRational:
    """delta^k of the base indeterminate of `key`, memoized per derivation."""
    base = key.at_order(0)
    if spec.kind == DerivationKind.BASE:
        return DiffRational.variable(base.raised(k))
    with spec._lock:
        cached = spec._jets.get((base, k))
        if cached is not None:
            return cached
        if k == 0:
            value = DiffRational.variable(base)
        else:
            value = delta_apply(delta_power(base, k - 1, spec), spec)
            logger.debug("delta^%d %s: %d terms", k, base.symbol, value.size())
        spec._jets[(base, k)] = value
        return value


def delta_jet(i: int, k: int, spec: DerivationSpec) -> DiffRational:
    """delta^k x_i in terms of d-jets (and g-jets)."""
    return delta_power(x(i), k, spec)


def reinterpret(f, spec: DerivationSpec) -> DiffRational:
    """f^delta: every jet d^k x_i in f replaced by delta^k x_i."""
    f = DiffRational.of(f)
    if spec.kind == DerivationKind.BASE:
        return f
    mapping = {key: delta_jet(key.index, key.order, spec)
               for key in f.variables() if key.is_coordinate() and key.order > 0}
    if not mapping:
        return f
    return f.substitute(mapping)


def compose_indeterminates(f, images: Mapping[str, DiffRational],
                           spec: Optional[DerivationSpec] = None) -> DiffRational:
    """Replace each jet d^k t of an auxiliary t by delta^k(images[t]).

    With images {t1: phi1, ...} this builds pbar<phi1, ...>; a derivation
    other than d gives pbar^delta<phi1, ...>.
    """
    spec = spec or DerivationSpec.base()
    f = DiffRational.of(f)
    iterates: Dict[str, list] = {}
    mapping: Dict[VarKey, DiffRational] = {}
    for key in sorted(f.variables()):
        if key.symbol not in images:
            continue
        chain = iterates.setdefault(key.symbol, [DiffRational.of(images[key.symbol])])
        while len(chain) <= key.order:
            chain.append(delta_apply(chain[-1], spec))
        mapping[key] = chain[key.order]
    return f.substitute(mapping) if mapping else f


def _partitions(total: int, parts: int, largest: int) -> Iterator[Tuple[int, ...]]:
    """Partitions of total into exactly `parts` parts <= largest, parts descending."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(min(largest, total - parts + 1), 0, -1):
        if first * parts < total:
            break
        for rest in _partitions(total - first, parts - 1, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def phi_coefficient(k: int, i: int, symbol: str = "g") -> DiffPolynomial:
    """Phi_{k,i}{g}: coefficient of delta^i in d^k = sum_i Phi_{k,i} delta^i.

    Sum over alpha with |alpha| = i and sum_j j*alpha_j = k of
    k!/(prod alpha_j! (j!)^alpha_j) * prod (d^(j-1) g)^alpha_j.
    """
    if k < 1 or not 1 <= i <= k:
        raise ValueError(f"phi_coefficient needs 1 <= i <= k, got k={k}, i={i}")
    terms = []
    for partition in _partitions(k, i, k):
        alpha: Dict[int, int] = {}
        for part in partition:
            alpha[part] = alpha.get(part, 0) + 1
        denominator = 1
        for j, count in alpha.items():
            denominator *= math.factorial(count) * math.factorial(j) ** count
        powers = {aux(symbol, j - 1): count for j, count in alpha.items()}
        terms.append((Fraction(math.factorial(k), denominator), powers))
    return DiffPolynomial.from_terms(terms)


def phi_expansion(k: int, symbol: str = "g") -> DiffRational:
    """sum_i Phi_{k,i}{g} delta^i x1 with delta = g^-1 d, written back in d-jets."""
    if k < 1:
        raise ValueError("k must be positive")
    spec = DerivationSpec.g_reparam(symbol)
    return sum((DiffRational.of(phi_coefficient(k, i, symbol)) * delta_jet(1, i, spec)
                for i in range(1, k + 1)), DiffRational.of(0))


def check_phi_expansion(k: int, symbol: str = "g") -> bool:
    """Whether d^k x1 == sum_i Phi_{k,i}{g} delta^i x1 exactly."""
    holds = eq_rational(DiffRational.variable(x(1, k)), phi_expansion(k, symbol))
    logger.debug("phi expansion k=%d: %s", k, holds)
    return holds

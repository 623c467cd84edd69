"""Group catalog: samplers, algebraic generators and normalizers of subgroups H.

A differential generating system of the H-invariants is
{W_i/W} ∪ {phi_j(x, dx, ..., d^n x)} where the phi_j generate the algebraic
invariants of H acting on (z_1, ..., z_(n+1)) by
(h z_1 + h0, h z_2, ..., h z_(n+1)).  The phi_j are catalog data.
"""

from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from config.catalog_loader import GroupCatalogLoader
from config.config_loader import get_value_range
from config.logger_config import get_logger
from core.grammar import parse_rational
from core.jets import JetSpace, aux, x
from core.matrix import JetMatrix, det
from core.polynomial import DiffPolynomial
from core.rational import DiffRational
from evaluation.identity import IdentityReport, InvarianceReport, check_law
from evaluation.points import Pullback, random_rational
from transforms.actions import AffineMap, DerivationSpec
from transforms.wronskian import wronskian
from .weighted import (
    NormalizerVariant, WeightedInvariant, gl_generators, normalizer_in_ratios, p_weight1)

logger = get_logger("diff_invariants.invariants")

BUILTIN_PREFIX = "builtin:"
BUILTIN_NORMALIZER = "builtin:normalizer"
BUILTIN_RELATION = "builtin:normalizer-in-ratios"
LINEAR_COORDINATES = "linear-coordinates"
RELATION_SYMBOL = "t"
RATIO_SYMBOL = "y"

SeedLike = Union[int, np.random.Generator, None]


class SamplerKind(IntEnum):
    """How elements of a group are drawn."""
    GL_AFFINE = 1
    GL_LINEAR = 2
    ORTHOGONAL = 3
    ORTHOGONAL_AFFINE = 4

    @property
    def label(self) -> str:
        return self.name.lower()

    @property
    def translates(self) -> bool:
        return self in (SamplerKind.GL_AFFINE, SamplerKind.ORTHOGONAL_AFFINE)

    @property
    def orthogonal(self) -> bool:
        return self in (SamplerKind.ORTHOGONAL, SamplerKind.ORTHOGONAL_AFFINE)

    @classmethod
    def from_label(cls, label: str) -> "SamplerKind":
        try:
            return cls[label.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown sampler {label!r}")


@dataclass(frozen=True)
class GroupSpec:
    """A subgroup H ⊂ GL(n)⋉C^n as catalog data.

    Attributes:
        name: Catalog key, e.g. "orthogonal"
        sampler: Element sampler, which also fixes the membership predicate
        dimension: Fixed n, or None for every n >= 2
        generators: phi_j as expressions over x and the blocks z1..z(n+1)
        builtin_generators: Name of a generated family, e.g. "linear-coordinates"
        normalizer: Expression for p, or "builtin:normalizer" for p_weight1
        relation: p written through t_j (= phi_j) and y_i (= W_i/W), if known
    """
    name: str
    sampler: SamplerKind
    dimension: Optional[int] = None
    generators: Tuple[str, ...] = ()
    builtin_generators: Optional[str] = None
    normalizer: str = BUILTIN_NORMALIZER
    relation: Optional[str] = None
    title: str = ""

    @classmethod
    def from_entry(cls, entry: Dict) -> "GroupSpec":
        return cls(
            name=entry["name"],
            sampler=SamplerKind.from_label(entry["sampler"]),
            dimension=entry.get("dimension"),
            generators=tuple(entry.get("generators") or ()),
            builtin_generators=entry.get("builtin_generators"),
            normalizer=entry["p"],
            relation=entry.get("relation"),
            title=entry.get("title", ""),
        )

    def dimension_for(self, n: Optional[int] = None) -> int:
        if self.dimension is not None:
            if n is not None and n != self.dimension:
                raise ValueError(f"group {self.name} is defined for n={self.dimension}, got n={n}")
            return self.dimension
        if n is None:
            raise ValueError(f"group {self.name} needs an explicit dimension n")
        if n < 2:
            raise ValueError(f"group {self.name} requires n >= 2, got {n}")
        return n

    def space(self, n: Optional[int] = None) -> JetSpace:
        return JetSpace(self.dimension_for(n))

    def algebraic_generators(self, n: Optional[int] = None) -> List[DiffRational]:
        """phi_j(x, dx, ..., d^n x), catalog expressions first, then the builtin family."""
        space = self.space(n)
        result = [parse_rational(text, space) for text in self.generators]
        if self.builtin_generators == LINEAR_COORDINATES:
            result.extend(linear_coordinates(space.n))
        elif self.builtin_generators:
            raise ValueError(f"unknown builtin generator family {self.builtin_generators!r}")
        return result

    def generator_labels(self, n: Optional[int] = None) -> List[str]:
        """Display names matching h_generators(self, n)."""
        n = self.dimension_for(n)
        labels = [f"W{i}/W" for i in range(1, n + 1)] + list(self.generators)
        if self.builtin_generators == LINEAR_COORDINATES:
            labels.extend(f"coord{k}(x)" for k in range(1, n + 1))
        return labels

    def normalizer_expr(self, n: Optional[int] = None,
                        variant: NormalizerVariant = NormalizerVariant.LOG_DERIVATIVE) -> DiffRational:
        n = self.dimension_for(n)
        if self.normalizer == BUILTIN_NORMALIZER:
            return p_weight1(n, variant).expr
        if self.normalizer.startswith(BUILTIN_PREFIX):
            raise ValueError(f"unknown builtin normalizer {self.normalizer!r}")
        return parse_rational(self.normalizer, self.space(n))

    def normalized_derivation(self, n: Optional[int] = None,
                              variant: NormalizerVariant = NormalizerVariant.LOG_DERIVATIVE) -> DerivationSpec:
        return DerivationSpec.p_reparam(self.normalizer_expr(n, variant))

    def relation_expr(self, n: Optional[int] = None,
                      variant: NormalizerVariant = NormalizerVariant.LOG_DERIVATIVE) -> Optional[DiffRational]:
        """p through the generators: t_j for phi_j, y_i for W_i/W."""
        if self.relation is None:
            return None
        n = self.dimension_for(n)
        if self.relation == BUILTIN_RELATION:
            return normalizer_in_ratios(n, variant, RATIO_SYMBOL)
        return parse_rational(self.relation, self.space(n))

    def contains(self, m: AffineMap) -> bool:
        """Membership predicate of the sampler's group."""
        if self.dimension is not None and m.n != self.dimension:
            return False
        if not self.sampler.translates and any(m.h0):
            return False
        return m.is_orthogonal() if self.sampler.orthogonal else True


def linear_coordinates(n: int) -> List[DiffRational]:
    """Coordinates of x in the basis dx, ..., d^n x: det[.., x, ..]/W (Cramer)."""
    W = wronskian(n)
    columns = [[DiffPolynomial.variable(x(i, k)) for i in range(1, n + 1)] for k in range(1, n + 1)]
    position = [DiffPolynomial.variable(x(i)) for i in range(1, n + 1)]
    result = []
    for k in range(n):
        replaced = columns[:k] + [position] + columns[k + 1:]
        result.append(DiffRational(det(JetMatrix.from_columns(replaced)), W))
    return result


# ----------------------------------------------------------------------
# Catalog

def load_catalog(path: Optional[str] = None) -> Dict[str, GroupSpec]:
    loader = GroupCatalogLoader(path)
    return {name: GroupSpec.from_entry(loader.get_entry(name)) for name in loader.names()}


def get_group(name: str, path: Optional[str] = None) -> GroupSpec:
    catalog = load_catalog(path)
    if name not in catalog:
        raise ValueError(f"unknown group {name!r} (catalog has {', '.join(sorted(catalog))})")
    return catalog[name]


# ----------------------------------------------------------------------
# Sampling

def _generator(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def orthogonal_element(t, reflect: bool = False, shift: Sequence = (0, 0)) -> AffineMap:
    """Rational point ((1-t^2)/(1+t^2), 2t/(1+t^2)) of the circle as a rotation or reflection."""
    t = Fraction(t)
    c = (1 - t * t) / (1 + t * t)
    s = 2 * t / (1 + t * t)
    if reflect:
        h = ((c, s), (s, -c))
    else:
        h = ((c, -s), (s, c))
    return AffineMap(h, tuple(shift))


def _integer_matrix(rng: np.random.Generator, n: int) -> Tuple[Tuple[int, ...], ...]:
    low, high = get_value_range()
    while True:
        h = tuple(tuple(int(v) for v in row) for row in rng.integers(low, high + 1, size=(n, n)))
        try:
            return AffineMap.linear(h).h
        except ValueError:
            continue


def sample_element(group: GroupSpec, seed: SeedLike = None, n: Optional[int] = None) -> AffineMap:
    """Exact element of H, deterministic per seed."""
    rng = _generator(seed)
    n = group.dimension_for(n)
    if group.sampler.orthogonal:
        if n != 2:
            raise ValueError("orthogonal samplers are defined for n = 2")
        t = random_rational(rng)
        reflect = bool(rng.integers(0, 2))
        shift = tuple(random_rational(rng) for _ in range(2)) if group.sampler.translates else (0, 0)
        return orthogonal_element(t, reflect, shift)
    h = _integer_matrix(rng, n)
    shift = tuple(random_rational(rng) for _ in range(n)) if group.sampler.translates else (0,) * n
    return AffineMap(h, shift)


def describe_element(m: AffineMap) -> Dict[str, str]:
    return {
        "h": "[" + "; ".join(" ".join(str(v) for v in row) for row in m.h) + "]",
        "h0": "(" + ", ".join(str(v) for v in m.h0) + ")",
    }


# ----------------------------------------------------------------------
# Generators and the worked examples

def h_generators(group: GroupSpec, n: Optional[int] = None) -> List[DiffRational]:
    """{W_i/W : i = 1..n} ∪ {phi_j(x, dx, ..., d^n x)}."""
    n = group.dimension_for(n)
    return gl_generators(n) + group.algebraic_generators(n)


def _dot(a: Sequence[DiffPolynomial], b: Sequence[DiffPolynomial]) -> DiffPolynomial:
    return DiffPolynomial.sum(u * v for u, v in zip(a, b))


def _jet_vector(k: int) -> Tuple[DiffPolynomial, DiffPolynomial]:
    return DiffPolynomial.variable(x(1, k)), DiffPolynomial.variable(x(2, k))


def example3_p() -> DiffRational:
    """(x, dx) = x1 dx1 + x2 dx2, the normalizer for O(2)."""
    return DiffRational.of(_dot(_jet_vector(0), _jet_vector(1)))


def example4_p() -> DiffRational:
    """d(det[dx, d^2x]^2 / (dx, dx)^3), the normalizer for O(2)⋉R^2."""
    first, second = _jet_vector(1), _jet_vector(2)
    minor = first[0] * second[1] - first[1] * second[0]
    speed = _dot(first, first)
    return DiffRational(minor ** 2, speed ** 3).derive()


def example4_pbar() -> DiffRational:
    """d((t1 t2 - 1/4 (dt1)^2) / t1^3): example4_p through phi1 = (dx,dx), phi2 = (d^2x,d^2x)."""
    t1, t2 = DiffPolynomial.variable(aux("t1")), DiffPolynomial.variable(aux("t2"))
    dt1 = DiffPolynomial.variable(aux("t1", 1))
    return DiffRational(t1 * t2 - dt1 ** 2 * Fraction(1, 4), t1 ** 3).derive()


# ----------------------------------------------------------------------
# Invariance checks

def check_H_invariance(f, group: GroupSpec, trials: Optional[int] = None, seed: Optional[int] = None,
                       n: Optional[int] = None, name: str = "H-invariance") -> InvarianceReport:
    """f against act_affine(f, h) for random h in H."""
    n = group.dimension_for(n)
    base = Pullback.of(f, n)

    def build(rng):
        m = sample_element(group, rng, n)
        return base.act(m), base, describe_element(m)

    return check_law(name, build, trials, seed, n, report_cls=InvarianceReport, group=group.name)


def check_FH_invariance(f, group: GroupSpec, trials: Optional[int] = None, seed: Optional[int] = None,
                        n: Optional[int] = None, name: str = "FH-invariance") -> InvarianceReport:
    """f against reinterpret(act_affine(f, h), g^-1 d), with symbolic g drawn as jets."""
    n = group.dimension_for(n)
    base = Pullback.of(f, n)
    scale = DerivationSpec.g_reparam()

    def build(rng):
        m = sample_element(group, rng, n)
        return base.act(m).reparam(scale), base, describe_element(m)

    return check_law(name, build, trials, seed, n, report_cls=InvarianceReport, group=group.name)


def check_weight_law(invariant: WeightedInvariant, group: Optional[GroupSpec] = None,
                     trials: Optional[int] = None, seed: Optional[int] = None,
                     weight: Optional[int] = None) -> IdentityReport:
    """f^(g^-1 d)<h x + h0> = g^-w f^d<x> for random h in H (default GL(n)⋉C^n)."""
    n = invariant.n
    group = group or get_group("gl_affine")
    w = invariant.weight if weight is None else weight
    base = Pullback.of(invariant.expr, n)
    scale = DerivationSpec.g_reparam()
    expected = DiffRational.variable(scale.scale_key()) ** (-w) * invariant.expr

    def build(rng):
        m = sample_element(group, rng, n)
        return base.act(m).reparam(scale), expected, describe_element(m)

    return check_law(f"weight {invariant.name}", build, trials, seed, n,
                     report_cls=InvarianceReport, group=group.name)

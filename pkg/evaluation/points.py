"""Random exact points of jet space and pulling them back through operators.

An identity between expressions built with act_affine and reinterpret is
checked at a point without expanding it: the value of
s1(s2(... sk(f))) at a is f evaluated at Tk(... T1(a)), where each step
transforms the assignment (affine maps act on the x-jets, reparametrizations
replace them by delta-jets computed from truncated series).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from config.config_loader import get_value_range
from config.logger_config import get_logger
from core.jets import COORDINATE, VarKey, x
from core.rational import DiffRational
from transforms.actions import AffineMap, DerivationKind, DerivationSpec, act_affine, reinterpret
from .series import JetSeries, delta_series, series_of

logger = get_logger("diff_invariants.evaluation")

Assignment = Dict[VarKey, Fraction]
# (base, index) -> highest jet order needed
OrderNeeds = Dict[Tuple[str, int], int]


def evaluate(f, a: Mapping[VarKey, Fraction]) -> Fraction:
    """Exact value of f at a.

    Raises:
        ValueError: a does not cover the variables of f
        ZeroDivisionError: the denominator of f vanishes at a
    """
    return DiffRational.of(f).evaluate(a)


def random_rational(rng: np.random.Generator, value_range: Optional[Tuple[int, int]] = None) -> Fraction:
    """Numerator and nonzero denominator drawn uniformly from the value range."""
    low, high = value_range or get_value_range()
    numerator = int(rng.integers(low, high + 1))
    denominator = 0
    while denominator == 0:
        denominator = int(rng.integers(low, high + 1))
    return Fraction(numerator, denominator)


def random_assignment(keys: Iterable[VarKey], rng: np.random.Generator,
                      value_range: Optional[Tuple[int, int]] = None) -> Assignment:
    """Independent random rationals for the given variables, drawn in sorted order."""
    return {key: random_rational(rng, value_range) for key in sorted(set(keys))}


def order_needs(f) -> OrderNeeds:
    needs: OrderNeeds = {}
    for key in DiffRational.of(f).variables():
        slot = (key.base, key.index)
        needs[slot] = max(needs.get(slot, 0), key.order)
    return needs


def _merge(needs: OrderNeeds, slot: Tuple[str, int], order: int) -> None:
    needs[slot] = max(needs.get(slot, -1), order)


def _x_orders(needs: Mapping[Tuple[str, int], int]) -> Dict[int, int]:
    return {index: order for (base, index), order in needs.items() if base == COORDINATE}


@dataclass(frozen=True)
class AffineStep:
    """act_affine(., m) at the point level: x-jets replaced by h d^k x (+ h0 at order 0)."""
    m: AffineMap

    def requirements(self, needs: OrderNeeds) -> OrderNeeds:
        result = dict(needs)
        x_orders = _x_orders(needs)
        if x_orders:
            top = max(x_orders.values())
            for j in range(1, self.m.n + 1):
                _merge(result, (COORDINATE, j), top)
        return result

    def pull(self, a: Mapping[VarKey, Fraction], needs: OrderNeeds) -> Assignment:
        result = dict(a)
        orders = sorted({key.order for key in a if key.is_coordinate()})
        for k in orders:
            column = [a.get(x(j, k)) for j in range(1, self.m.n + 1)]
            if any(v is None for v in column):
                continue
            image = self.m.apply(column, translate=(k == 0))
            for j, value in enumerate(image, start=1):
                result[x(j, k)] = value
        return result

    def expand(self, f: DiffRational) -> DiffRational:
        return act_affine(f, self.m)


@dataclass(frozen=True)
class ReparamStep:
    """reinterpret(., spec) at the point level: d^k x_i replaced by the value of delta^k x_i."""
    spec: DerivationSpec

    def requirements(self, needs: OrderNeeds) -> OrderNeeds:
        result = dict(needs)
        x_orders = _x_orders(needs)
        top = max(x_orders.values(), default=0)
        if top == 0 or self.spec.kind == DerivationKind.BASE:
            return result
        if self.spec.kind == DerivationKind.G_REPARAM:
            _merge(result, (self.spec.scale_symbol, 0), top - 1)
            return result
        for (base, index), order in order_needs(self.spec.p).items():
            _merge(result, (base, index), order + top - 1)
        return result

    def _divisor(self, a: Mapping[VarKey, Fraction], length: int) -> JetSeries:
        if self.spec.kind == DerivationKind.G_REPARAM:
            return JetSeries.of_variable(a, self.spec.scale_key(), length)
        return series_of(self.spec.p, a, length)

    def pull(self, a: Mapping[VarKey, Fraction], needs: OrderNeeds) -> Assignment:
        """delta-jets up to the orders the next step needs; other x-jets are dropped."""
        tops = _x_orders(needs)
        top = max(tops.values(), default=0)
        if top == 0 or self.spec.kind == DerivationKind.BASE:
            return dict(a)
        divisor = self._divisor(a, top)
        result = {key: value for key, value in a.items() if not key.is_coordinate()}
        for index, order in tops.items():
            start = JetSeries.of_variable(a, x(index), order + 1)
            for k, value in enumerate(delta_series(start, divisor, order)):
                result[x(index, k)] = value
        return result

    def expand(self, f: DiffRational) -> DiffRational:
        return reinterpret(f, self.spec)


Step = Union[AffineStep, ReparamStep]


@dataclass(frozen=True, eq=False)
class Pullback:
    """f with operators applied: steps (s1, ..., sk) denote s1(s2(... sk(f)))."""
    expr: DiffRational
    n: int
    steps: Tuple[Step, ...] = field(default=())

    @classmethod
    def of(cls, f, n: int) -> "Pullback":
        if isinstance(f, Pullback):
            return f
        return cls(DiffRational.of(f), n)

    def act(self, m: AffineMap) -> "Pullback":
        """act_affine applied on the outside."""
        if m.n != self.n:
            raise ValueError(f"dimension mismatch: map of dimension {m.n} on a space of dimension {self.n}")
        return Pullback(self.expr, self.n, (AffineStep(m),) + self.steps)

    def reparam(self, spec: DerivationSpec) -> "Pullback":
        """reinterpret applied on the outside."""
        return Pullback(self.expr, self.n, (ReparamStep(spec),) + self.steps)

    def _needs_chain(self) -> List[OrderNeeds]:
        """chain[0] covers the input point; chain[i + 1] is what steps[i] must deliver."""
        chain = [order_needs(self.expr)]
        for step in reversed(self.steps):
            chain.append(step.requirements(chain[-1]))
        chain.reverse()
        return chain

    def requirements(self) -> OrderNeeds:
        return self._needs_chain()[0]

    def variables(self) -> List[VarKey]:
        """Every jet a random assignment must cover."""
        keys = []
        for (base, index), top in self.requirements().items():
            keys.extend(VarKey(base, index, k) for k in range(top + 1))
        return sorted(keys)

    def pull(self, a: Mapping[VarKey, Fraction]) -> Assignment:
        chain = self._needs_chain()
        point = dict(a)
        for i, step in enumerate(self.steps):
            point = step.pull(point, chain[i + 1])
        return point

    def evaluate(self, a: Mapping[VarKey, Fraction]) -> Fraction:
        return self.expr.evaluate(self.pull(a))

    def expand(self) -> DiffRational:
        """The symbolic expression; may be large for p-reparametrizations."""
        f = self.expr
        for step in reversed(self.steps):
            f = step.expand(f)
            logger.debug("expanded %s: %d terms", type(step).__name__, f.size())
        return f


def covering_keys(items: Sequence[Pullback]) -> List[VarKey]:
    keys = set()
    for item in items:
        keys.update(item.variables())
    return sorted(keys)

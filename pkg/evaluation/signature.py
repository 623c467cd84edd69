"""Invariant signatures of concrete curves and the equivalence verdict.

The signature of c at t0 is the list of delta-reinterpreted generators of
the group, delta = p^-1 d, evaluated on the jets of c at t0.  Two curves
related by h c1(phi(s)) + h0 have equal signatures at matched points.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List

from config.logger_config import get_logger
from core.jets import VarKey
from invariants.groups import BUILTIN_NORMALIZER, GroupSpec, h_generators
from invariants.weighted import NormalizerVariant, p1
from transforms.wronskian import wronskian
from .curves import CurveSpec, Scalar, jets_of_curve
from .points import Pullback, evaluate

logger = get_logger("diff_invariants.evaluation")

VERDICT_EQUAL = "signatures-equal"
VERDICT_DIFFER = "signatures-differ"


class DegenerateCurveError(ValueError):
    """W, p1 or p vanishes at the evaluation point (curve not in common position)."""


@dataclass
class Signature:
    """Exact signature values of one curve at one point."""
    curve: str
    t0: Fraction
    group: str
    variant: str
    labels: List[str]
    values: List[Fraction]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": "signature",
            "curve": self.curve,
            "t0": str(self.t0),
            "group": self.group,
            "variant": self.variant,
            "values": {label: str(value) for label, value in zip(self.labels, self.values)},
        }

    def __str__(self) -> str:
        lines = [f"signature of {self.curve} at t={self.t0} ({self.group}, p {self.variant}):"]
        lines.extend(f"  {label} = {value}" for label, value in zip(self.labels, self.values))
        return "\n".join(lines)


@dataclass
class EquivalenceVerdict:
    """Outcome of comparing two signatures exactly."""
    verdict: str
    group: str
    first: Signature
    second: Signature
    differing_indices: List[int] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == VERDICT_EQUAL

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": "equiv",
            "group": self.group,
            "status": self.verdict,
            "differing_indices": list(self.differing_indices),
            "first": self.first.to_dict()["values"],
            "second": self.second.to_dict()["values"],
        }

    def __str__(self) -> str:
        text = f"{self.verdict} ({self.group})"
        for index in self.differing_indices:
            label = self.first.labels[index]
            text += f"\n  [{index}] {label}: {self.first.values[index]} != {self.second.values[index]}"
        return text


def _max_order(items: List[Pullback]) -> int:
    top = 0
    for item in items:
        for (base, _), order in item.requirements().items():
            if base == "x":
                top = max(top, order)
    return top


def _check_common_position(jets: Dict[VarKey, Fraction], group: GroupSpec, n: int, p_expr, where: str) -> None:
    if evaluate(wronskian(n), jets) == 0:
        raise DegenerateCurveError(f"W vanishes at {where}")
    if group.normalizer == BUILTIN_NORMALIZER and evaluate(p1(n).expr, jets) == 0:
        raise DegenerateCurveError(f"p1 vanishes at {where}")
    try:
        value = evaluate(p_expr, jets)
    except ZeroDivisionError:
        raise DegenerateCurveError(f"p is undefined at {where}")
    if value == 0:
        raise DegenerateCurveError(f"p vanishes at {where}")


def invariant_signature(c: CurveSpec, t0: Scalar, group: GroupSpec,
                        variant: NormalizerVariant = NormalizerVariant.LOG_DERIVATIVE) -> Signature:
    """Values of the delta-generators of `group` on c at t0.

    Raises:
        DegenerateCurveError: W, p1 (builtin normalizer) or p vanishes at t0,
            or a generator denominator vanishes there
        ZeroDivisionError: c has a pole at t0
    """
    n = group.dimension_for(c.n)
    t0 = Fraction(t0)
    variant = NormalizerVariant(variant)
    spec = group.normalized_derivation(n, variant)
    items = [Pullback.of(f, n).reparam(spec) for f in h_generators(group, n)]
    order = max(_max_order(items), spec.p.max_order("x") or 0, n + 1)
    jets = jets_of_curve(c, t0, order)
    where = f"t={t0} on {c.name or c}"
    _check_common_position(jets, group, n, spec.p, where)
    values = []
    for label, item in zip(group.generator_labels(n), items):
        try:
            values.append(item.evaluate(jets))
        except ZeroDivisionError:
            raise DegenerateCurveError(f"{label} has a vanishing denominator at {where}")
    logger.debug("signature of %s at %s: %s", c, t0, [str(v) for v in values])
    return Signature(c.name or str(c), t0, group.name, variant.label, group.generator_labels(n), values)


def equivalence_check(c1: CurveSpec, t01: Scalar, c2: CurveSpec, t02: Scalar, group: GroupSpec,
                      variant: NormalizerVariant = NormalizerVariant.LOG_DERIVATIVE) -> EquivalenceVerdict:
    """Compare signatures exactly; equal signatures is the necessary condition for h c1 + h0 = c2."""
    first = invariant_signature(c1, t01, group, variant)
    second = invariant_signature(c2, t02, group, variant)
    differing = [i for i, (a, b) in enumerate(zip(first.values, second.values)) if a != b]
    verdict = VERDICT_DIFFER if differing else VERDICT_EQUAL
    logger.info("equiv %s@%s vs %s@%s under %s: %s", first.curve, t01, second.curve, t02, group.name, verdict)
    return EquivalenceVerdict(verdict, group.name, first, second, differing)

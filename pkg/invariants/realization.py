"""Residuals of the realization system for prescribed invariants.

Given targets a_1..a_n (for W_i/W) and b_1..b_k (for the algebraic
generators phi_j) as functions of the parameter, a curve realizes them when

    delta^(n+1) x + sum_{i=1}^{n} (-1)^(n+1-i) a_i delta^i x = 0,
    phi_j(x, delta x, ..., delta^n x) = b_j,
    pbar^delta<a, b> = 1,

with delta = p^-1 d.  Solving the system is out of reach here; the
residuals are evaluated exactly at one parameter value.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import sympy

from config.logger_config import get_logger
from core.jets import VarKey, x
from evaluation.curves import (
    CurveSpec, Scalar, delta_iterates, delta_jets_along, polynomial_to_sympy, to_rational, value_at)
from evaluation.signature import DegenerateCurveError
from transforms.wronskian import wronskian, wronskian_minor
from .groups import RATIO_SYMBOL, RELATION_SYMBOL, GroupSpec
from .weighted import NormalizerVariant

logger = get_logger("diff_invariants.invariants")


@dataclass(frozen=True)
class RealizationTargets:
    """a_i and b_j as exact rational functions of t."""
    a: Tuple[sympy.Expr, ...]
    b: Tuple[sympy.Expr, ...]

    def perturbed(self, index: int, amount: Scalar = 1) -> "RealizationTargets":
        """Shift b_(index+1) by a constant."""
        b = list(self.b)
        b[index] = sympy.cancel(b[index] + to_rational(amount))
        return RealizationTargets(self.a, tuple(b))


def _normalizer_along(curve: CurveSpec, group: GroupSpec, n: int, variant: NormalizerVariant) -> sympy.Expr:
    p = group.normalizer_expr(n, variant)
    order = p.max_order("x") or 0
    value = polynomial_to_sympy(p, curve.symbolic_jets(order))
    if value == 0:
        raise DegenerateCurveError(f"p vanishes identically along {curve}")
    return value


def _delta_frame(curve: CurveSpec, group: GroupSpec,
                 variant: NormalizerVariant) -> Tuple[int, sympy.Expr, Dict[VarKey, sympy.Expr]]:
    n = group.dimension_for(curve.n)
    divisor = _normalizer_along(curve, group, n, variant)
    return n, divisor, delta_jets_along(curve, divisor, n + 1)


def realization_targets(curve: CurveSpec, group: GroupSpec,
                        variant: NormalizerVariant = NormalizerVariant.LOG_DERIVATIVE) -> RealizationTargets:
    """Targets the curve itself realizes: W^delta_i/W^delta and phi_j^delta along it."""
    n, _, jets = _delta_frame(curve, group, variant)
    W = polynomial_to_sympy(wronskian(n), jets)
    if W == 0:
        raise DegenerateCurveError(f"W vanishes identically along {curve}")
    a = tuple(sympy.cancel(polynomial_to_sympy(wronskian_minor(n, i), jets) / W) for i in range(1, n + 1))
    b = tuple(polynomial_to_sympy(phi, jets) for phi in group.algebraic_generators(n))
    return RealizationTargets(a, b)


def _relation_values(relation, targets: RealizationTargets, divisor: sympy.Expr) -> Dict[VarKey, sympy.Expr]:
    """y_i and t_j jets as delta-iterates of the targets."""
    values = {}
    for key in relation.variables():
        if key.base == RATIO_SYMBOL and 1 <= key.index <= len(targets.a):
            source = targets.a[key.index - 1]
        elif key.base == RELATION_SYMBOL and 1 <= key.index <= len(targets.b):
            source = targets.b[key.index - 1]
        else:
            raise ValueError(f"relation variable {key} has no target")
        values[key] = delta_iterates(source, divisor, key.order)[-1]
    return values


def residual_labels(group: GroupSpec, n: Optional[int] = None) -> List[str]:
    n = group.dimension_for(n)
    labels = [f"ode[x{i}]" for i in range(1, n + 1)]
    labels.extend(f"phi{j}-b{j}" for j in range(1, len(group.algebraic_generators(n)) + 1))
    if group.relation is not None:
        labels.append("pbar-1")
    return labels


def realization_residuals(curve: CurveSpec, targets: RealizationTargets, group: GroupSpec,
                          variant: NormalizerVariant = NormalizerVariant.LOG_DERIVATIVE,
                          t0: Scalar = 1) -> List[Fraction]:
    """Exact residuals at t0: the ODE per coordinate, phi_j - b_j, then pbar - 1 when catalogued.

    Raises:
        DegenerateCurveError: p vanishes at t0
        ZeroDivisionError: a delta-jet or target has a pole at t0
    """
    n, divisor, jets = _delta_frame(curve, group, variant)
    if len(targets.a) != n:
        raise ValueError(f"expected {n} targets a_i, got {len(targets.a)}")
    if value_at(divisor, t0) == 0:
        raise DegenerateCurveError(f"p vanishes at t={t0} on {curve}")

    coefficients = list(targets.a) + [sympy.Integer(1)]
    residuals = []
    for r in range(1, n + 1):
        ode = sympy.Add(*[(-1) ** (n + 1 - i) * coefficients[i - 1] * jets[x(r, i)]
                          for i in range(1, n + 2)])
        residuals.append(value_at(ode, t0))

    generators = group.algebraic_generators(n)
    if len(targets.b) != len(generators):
        raise ValueError(f"expected {len(generators)} targets b_j, got {len(targets.b)}")
    for phi, b in zip(generators, targets.b):
        residuals.append(value_at(polynomial_to_sympy(phi, jets) - b, t0))

    relation = group.relation_expr(n, variant)
    if relation is not None:
        value = polynomial_to_sympy(relation, _relation_values(relation, targets, divisor))
        residuals.append(value_at(value - 1, t0))
    logger.debug("realization residuals of %s at t=%s: %s", curve, t0, [str(v) for v in residuals])
    return residuals


"""Named identities of the construction, as checked by `verify`.

Each identity is a list of (part, lhs, rhs) sides; a side is a DiffRational
or a Pullback, so p-reparametrized sides are evaluated without expansion.
Group-dependent identities (weight, invariance) draw one element per trial.
"""

from dataclasses import replace
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from config.config_loader import get_default_seed
from config.logger_config import get_logger
from core.jets import x
from core.polynomial import DiffPolynomial
from core.rational import DiffRational
from evaluation.identity import (
    STATUS_PASS, IdentityReport, InvarianceReport, VerificationMode, verify_identity, verify_symbolic)
from evaluation.points import Pullback
from invariants.groups import (
    GroupSpec, check_FH_invariance, check_H_invariance, check_weight_law, describe_element,
    example3_p, example4_p, example4_pbar, get_group, h_generators, sample_element)
from invariants.weighted import (
    NormalizerVariant, WeightedInvariant, p1, p2, p_weight1, theorem2_residual)
from transforms.actions import DerivationSpec, compose_indeterminates, phi_expansion
from transforms.wronskian import (
    alternating_sum, delta_ratio_rhs, eq2_rhs, eq3_rhs, eq4_rhs, extended_wronskian, minor_ratio,
    predicted_minor_transform, wronskian_minor)

logger = get_logger("diff_invariants.cli")

Sides = List[Tuple[str, object, object]]

IDENTITY_NAMES = (
    "eq2", "eq3", "eq4", "delta-ratio", "minor-law", "weight", "normalization", "phi",
    "theorem2", "example3", "example4", "alternating-sum", "invariance", "relation",
)
# Identities taking one positional argument, with its meaning for the usage text
ARGUMENTS = {
    "minor-law": "J",
    "weight": "NAME",
    "normalization": "NAME",
    "phi": "K",
    "invariance": "GROUP",
    "relation": "GROUP",
}


def _g_reparam(f, n: int) -> Pullback:
    return Pullback.of(f, n).reparam(DerivationSpec.g_reparam())


def _integer_argument(name: str, argument: Optional[str]) -> int:
    try:
        return int(argument)
    except (TypeError, ValueError):
        raise ValueError(f"{name} needs an integer argument, got {argument!r}")


def weighted_by_name(name: str, n: int, variant: NormalizerVariant) -> WeightedInvariant:
    if name == "p1":
        return p1(n)
    if name == "p2":
        return p2(n)
    if name == "p":
        return p_weight1(n, variant)
    raise ValueError(f"unknown weighted invariant {name!r} (expected p1, p2 or p)")


def normalizer_by_name(name: Optional[str], n: int, variant: NormalizerVariant,
                       catalog: Optional[str] = None) -> DiffRational:
    """A variant label, a catalog group name, or None for the selected variant."""
    if name is None:
        return p_weight1(n, variant).expr
    if name in [v.label for v in NormalizerVariant]:
        return p_weight1(n, NormalizerVariant.from_label(name)).expr
    return get_group(name, catalog).normalizer_expr(n, variant)


def relation_images(group: GroupSpec, n: int) -> Dict[str, DiffRational]:
    """t_j -> phi_j and y_i -> W_i/W."""
    images = {f"t{j}": phi for j, phi in enumerate(group.algebraic_generators(n), start=1)}
    images.update({f"y{i}": minor_ratio(n, i) for i in range(1, n + 1)})
    return images


def relation_sides(group: GroupSpec, n: int, variant: NormalizerVariant) -> Sides:
    """pbar<phi> = p, and pbar^delta<phi^delta> = 1 for delta = p^-1 d."""
    relation = group.relation_expr(n, variant)
    if relation is None:
        raise ValueError(f"group {group.name} has no catalogued relation")
    p = group.normalizer_expr(n, variant)
    composed = compose_indeterminates(relation, relation_images(group, n))
    normalized = Pullback.of(composed, n).reparam(DerivationSpec.p_reparam(p))
    return [("pbar<phi> = p", composed, p), ("pbar^delta<phi^delta> = 1", normalized, 1)]


def _dot(a, b) -> DiffPolynomial:
    return DiffPolynomial.sum(u * v for u, v in zip(a, b))


def example4_sides() -> Sides:
    first = [DiffPolynomial.variable(x(i, 1)) for i in (1, 2)]
    second = [DiffPolynomial.variable(x(i, 2)) for i in (1, 2)]
    minor = first[0] * second[1] - first[1] * second[0]
    phi1, phi2 = _dot(first, first), _dot(second, second)
    lagrange = phi1 * phi2 - phi1.derive() ** 2 * Fraction(1, 4)
    images = {"t1": DiffRational.of(phi1), "t2": DiffRational.of(phi2)}
    composed = compose_indeterminates(example4_pbar(), images)
    normalized = Pullback.of(composed, 2).reparam(DerivationSpec.p_reparam(example4_p()))
    return [("det^2 = phi1 phi2 - 1/4 (d phi1)^2", minor ** 2, lagrange),
            ("pbar<phi> = p", composed, example4_p()),
            ("pbar^delta<phi^delta> = 1", normalized, 1)]


def identity_sides(name: str, argument: Optional[str], n: int,
                   variant: NormalizerVariant = NormalizerVariant.LOG_DERIVATIVE,
                   catalog: Optional[str] = None) -> Sides:
    """(part, lhs, rhs) for every identity except weight and invariance."""
    if name == "eq2":
        return [("eq2", _g_reparam(minor_ratio(n, n), n), eq2_rhs(n))]
    if name == "eq3":
        return [("eq3", _g_reparam(minor_ratio(n, n - 1), n), eq3_rhs(n))]
    if name == "eq4":
        return [("eq4", _g_reparam(minor_ratio(n, n) ** 2, n), eq4_rhs(n))]
    if name == "delta-ratio":
        return [("delta-ratio", _g_reparam(minor_ratio(n, n).derive(), n), delta_ratio_rhs(n))]
    if name == "minor-law":
        j = _integer_argument(name, argument)
        return [(f"minor-law {j}", _g_reparam(wronskian_minor(n, j), n), predicted_minor_transform(n, j))]
    if name == "normalization":
        p = normalizer_by_name(argument, n, variant, catalog)
        return [("p^delta = 1", Pullback.of(p, n).reparam(DerivationSpec.p_reparam(p)), 1)]
    if name == "phi":
        k = _integer_argument(name, argument)
        return [(f"phi {k}", DiffRational.variable(x(1, k)), phi_expansion(k))]
    if name == "theorem2":
        spec = DerivationSpec.g_reparam()
        ys = [(f"y = x{j}", DiffRational.variable(x(j))) for j in range(1, n + 1)] + [("y = 1", 1)]
        return [(label, theorem2_residual(y, spec, n), 0) for label, y in ys]
    if name == "example3":
        norm_derivative = DiffRational.of(_dot([DiffPolynomial.variable(x(i)) for i in (1, 2)],
                                          [DiffPolynomial.variable(x(i)) for i in (1, 2)])).derive()
        lhs = Pullback.of(norm_derivative * Fraction(1, 2), 2).reparam(DerivationSpec.p_reparam(example3_p()))
        return [("1/2 delta(x,x) = 1", lhs, 1)]
    if name == "example4":
        return example4_sides()
    if name == "alternating-sum":
        return [("alternating-sum", alternating_sum(n), extended_wronskian(n))]
    if name == "relation":
        if argument is None:
            raise ValueError("relation needs a group name")
        return relation_sides(get_group(argument, catalog), n, variant)
    raise ValueError(f"unknown identity {name!r} (expected one of {', '.join(IDENTITY_NAMES)})")


def fixed_dimension(name: str, n: int) -> int:
    return 2 if name in ("example3", "example4") else n


def combine_reports(name: str, reports: List[IdentityReport]) -> IdentityReport:
    """One report for a multi-part identity: the first non-passing part, else the first part renamed."""
    for report in reports:
        if report.status != STATUS_PASS:
            return replace(report, identity=f"{name}: {report.identity}")
    detail = f"{len(reports)} parts" if len(reports) > 1 else reports[0].detail
    return replace(reports[0], identity=name, detail=detail)


def symbolic_at_sample(name: str, group: GroupSpec, n: int, seed: Optional[int],
                       build: Callable) -> IdentityReport:
    """Symbolic check at one group element drawn from `seed` (config default when None)."""
    seed = get_default_seed() if seed is None else seed
    m = sample_element(group, seed, n)
    lhs, rhs = build(m)
    report = verify_symbolic(lhs, rhs, name, n, report_cls=InvarianceReport, group=group.name)
    report.seed = seed
    report.detail = "sampled element " + ", ".join(f"{k}={v}" for k, v in describe_element(m).items())
    return report


def run_weight(argument: Optional[str], n: int, mode: VerificationMode, trials: Optional[int],
               seed: Optional[int], variant: NormalizerVariant, catalog: Optional[str]) -> IdentityReport:
    invariant = weighted_by_name(argument or "p", n, variant)
    group = get_group("gl_affine", catalog)
    if mode == VerificationMode.SYMBOLIC:
        g = DerivationSpec.g_reparam()
        expected = DiffRational.variable(g.scale_key()) ** (-invariant.weight) * invariant.expr
        return symbolic_at_sample(
            f"weight {invariant.name}", group, n, seed,
            lambda m: (Pullback.of(invariant.expr, n).act(m).reparam(g), expected))
    return check_weight_law(invariant, group, trials, seed)


def run_invariance(argument: Optional[str], n: int, mode: VerificationMode, trials: Optional[int],
                   seed: Optional[int], variant: NormalizerVariant, catalog: Optional[str]) -> IdentityReport:
    """H-invariance of every generator, then (F*,H)-invariance of every delta-generator."""
    if argument is None:
        raise ValueError("invariance needs a group name")
    group = get_group(argument, catalog)
    n = group.dimension_for(n)
    spec = group.normalized_derivation(n, variant)
    reports = []
    for label, f in zip(group.generator_labels(n), h_generators(group, n)):
        normalized = Pullback.of(f, n).reparam(spec)
        if mode == VerificationMode.SYMBOLIC:
            g = DerivationSpec.g_reparam()
            reports.append(symbolic_at_sample(f"H {label}", group, n, seed,
                                              lambda m, f=f: (Pullback.of(f, n).act(m), f)))
            reports.append(symbolic_at_sample(
                f"FH {label}^delta", group, n, seed,
                lambda m, normalized=normalized: (normalized.act(m).reparam(g), normalized)))
        else:
            reports.append(check_H_invariance(f, group, trials, seed, n, name=f"H {label}"))
            reports.append(check_FH_invariance(normalized, group, trials, seed, n, name=f"FH {label}^delta"))
    return combine_reports(f"invariance {group.name}", reports)


def run_identity(name: str, argument: Optional[str] = None, n: int = 2,
                 mode: VerificationMode = VerificationMode.EVALUATION, trials: Optional[int] = None,
                 seed: Optional[int] = None,
                 variant: NormalizerVariant = NormalizerVariant.LOG_DERIVATIVE,
                 catalog: Optional[str] = None) -> IdentityReport:
    """Check one named identity and return its report."""
    mode = VerificationMode(mode)
    title = f"{name} {argument}" if argument is not None else name
    logger.info("verify %s n=%d mode=%s", title, n, mode.label)
    if name == "weight":
        return replace(run_weight(argument, n, mode, trials, seed, variant, catalog), identity=title)
    if name == "invariance":
        return replace(run_invariance(argument, n, mode, trials, seed, variant, catalog), identity=title)
    n = fixed_dimension(name, n)
    parts = identity_sides(name, argument, n, variant, catalog)
    reports = [verify_identity(lhs, rhs, mode, trials, seed, name=label, n=n) for label, lhs, rhs in parts]
    return combine_reports(title, reports)

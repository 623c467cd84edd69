"""Command-line surface: argument parsing and command dispatch.

Exit codes: 0 pass, 1 fail (or degenerate), 2 usage error.
"""

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from config.logger_config import get_logger
from core.grammar import ParseError, format_rational, parse_rational
from core.jets import JetSpace
from core.rational import DiffRational
from evaluation.curves import CurveSpec, load_curve
from evaluation.identity import VerificationMode
from evaluation.signature import DegenerateCurveError, equivalence_check, invariant_signature
from invariants.groups import get_group, h_generators
from invariants.realization import realization_residuals, realization_targets, residual_labels
from invariants.weighted import NormalizerVariant, ratio_form
from transforms.actions import AffineMap, DerivationSpec, act_affine, reinterpret
from .campaign import campaign_passed, run_campaign, summarize
from .identities import ARGUMENTS, IDENTITY_NAMES, run_identity, weighted_by_name

logger = get_logger("diff_invariants.cli")

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

INVARIANT_NAMES = ("p1", "p2", "p", "gl-gens", "group-gens")
DEFAULT_GROUP = "gl_affine"


def _emit(args: argparse.Namespace, data: Dict[str, Any], text: str) -> None:
    if args.json:
        print(json.dumps(data, ensure_ascii=True))
    else:
        print(text)


def _space(args: argparse.Namespace) -> JetSpace:
    return JetSpace(args.n)


def _variant(args: argparse.Namespace) -> NormalizerVariant:
    return NormalizerVariant.from_label(args.variant)


def parse_matrix(text: str) -> List[List[Fraction]]:
    """'1 2; 3 4' or '1,2;3,4' -> rows of exact rationals."""
    rows = [row.replace(",", " ").split() for row in text.split(";") if row.strip()]
    if not rows:
        raise ValueError(f"empty matrix: {text!r}")
    return [[Fraction(entry) for entry in row] for row in rows]


def parse_vector(text: str) -> List[Fraction]:
    return [Fraction(entry) for entry in text.replace(",", " ").split()]


def _curve_parser(text: str) -> DiffRational:
    return parse_rational(text, JetSpace(1))


def read_curve(path: str) -> CurveSpec:
    return load_curve(path, _curve_parser)


# ----------------------------------------------------------------------
# Commands

def cmd_derive(args: argparse.Namespace) -> int:
    f = parse_rational(args.expr, _space(args))
    for _ in range(args.k):
        f = f.derive()
    result = format_rational(f)
    _emit(args, {"command": "derive", "input": args.expr, "k": args.k, "result": result}, result)
    return EXIT_PASS


def cmd_act(args: argparse.Namespace) -> int:
    h = parse_matrix(args.h)
    h0 = parse_vector(args.h0) if args.h0 else [Fraction(0)] * len(h)
    m = AffineMap(tuple(map(tuple, h)), tuple(h0))
    if m.n != args.n:
        raise ValueError(f"dimension mismatch: matrix of size {m.n} with --n {args.n}")
    result = format_rational(act_affine(parse_rational(args.expr, _space(args)), m))
    _emit(args, {"command": "act", "input": args.expr, "h": args.h, "h0": args.h0 or "", "result": result},
          result)
    return EXIT_PASS


def cmd_reparam(args: argparse.Namespace) -> int:
    space = _space(args)
    if args.p is not None:
        spec = DerivationSpec.p_reparam(parse_rational(args.p, space))
    else:
        spec = DerivationSpec.g_reparam(args.g_symbol)
    result = format_rational(reinterpret(parse_rational(args.expr, space), spec))
    _emit(args, {"command": "reparam", "input": args.expr, "derivation": spec.kind.label,
                 "result": result}, result)
    return EXIT_PASS


def cmd_invariant(args: argparse.Namespace) -> int:
    variant = _variant(args)
    if args.name in ("gl-gens", "group-gens"):
        group = get_group(DEFAULT_GROUP if args.name == "gl-gens" else args.group, args.catalog)
        n = group.dimension_for(args.n)
        items = {label: format_rational(f)
                 for label, f in zip(group.generator_labels(n), h_generators(group, n))}
        text = "\n".join(f"{label} = {value}" for label, value in items.items())
        _emit(args, {"command": "invariant", "name": args.name, "group": group.name, "n": n,
                     "generators": items}, text)
        return EXIT_PASS
    invariant = weighted_by_name(args.name, args.n, variant)
    ratios = format_rational(ratio_form(args.name, args.n, variant))
    jets = format_rational(invariant.expr)
    text = (f"{invariant.name} (n={args.n}, weight {invariant.weight})\n"
            f"  with y_i = W_i/W: {ratios}\n"
            f"  in jets: {jets}")
    _emit(args, {"command": "invariant", "name": invariant.name, "n": args.n, "weight": invariant.weight,
                 "ratios": ratios, "expr": jets}, text)
    return EXIT_PASS


def cmd_verify(args: argparse.Namespace) -> int:
    mode = VerificationMode.from_label(args.mode)
    variant = _variant(args)
    if args.identity == "all":
        df, reports = run_campaign(args.n, mode, args.trials, args.seed, variant, args.catalog)
        if args.csv:
            df.to_csv(args.csv, index=False)
            logger.info("campaign table written to %s", args.csv)
        if args.json:
            print(json.dumps([report.to_dict() for report in reports], ensure_ascii=True))
        else:
            print(df.to_string(index=False))
            print()
            print(summarize(df).to_string(index=False))
        return EXIT_PASS if campaign_passed(df) else EXIT_FAIL
    if args.identity in ARGUMENTS and args.argument is None and args.identity not in ("weight", "normalization"):
        raise ValueError(f"{args.identity} needs an argument {ARGUMENTS[args.identity]}")
    if args.identity not in ARGUMENTS and args.argument is not None:
        raise ValueError(f"{args.identity} takes no argument")
    report = run_identity(args.identity, args.argument, args.n, mode, args.trials, args.seed,
                          variant, args.catalog)
    _emit(args, report.to_dict(), str(report))
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_signature(args: argparse.Namespace) -> int:
    curve = read_curve(args.curve)
    signature = invariant_signature(curve, Fraction(args.t0), get_group(args.group, args.catalog), _variant(args))
    _emit(args, signature.to_dict(), str(signature))
    return EXIT_PASS


def cmd_equiv(args: argparse.Namespace) -> int:
    group = get_group(args.group, args.catalog)
    verdict = equivalence_check(read_curve(args.curve1), Fraction(args.t01),
                                read_curve(args.curve2), Fraction(args.t02), group, _variant(args))
    _emit(args, verdict.to_dict(), str(verdict))
    return EXIT_PASS if verdict.passed else EXIT_FAIL


def cmd_residuals(args: argparse.Namespace) -> int:
    group = get_group(args.group, args.catalog)
    variant = _variant(args)
    curve = read_curve(args.curve)
    source = read_curve(args.targets) if args.targets else curve
    targets = realization_targets(source, group, variant)
    if args.perturb is not None:
        targets = targets.perturbed(args.perturb - 1)
    residuals = realization_residuals(curve, targets, group, variant, Fraction(args.t0))
    labels = residual_labels(group, curve.n)
    values = {label: str(value) for label, value in zip(labels, residuals)}
    realized = not any(residuals)
    text = "\n".join(f"{label} = {value}" for label, value in values.items())
    text += "\nrealizes the targets" if realized else "\ndoes not realize the targets"
    _emit(args, {"command": "residuals", "curve": curve.name, "targets": source.name, "t0": args.t0,
                 "group": group.name, "status": "pass" if realized else "fail", "residuals": values}, text)
    return EXIT_PASS if realized else EXIT_FAIL


# ----------------------------------------------------------------------
# Parser

def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, default=2, help="dimension of the curve (default 2)")
    parser.add_argument("--json", action="store_true", help="machine-readable output on stdout")
    parser.add_argument("--catalog", default=None, help="group catalog JSON file")
    parser.add_argument("--variant", default=NormalizerVariant.LOG_DERIVATIVE.label,
                        choices=[v.label for v in NormalizerVariant], help="builtin normalizer p")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diff-invariants",
        description="Differential rational invariants of affine groups under reparametrization")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("derive", help="apply D to an expression")
    p.add_argument("expr")
    p.add_argument("--k", type=int, default=1, help="number of derivations")
    p.set_defaults(handler=cmd_derive)

    p = sub.add_parser("act", help="substitute x -> h x + h0")
    p.add_argument("expr")
    p.add_argument("--h", required=True, help="matrix, rows separated by ';'")
    p.add_argument("--h0", default=None, help="translation vector")
    p.set_defaults(handler=cmd_act)

    p = sub.add_parser("reparam", help="reinterpret D as g^-1 D or p^-1 D")
    p.add_argument("expr")
    which = p.add_mutually_exclusive_group()
    which.add_argument("--p", default=None, help="expression p for delta = p^-1 D")
    which.add_argument("--g", action="store_true", help="delta = g^-1 D (default)")
    p.add_argument("--g-symbol", default="g", help="name of the scale symbol g")
    p.set_defaults(handler=cmd_reparam)

    p = sub.add_parser("invariant", help="print p1, p2, p or a generator system")
    p.add_argument("name", choices=INVARIANT_NAMES)
    p.add_argument("--group", default=DEFAULT_GROUP)
    p.set_defaults(handler=cmd_invariant)

    p = sub.add_parser("verify", help="check an identity symbolically or at random points")
    p.add_argument("identity", choices=IDENTITY_NAMES + ("all",))
    p.add_argument("argument", nargs="?", default=None,
                   help="; ".join(f"{name} {arg}" for name, arg in ARGUMENTS.items()))
    p.add_argument("--mode", default="eval", help="symbolic or eval")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--csv", default=None, help="write the 'all' campaign table to this file")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("signature", help="invariant signature of a curve file at t0")
    p.add_argument("curve")
    p.add_argument("--t0", default="1")
    p.add_argument("--group", default=DEFAULT_GROUP)
    p.set_defaults(handler=cmd_signature)

    p = sub.add_parser("equiv", help="compare the signatures of two curves")
    p.add_argument("curve1")
    p.add_argument("curve2")
    p.add_argument("--t01", default="1")
    p.add_argument("--t02", default="1")
    p.add_argument("--group", default=DEFAULT_GROUP)
    p.set_defaults(handler=cmd_equiv)

    p = sub.add_parser("residuals", help="realization residuals of a curve against targets")
    p.add_argument("curve")
    p.add_argument("--targets", default=None, help="curve file the targets are taken from (default: the curve)")
    p.add_argument("--perturb", type=int, default=None, help="add 1 to target b_J")
    p.add_argument("--t0", default="1")
    p.add_argument("--group", default=DEFAULT_GROUP)
    p.set_defaults(handler=cmd_residuals)

    for subparser in sub.choices.values():
        _common(subparser)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    logger.info("command %s", args.command)
    try:
        return args.handler(args)
    except (DegenerateCurveError, ZeroDivisionError) as e:
        logger.warning("%s: %s", args.command, e)
        if args.json:
            print(json.dumps({"command": args.command, "status": "degenerate", "error": str(e)}))
        else:
            print(f"degenerate: {e}", file=sys.stderr)
        return EXIT_FAIL
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

"""Identity checking: symbolic comparison or exact evaluation at random points.

Evaluation mode is exact Schwartz-Zippel testing: each trial draws an
independent rational point from its own child of SeedSequence(seed), so a
report is reproducible from (seed, trials) alone.
"""

from dataclasses import asdict, dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Any, Callable, Dict, Mapping, Optional, Tuple

import numpy as np

from config.config_loader import (
    get_default_seed, get_default_trials, get_retry_cap, get_symbolic_term_budget)
from config.logger_config import get_logger
from core.jets import VarKey
from core.rational import DiffRational, eq_rational
from .points import Pullback, covering_keys, random_assignment

logger = get_logger("diff_invariants.evaluation")

STATUS_PASS = "pass"
STATUS_FAIL = "fail"
STATUS_DEGENERATE = "degenerate"
STATUS_INCONCLUSIVE = "inconclusive"

Side = Any  # DiffRational, polynomial, scalar or Pullback
LawBuilder = Callable[[np.random.Generator], Tuple[Side, Side, Dict[str, str]]]


class VerificationMode(IntEnum):
    """How an identity is checked."""
    SYMBOLIC = 1
    EVALUATION = 2

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def from_label(cls, label: str) -> "VerificationMode":
        normalized = label.strip().lower()
        if normalized in ("symbolic", "sym"):
            return cls.SYMBOLIC
        if normalized in ("eval", "evaluation"):
            return cls.EVALUATION
        raise ValueError(f"unknown verification mode: {label!r} (expected symbolic or eval)")


@dataclass
class IdentityReport:
    """Outcome of one identity check.

    Attributes:
        identity: Name of the checked identity, e.g. "eq2"
        n: Dimension, None when the identity has no dimension
        mode: "symbolic" or "evaluation"
        trials: Random points compared (0 for symbolic checks)
        seed: Seed of the trial generators, or of the sampled group element
            of a symbolic group check; None for other symbolic checks
        status: "pass", "fail", "degenerate" or "inconclusive"
        witness: The first failing assignment (and group element), if any
    """
    identity: str
    n: Optional[int]
    mode: str
    trials: int
    seed: Optional[int]
    status: str
    command: str = "verify"
    witness: Optional[Dict[str, str]] = None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == STATUS_PASS

    @property
    def label(self) -> str:
        if self.status == STATUS_PASS:
            if self.mode == VerificationMode.SYMBOLIC.label:
                if self.seed is not None:
                    return "identity holds symbolically at one sampled group element"
                return "identity holds symbolically"
            if self.trials == 0:
                return "sides are syntactically identical"
            return f"identity holds with evaluation-level evidence ({self.trials} trials)"
        if self.status == STATUS_FAIL:
            return "identity fails"
        if self.status == STATUS_DEGENERATE:
            return "no nondegenerate evaluation point found"
        return "symbolic check exceeded the term budget; use evaluation mode"

    def to_dict(self) -> Dict[str, Any]:
        """Stable machine-readable schema."""
        data = {key: value for key, value in asdict(self).items() if key != "detail"}
        if data["witness"] is None:
            del data["witness"]
        return data

    def __str__(self) -> str:
        dimension = f" n={self.n}" if self.n is not None else ""
        text = f"{self.identity}{dimension} [{self.mode}]: {self.status.upper()} - {self.label}"
        if self.witness:
            text += "\n  witness: " + ", ".join(f"{k}={v}" for k, v in self.witness.items())
        if self.detail:
            text += f"\n  {self.detail}"
        return text


@dataclass
class InvarianceReport(IdentityReport):
    """Identity report for an invariance check under a group."""
    group: str = ""

    def to_dict(self) -> Dict[str, Any]:
        data = super().to_dict()
        data["group"] = self.group
        return data


def format_assignment(a: Mapping[VarKey, Fraction]) -> Dict[str, str]:
    return {str(key): str(value) for key, value in sorted(a.items())}


def _within_budget(lhs: DiffRational, rhs: DiffRational, budget: int) -> bool:
    return len(lhs.num) * len(rhs.den) + len(rhs.num) * len(lhs.den) <= budget


def _expand(side: Side) -> DiffRational:
    if isinstance(side, Pullback):
        return side.expand()
    return DiffRational.of(side)


def verify_symbolic(lhs: Side, rhs: Side, name: str, n: Optional[int] = None,
                    command: str = "verify", budget: Optional[int] = None,
                    report_cls=IdentityReport, **extra) -> IdentityReport:
    """eq_rational on the expanded sides, refused above the term budget."""
    budget = budget if budget is not None else get_symbolic_term_budget()
    left, right = _expand(lhs), _expand(rhs)
    base = dict(identity=name, n=n, mode=VerificationMode.SYMBOLIC.label, trials=0, seed=None,
                command=command, **extra)
    if not _within_budget(left, right, budget):
        logger.warning("%s: symbolic comparison of %d and %d terms exceeds budget %d",
                       name, left.size(), right.size(), budget)
        return report_cls(status=STATUS_INCONCLUSIVE,
                          detail=f"sizes {left.size()} and {right.size()} exceed budget {budget}", **base)
    status = STATUS_PASS if eq_rational(left, right) else STATUS_FAIL
    logger.info("%s n=%s symbolic: %s", name, n, status)
    return report_cls(status=status, **base)


def check_law(name: str, build: LawBuilder, trials: Optional[int] = None, seed: Optional[int] = None,
              n: Optional[int] = None, command: str = "verify", report_cls=IdentityReport,
              **extra) -> IdentityReport:
    """Evaluate both sides of a law at random points, one fresh law per trial.

    `build` receives the trial's generator and returns (lhs, rhs, context);
    group checks draw their element there and report it in the context.
    """
    trials = get_default_trials() if trials is None else trials
    seed = get_default_seed() if seed is None else seed
    retry_cap = get_retry_cap()
    base = dict(identity=name, n=n, mode=VerificationMode.EVALUATION.label, trials=trials, seed=seed,
                command=command, **extra)
    for index, child in enumerate(np.random.SeedSequence(seed).spawn(trials)):
        rng = np.random.default_rng(child)
        lhs, rhs, context = build(rng)
        left, right = Pullback.of(lhs, n or 1), Pullback.of(rhs, n or 1)
        keys = covering_keys([left, right])
        for attempt in range(retry_cap):
            point = random_assignment(keys, rng)
            try:
                left_value = left.evaluate(point)
                right_value = right.evaluate(point)
            except ZeroDivisionError:
                logger.debug("%s trial %d: redraw %d after a vanishing denominator", name, index, attempt + 1)
                continue
            break
        else:
            logger.warning("%s trial %d: retry cap %d exhausted", name, index, retry_cap)
            return report_cls(status=STATUS_DEGENERATE,
                              detail=f"trial {index}: every one of {retry_cap} draws hit a zero denominator",
                              **base)
        if left_value != right_value:
            witness = dict(context)
            witness.update(format_assignment(point))
            logger.info("%s n=%s: fails at trial %d", name, n, index)
            return report_cls(status=STATUS_FAIL, witness=witness,
                              detail=f"trial {index}: lhs = {left_value}, rhs = {right_value}", **base)
    logger.info("%s n=%s: passes %d trials (seed %d)", name, n, trials, seed)
    return report_cls(status=STATUS_PASS, **base)


def verify_identity(lhs: Side, rhs: Side, mode: VerificationMode = VerificationMode.EVALUATION,
                    trials: Optional[int] = None, seed: Optional[int] = None, name: str = "identity",
                    n: Optional[int] = None, command: str = "verify") -> IdentityReport:
    """Check lhs == rhs; failures are reported, never raised."""
    mode = VerificationMode(mode)
    if mode == VerificationMode.SYMBOLIC:
        return verify_symbolic(lhs, rhs, name, n, command)
    if not isinstance(lhs, Pullback) and not isinstance(rhs, Pullback):
        left, right = DiffRational.of(lhs), DiffRational.of(rhs)
        if left.num == right.num and left.den == right.den:
            return IdentityReport(identity=name, n=n, mode=mode.label, trials=0,
                                  seed=get_default_seed() if seed is None else seed,
                                  status=STATUS_PASS, command=command,
                                  detail="sides are identical")
    return check_law(name, lambda rng: (lhs, rhs, {}), trials, seed, n, command)

"""Verification campaign: every identity at one dimension, summarized as a DataFrame."""

import time
from typing import List, Optional, Tuple

import pandas as pd

from config.logger_config import get_logger
from evaluation.identity import STATUS_PASS, IdentityReport, VerificationMode
from invariants.groups import load_catalog
from invariants.weighted import NormalizerVariant
from .identities import run_identity

logger = get_logger("diff_invariants.cli")

PHI_ORDERS = range(1, 6)
COLUMNS = ["identity", "n", "mode", "trials", "seed", "status", "seconds", "label"]


def campaign_cases(n: int, catalog: Optional[str] = None) -> List[Tuple[str, Optional[str]]]:
    """(identity, argument) pairs that make sense at dimension n."""
    cases = [("eq2", None), ("eq4", None), ("delta-ratio", None)]
    if n >= 2:
        cases.append(("eq3", None))
    cases.extend(("minor-law", str(j)) for j in range(1, n + 2))
    cases.extend(("phi", str(k)) for k in PHI_ORDERS)
    cases.extend([("alternating-sum", None), ("theorem2", None)])
    if n >= 2:
        cases.extend([("weight", "p1"), ("weight", "p"), ("normalization", "log-derivative")])
    if n >= 3:
        cases.extend([("weight", "p2"), ("normalization", "ratio")])
    cases.extend([("example3", None), ("example4", None)])
    for name, group in load_catalog(catalog).items():
        if group.dimension not in (None, n):
            continue
        cases.append(("invariance", name))
        if group.relation is not None:
            cases.append(("relation", name))
    return cases


def run_campaign(n: int = 2, mode: VerificationMode = VerificationMode.EVALUATION,
                 trials: Optional[int] = None, seed: Optional[int] = None,
                 variant: NormalizerVariant = NormalizerVariant.LOG_DERIVATIVE,
                 catalog: Optional[str] = None) -> Tuple[pd.DataFrame, List[IdentityReport]]:
    """Run every applicable identity; one DataFrame row per identity."""
    variant = NormalizerVariant(variant)
    if n < variant.minimum_dimension:
        raise ValueError(f"the {variant.label} normalizer requires n >= {variant.minimum_dimension}, got {n}")
    reports = []
    rows = []
    for name, argument in campaign_cases(n, catalog):
        started = time.perf_counter()
        report = run_identity(name, argument, n, mode, trials, seed, variant, catalog)
        elapsed = time.perf_counter() - started
        reports.append(report)
        rows.append({
            "identity": report.identity,
            "n": report.n,
            "mode": report.mode,
            "trials": report.trials,
            "seed": report.seed,
            "status": report.status,
            "seconds": round(elapsed, 3),
            "label": report.label,
        })
        logger.info("campaign %s: %s in %.2fs", report.identity, report.status, elapsed)
    df = pd.DataFrame(rows, columns=COLUMNS)
    return df, reports


def campaign_passed(df: pd.DataFrame) -> bool:
    return bool((df["status"] == STATUS_PASS).all())


def summarize(df: pd.DataFrame) -> pd.DataFrame:
    """Identities per status."""
    return df.groupby("status").size().rename("count").reset_index()

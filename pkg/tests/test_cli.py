"""
Unit tests for the command-line surface and the verification campaign.

Covers:
- Exit codes for pass, fail, degenerate and usage errors
- Text and JSON output of the commands
- Symbolic group checks at a sampled element
- Campaign table columns, summary and running time
"""

import unittest
import os
import sys
import io
import json
import time
from fractions import Fraction
from contextlib import redirect_stderr, redirect_stdout
from unittest.mock import patch

import pandas as pd

# Add parent directory to path for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from cli.campaign import COLUMNS, campaign_cases, campaign_passed, run_campaign, summarize
from cli.commands import EXIT_FAIL, EXIT_PASS, EXIT_USAGE, main, parse_matrix
from cli.identities import symbolic_at_sample
from config.config_loader import get_default_seed
from core.grammar import parse_rational
from core.jets import JetSpace, aux, x
from core.rational import DiffRational
from evaluation.identity import STATUS_FAIL, STATUS_PASS, IdentityReport
from evaluation.points import Pullback
from invariants.groups import get_group
from invariants.weighted import NormalizerVariant
from transforms.wronskian import minor_ratio

DATA_DIR = os.path.join(os.path.dirname(__file__), '..', 'data', 'curves')


def curve_path(name):
    return os.path.join(DATA_DIR, f"{name}.txt")


def run(*argv):
    """Run the command line; return (exit code, stdout)."""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue()


class TestAlgebraCommands(unittest.TestCase):
    """Test derive, act, reparam and invariant."""

    def setUp(self):
        self.space = JetSpace(2)

    def test_derive(self):
        """Test D(x1*x2) in JSON."""
        code, out = run("derive", "x1*x2", "--json")
        self.assertEqual(code, EXIT_PASS)
        data = json.loads(out)
        self.assertEqual(data["command"], "derive")
        self.assertEqual(parse_rational(data["result"], self.space),
                         parse_rational("D(x1)*x2 + x1*D(x2)", self.space))

    def test_derive_twice(self):
        """Test --k 2 applies D twice."""
        code, out = run("derive", "x1^2", "--k", "2", "--json")
        self.assertEqual(code, EXIT_PASS)
        self.assertEqual(parse_rational(json.loads(out)["result"], self.space),
                         parse_rational("2*D(x1)^2 + 2*x1*D(x1,2)", self.space))

    def test_act(self):
        """Test x1 -> x1 + 2 x2 + 1."""
        code, out = run("act", "x1*D(x2)", "--h", "1 2; 0 1", "--h0", "1 0", "--json")
        self.assertEqual(code, EXIT_PASS)
        self.assertEqual(parse_rational(json.loads(out)["result"], self.space),
                         parse_rational("(x1 + 2*x2 + 1)*D(x2)", self.space))

    def test_act_dimension_mismatch(self):
        """Test a 2x2 matrix with --n 3 is a usage error."""
        code, _ = run("act", "x1", "--h", "1 0; 0 1", "--n", "3")
        self.assertEqual(code, EXIT_USAGE)

    def test_reparam(self):
        """Test D(x1) under g^-1 D."""
        code, out = run("reparam", "D(x1)", "--json")
        self.assertEqual(code, EXIT_PASS)
        expected = DiffRational.variable(x(1, 1)) / DiffRational.variable(aux("g"))
        self.assertEqual(parse_rational(json.loads(out)["result"], self.space), expected)

    def test_reparam_bare_g_flag(self):
        """Test --g is a flag selecting g^-1 D."""
        code, out = run("reparam", "D(x1)", "--g", "--json")
        self.assertEqual(code, EXIT_PASS)
        expected = DiffRational.variable(x(1, 1)) / DiffRational.variable(aux("g"))
        self.assertEqual(parse_rational(json.loads(out)["result"], self.space), expected)
        self.assertEqual(json.loads(out)["derivation"], "g_reparam")

    def test_reparam_g_and_p_exclusive(self):
        """Test --g together with --p is a usage error."""
        self.assertEqual(run("reparam", "D(x1)", "--g", "--p", "x1")[0], EXIT_USAGE)

    def test_reparam_by_p(self):
        """Test D(x1) under D(x1)^-1 D is 1."""
        code, out = run("reparam", "D(x1)", "--p", "D(x1)", "--json")
        self.assertEqual(code, EXIT_PASS)
        self.assertEqual(json.loads(out)["result"], "1")

    def test_invariant_p1(self):
        """Test the text form of p1 for n = 2."""
        code, out = run("invariant", "p1", "--n", "2")
        self.assertEqual(code, EXIT_PASS)
        self.assertTrue(out.startswith("p1 (n=2, weight 2)"))
        self.assertIn("with y_i = W_i/W", out)

    def test_gl_generators(self):
        """Test the generator listing for GL(2)⋉C^2."""
        code, out = run("invariant", "gl-gens", "--n", "2", "--json")
        self.assertEqual(code, EXIT_PASS)
        self.assertEqual(list(json.loads(out)["generators"]), ["W1/W", "W2/W"])

    def test_parse_error(self):
        """Test a malformed expression is a usage error."""
        self.assertEqual(run("derive", "x1 +")[0], EXIT_USAGE)
        self.assertEqual(run("derive", "q1")[0], EXIT_USAGE)

    def test_bad_choice(self):
        """Test argparse rejections are usage errors."""
        self.assertEqual(run("invariant", "p9")[0], EXIT_USAGE)
        self.assertEqual(run()[0], EXIT_USAGE)

    def test_parse_matrix(self):
        """Test rows split on ';' and entries on spaces or commas."""
        self.assertEqual(parse_matrix("1 2; 3/4,4"), [[1, 2], [Fraction(3, 4), 4]])
        with self.assertRaises(ValueError):
            parse_matrix(" ; ")


class TestVerifyCommand(unittest.TestCase):
    """Test verify for single identities."""

    def test_minor_law_json(self):
        """Test the minor law for j = 3 at n = 2."""
        code, out = run("verify", "minor-law", "3", "--n", "2", "--mode", "eval",
                        "--trials", "5", "--seed", "7", "--json")
        self.assertEqual(code, EXIT_PASS)
        data = json.loads(out)
        self.assertEqual(data["status"], STATUS_PASS)
        self.assertEqual(data["trials"], 5)
        self.assertEqual(data["seed"], 7)
        self.assertEqual(data["mode"], "evaluation")

    def test_missing_argument(self):
        """Test minor-law without J is a usage error."""
        self.assertEqual(run("verify", "minor-law")[0], EXIT_USAGE)

    def test_unexpected_argument(self):
        """Test eq2 with an argument is a usage error."""
        self.assertEqual(run("verify", "eq2", "1")[0], EXIT_USAGE)

    def test_phi_text(self):
        """Test the text report of the phi expansion."""
        code, out = run("verify", "phi", "3", "--mode", "sym")
        self.assertEqual(code, EXIT_PASS)
        self.assertIn("PASS", out)


class TestCurveCommands(unittest.TestCase):
    """Test signature, equiv and residuals on the bundled curves."""

    def test_signature(self):
        """Test the cusp signature in JSON."""
        code, out = run("signature", curve_path("cusp"), "--t0", "2", "--json")
        self.assertEqual(code, EXIT_PASS)
        self.assertEqual(json.loads(out)["values"], {"W1/W": "3/50", "W2/W": "-1/2"})

    def test_degenerate_signature(self):
        """Test the parabola exits with status 1."""
        code, out = run("signature", curve_path("parabola"), "--json")
        self.assertEqual(code, EXIT_FAIL)
        self.assertEqual(json.loads(out)["status"], "degenerate")

    def test_equivalent_curves(self):
        """Test the moved cusp is equivalent to the cusp."""
        code, _ = run("equiv", curve_path("cusp"), curve_path("cusp_moved"))
        self.assertEqual(code, EXIT_PASS)

    def test_inequivalent_curves(self):
        """Test the perturbed cusp is not."""
        code, out = run("equiv", curve_path("cusp"), curve_path("cusp_perturbed"), "--json")
        self.assertEqual(code, EXIT_FAIL)
        self.assertEqual(json.loads(out)["differing_indices"], [0, 1])

    def test_missing_curve_file(self):
        """Test a missing file is a usage error."""
        self.assertEqual(run("signature", curve_path("absent"))[0], EXIT_USAGE)

    def test_own_residuals(self):
        """Test the cusp realizes its own GL(2) targets."""
        code, out = run("residuals", curve_path("cusp"), "--group", "gl", "--t0", "2")
        self.assertEqual(code, EXIT_PASS)
        self.assertIn("realizes the targets", out)

    def test_perturbed_residuals(self):
        """Test shifting b1 breaks the realization."""
        code, out = run("residuals", curve_path("cusp"), "--group", "gl", "--t0", "2",
                        "--perturb", "1", "--json")
        self.assertEqual(code, EXIT_FAIL)
        data = json.loads(out)
        self.assertEqual(data["status"], "fail")
        self.assertEqual(data["residuals"]["phi1-b1"], "-1")


def fake_report(name, argument=None, n=2, *args, **kwargs):
    status = STATUS_FAIL if name == "eq4" else STATUS_PASS
    identity = f"{name} {argument}" if argument is not None else name
    return IdentityReport(identity=identity, n=n, mode="evaluation", trials=5, seed=7, status=status)


class TestSymbolicAtSample(unittest.TestCase):
    """Test symbolic group checks at one sampled element."""

    def setUp(self):
        self.group = get_group("gl_affine")
        self.ratio = minor_ratio(2, 1)

    def check(self, seed=None):
        return symbolic_at_sample("H W1/W", self.group, 2, seed,
                                  lambda m: (Pullback.of(self.ratio, 2).act(m), self.ratio))

    def test_default_seed_is_deterministic(self):
        """Test a missing seed falls back to the configured one."""
        first, second = self.check(), self.check()
        self.assertEqual(first.seed, get_default_seed())
        self.assertEqual(first.detail, second.detail)
        self.assertEqual(first.detail, self.check(get_default_seed()).detail)
        self.assertTrue(first.detail.startswith("sampled element h="))

    def test_label_names_the_sample(self):
        """Test a pass does not claim the law for every element."""
        report = self.check(3)
        self.assertTrue(report.passed)
        self.assertEqual(report.seed, 3)
        self.assertEqual(report.label, "identity holds symbolically at one sampled group element")
        self.assertEqual(report.to_dict()["group"], "gl_affine")


class TestCampaign(unittest.TestCase):

    """Test the campaign table."""

    def test_cases_by_dimension(self):
        """Test which identities run at n = 2 and n = 3."""
        cases2 = campaign_cases(2)
        self.assertIn(("minor-law", "3"), cases2)
        self.assertIn(("invariance", "orthogonal"), cases2)
        self.assertNotIn(("weight", "p2"), cases2)
        cases3 = campaign_cases(3)
        self.assertIn(("weight", "p2"), cases3)
        self.assertNotIn(("invariance", "orthogonal"), cases3)

    def test_table(self):
        """Test one row per case with the fixed columns."""
        with patch("cli.campaign.run_identity", side_effect=fake_report):
            df, reports = run_campaign(2)
        self.assertEqual(list(df.columns), COLUMNS)
        self.assertEqual(len(df), len(campaign_cases(2)))
        self.assertEqual(len(reports), len(df))
        self.assertFalse(campaign_passed(df))
        counts = dict(zip(summarize(df)["status"], summarize(df)["count"]))
        self.assertEqual(counts[STATUS_FAIL], 1)

    def test_passed(self):
        """Test campaign_passed on an all-pass table."""
        df = pd.DataFrame({"status": [STATUS_PASS, STATUS_PASS]})
        self.assertTrue(campaign_passed(df))

    def test_full_campaign_runs_in_time(self):
        """Test verify all at n = 2 passes and finishes within five minutes."""
        started = time.perf_counter()
        df, _ = run_campaign(2)
        elapsed = time.perf_counter() - started
        self.assertTrue(campaign_passed(df), df[df["status"] != STATUS_PASS].to_string())
        self.assertLess(elapsed, 300)
        self.assertLess(df["seconds"].sum(), 300)

    def test_variant_dimension(self):

        """Test the ratio normalizer needs n >= 3."""
        with self.assertRaises(ValueError):
            run_campaign(2, variant=NormalizerVariant.RATIO)


if __name__ == '__main__':
    unittest.main()

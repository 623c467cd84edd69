"""
Unit tests for Wronskians, their minors and the transformation laws.

Covers:
- W and W_i as determinants, hand-computed values along the cusp
- W^delta = g^(-n(n+1)/2) W
- The general minor law and its written-out forms
- The ratio laws for W_n/W, W_(n-1)/W, (W_n/W)^2 and delta(W_n/W)
- The alternating sum against the extended Wronskian
"""

import unittest
import os
import sys
from fractions import Fraction

# Add parent directory to path for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from core.jets import aux, x
from core.polynomial import DiffPolynomial
from core.rational import DiffRational, eq_rational
from evaluation.curves import T, CurveSpec, jets_of_curve
from evaluation.identity import STATUS_FAIL, STATUS_PASS, VerificationMode, verify_identity
from evaluation.points import Pullback
from transforms.actions import DerivationSpec, reinterpret
from transforms.wronskian import (
    alternating_sum, delta_ratio_rhs, eq2_rhs, eq3_rhs, eq4_rhs, extended_wronskian,
    falling_factorial, minor_display, minor_ratio, predicted_minor_transform, scale_ratio,
    triangular, wronskian, wronskian_minor)


def g_reparam(f, n):
    return Pullback.of(f, n).reparam(DerivationSpec.g_reparam())


class TestWronskianValues(unittest.TestCase):
    """Test W and its minors along u = (t^2, t^3)."""

    def setUp(self):
        self.cusp = CurveSpec((T ** 2, T ** 3), "cusp")

    def at(self, f, t0):
        return DiffRational.of(f).evaluate(jets_of_curve(self.cusp, t0, 3))

    def test_wronskian_is_6t2(self):
        """Test W = 6 t^2."""
        for t0 in (1, 2, Fraction(1, 3)):
            self.assertEqual(self.at(wronskian(2), t0), 6 * Fraction(t0) ** 2)

    def test_minors(self):
        """Test W1 = 12 and W2 = 12 t."""
        self.assertEqual(self.at(wronskian_minor(2, 1), 2), 12)
        self.assertEqual(self.at(wronskian_minor(2, 2), 2), 24)
        self.assertEqual(wronskian_minor(2, 3), wronskian(2))

    def test_ratios(self):
        """Test W1/W = 2/t^2 and W2/W = 2/t."""
        self.assertEqual(self.at(minor_ratio(2, 1), 2), Fraction(1, 2))
        self.assertEqual(self.at(minor_ratio(2, 2), 2), 1)

    def test_index_out_of_range(self):
        """Test i = 0 and i = n + 2 are rejected."""
        with self.assertRaises(ValueError):
            wronskian_minor(2, 0)
        with self.assertRaises(ValueError):
            wronskian_minor(2, 4)
        with self.assertRaises(ValueError):
            wronskian(0)

    def test_helpers(self):
        """Test triangular numbers and falling factorials."""
        self.assertEqual(triangular(3), 6)
        self.assertEqual(falling_factorial(5, 4), 120)
        self.assertEqual(falling_factorial(4, 0), 1)


class TestMinorLaw(unittest.TestCase):
    """Test W^delta_j = g^-(n+1)(n+2)/2 sum_i (-1)^(i-j) Phi_{i,j} W_i."""

    def setUp(self):
        self.g = DerivationSpec.g_reparam()

    def test_wronskian_weight_symbolic(self):
        """Test W^delta = g^-3 W for n = 2."""
        expected = DiffRational.variable(aux("g")) ** -3 * wronskian(2)
        self.assertTrue(eq_rational(reinterpret(wronskian(2), self.g), expected))

    def test_minor_law_symbolic_n2(self):
        """Test every minor law for n = 2 by exact comparison."""
        for j in range(1, 4):
            with self.subTest(j=j):
                lhs = reinterpret(wronskian_minor(2, j), self.g)
                self.assertTrue(eq_rational(lhs, predicted_minor_transform(2, j)))

    def test_minor_law_evaluation_n3(self):
        """Test every minor law for n = 3 at random points."""
        for j in range(1, 5):
            with self.subTest(j=j):
                report = verify_identity(g_reparam(wronskian_minor(3, j), 3), predicted_minor_transform(3, j),
                                         VerificationMode.EVALUATION, trials=5, seed=7, n=3)
                self.assertEqual(report.status, STATUS_PASS)

    def test_written_out_forms_agree(self):
        """Test the displayed laws for j = n+1..n-2 match the general law."""
        for n, js in ((2, (3, 2, 1)), (3, (4, 3, 2, 1))):
            for j in js:
                with self.subTest(n=n, j=j):
                    self.assertTrue(eq_rational(minor_display(n, j), predicted_minor_transform(n, j)))

    def test_no_written_out_form(self):
        """Test j below n-2 has no displayed law."""
        with self.assertRaises(ValueError):
            minor_display(4, 1)


class TestRatioLaws(unittest.TestCase):
    """Test the laws for ratios of minors."""

    def check(self, lhs, rhs, n, trials=10, seed=3):
        return verify_identity(lhs, rhs, VerificationMode.EVALUATION, trials=trials, seed=seed, n=n)

    def test_eq2(self):
        """Test W^delta_n/W^delta for n = 1, 2, 3."""
        for n in (1, 2, 3):
            with self.subTest(n=n):
                self.assertTrue(self.check(g_reparam(minor_ratio(n, n), n), eq2_rhs(n), n).passed)

    def test_eq3(self):
        """Test W^delta_(n-1)/W^delta for n = 2, 3."""
        for n in (2, 3):
            with self.subTest(n=n):
                self.assertTrue(self.check(g_reparam(minor_ratio(n, n - 1), n), eq3_rhs(n), n).passed)

    def test_eq3_needs_two_dimensions(self):
        """Test eq3_rhs(1) raises ValueError."""
        with self.assertRaises(ValueError):
            eq3_rhs(1)

    def test_eq4(self):
        """Test the squared ratio law for n = 2, 3."""
        for n in (2, 3):
            with self.subTest(n=n):
                self.assertTrue(self.check(g_reparam(minor_ratio(n, n) ** 2, n), eq4_rhs(n), n).passed)

    def test_delta_ratio(self):
        """Test delta(W_n/W) after reinterpretation for n = 2."""
        lhs = g_reparam(minor_ratio(2, 2).derive(), 2)
        self.assertTrue(self.check(lhs, delta_ratio_rhs(2), 2).passed)

    def test_eq2_symbolic(self):
        """Test the first ratio law exactly for n = 2."""
        lhs = reinterpret(minor_ratio(2, 2), DerivationSpec.g_reparam())
        self.assertTrue(eq_rational(lhs, eq2_rhs(2)))

    def test_perturbed_law_fails_with_witness(self):
        """Test changing n(n+1)/2 = 3 to 4 is detected."""
        g_inverse = DiffRational.variable(aux("g")) ** -1
        wrong = g_inverse * (minor_ratio(2, 2) - 4 * scale_ratio())
        report = self.check(g_reparam(minor_ratio(2, 2), 2), wrong, 2)
        self.assertEqual(report.status, STATUS_FAIL)
        self.assertIsNotNone(report.witness)
        self.assertIn("g", report.witness)

    def test_reports_are_deterministic(self):
        """Test equal seeds give equal reports."""
        first = self.check(g_reparam(minor_ratio(2, 2), 2), eq2_rhs(2), 2, seed=42)
        second = self.check(g_reparam(minor_ratio(2, 2), 2), eq2_rhs(2), 2, seed=42)
        self.assertEqual(first.to_dict(), second.to_dict())


class TestAlternatingSum(unittest.TestCase):
    """Test sum (-1)^(n+1-i) W_i d^i y against the extended determinant."""

    def test_matches_extended_wronskian(self):
        """Test the expansion along the y row for n = 1, 2, 3."""
        for n in (1, 2, 3):
            with self.subTest(n=n):
                self.assertEqual(alternating_sum(n), extended_wronskian(n))

    def test_vanishes_on_coordinates(self):
        """Test substituting y = x1 gives zero."""
        mapping = {aux("y", k): DiffRational.variable(x(1, k)) for k in range(4)}
        total = DiffRational.of(alternating_sum(2)).substitute(mapping)
        self.assertTrue(total.is_zero())
        self.assertIsInstance(alternating_sum(2), DiffPolynomial)


if __name__ == '__main__':
    unittest.main()

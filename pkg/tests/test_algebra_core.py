"""
Unit tests for the differential algebra core.

Covers:
- Jet variables and the variable universe
- Polynomial ring operations and the derivation d
- Rational normal form, equality, evaluation and orders
- Exact determinants (cofactor and fraction-free)
"""

import unittest
import os
import sys
from fractions import Fraction

import numpy as np

# Add parent directory to path for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from core.jets import JetSpace, VarKey, aux, split_symbol, x
from core.matrix import JetMatrix, det, fraction_det
from core.polynomial import DiffPolynomial
from core.rational import DiffRational, eq_rational, order_in


def random_polynomial(rng, n=2, max_order=2, terms=3):
    """Small random polynomial in x-jets with integer coefficients."""
    keys = [x(i, k) for i in range(1, n + 1) for k in range(max_order + 1)]
    result = []
    for _ in range(terms):
        coeff = int(rng.integers(-5, 6)) or 1
        powers = {}
        for _ in range(int(rng.integers(1, 3))):
            key = keys[int(rng.integers(0, len(keys)))]
            powers[key] = powers.get(key, 0) + 1
        result.append((coeff, powers))
    return DiffPolynomial.from_terms(result)


def random_point(rng, n=2, max_order=4):
    return {x(i, k): Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 10)))
            for i in range(1, n + 1) for k in range(max_order + 1)}


class TestJetVariables(unittest.TestCase):
    """Test jet variable construction and the variable universe."""

    def test_coordinate_and_auxiliary_keys(self):
        """Test x() and aux() build the expected keys."""
        self.assertEqual(x(2, 3), VarKey("x", 2, 3))
        self.assertEqual(aux("t1", 2), VarKey("t", 1, 2))
        self.assertEqual(aux("g"), VarKey("g", 0, 0))

    def test_invalid_keys_raise(self):
        """Test invalid indices and orders are rejected."""
        with self.assertRaises(ValueError):
            x(0)
        with self.assertRaises(ValueError):
            x(1, -1)
        with self.assertRaises(ValueError):
            aux("x1")

    def test_split_symbol(self):
        """Test numbered and unnumbered symbol names."""
        self.assertEqual(split_symbol("t12"), ("t", 12))
        self.assertEqual(split_symbol("g"), ("g", 0))

    def test_printing(self):
        """Test jet variables print in the surface syntax."""
        self.assertEqual(str(x(1)), "x1")
        self.assertEqual(str(x(1, 1)), "D(x1)")
        self.assertEqual(str(x(2, 3)), "D(x2,3)")

    def test_space_resolution(self):
        """Test the universe resolves declared names only."""
        space = JetSpace(2)
        self.assertEqual(space.resolve("x2"), x(2))
        self.assertIsNone(space.resolve("x3"))
        self.assertIsNone(space.resolve("q"))
        self.assertEqual(space.resolve("t1"), aux("t1"))

    def test_space_validate_dimension_mismatch(self):
        """Test a coordinate beyond n is a dimension mismatch."""
        with self.assertRaisesRegex(ValueError, "dimension mismatch"):
            JetSpace(2).validate([x(3)])


class TestDiffPolynomial(unittest.TestCase):
    """Test polynomial arithmetic and the derivation."""

    def setUp(self):
        self.rng = np.random.default_rng(11)
        self.x1 = DiffPolynomial.variable(x(1))
        self.x2 = DiffPolynomial.variable(x(2))

    def test_derive_variable(self):
        """Test d raises the jet order."""
        self.assertEqual(self.x1.derive(), DiffPolynomial.variable(x(1, 1)))

    def test_derive_product_leibniz(self):
        """Test d(x1*x2) = dx1*x2 + x1*dx2."""
        expected = (DiffPolynomial.variable(x(1, 1)) * self.x2
                    + self.x1 * DiffPolynomial.variable(x(2, 1)))
        self.assertEqual((self.x1 * self.x2).derive(), expected)

    def test_derive_constant_is_zero(self):
        """Test d of a constant vanishes."""
        self.assertFalse(DiffPolynomial.constant(7).derive())

    def test_derivation_axioms_random(self):
        """Test additivity and Leibniz on 200 random pairs."""
        for _ in range(200):
            a = random_polynomial(self.rng)
            b = random_polynomial(self.rng)
            self.assertEqual((a + b).derive(), a.derive() + b.derive())
            self.assertEqual((a * b).derive(), a.derive() * b + a * b.derive())

    def test_ring_identities(self):
        """Test subtraction to zero and distributivity."""
        a = random_polynomial(self.rng)
        b = random_polynomial(self.rng)
        c = random_polynomial(self.rng)
        self.assertFalse(a - a)
        self.assertEqual(a * (b + c), a * b + a * c)

    def test_power(self):
        """Test (x1 + x2)^2 expands."""
        expected = self.x1 * self.x1 + self.x1 * self.x2 * 2 + self.x2 * self.x2
        self.assertEqual((self.x1 + self.x2) ** 2, expected)

    def test_exact_quotient(self):
        """Test exquo recovers a factor and refuses a non-factor."""
        a = random_polynomial(self.rng)
        b = self.x1 + self.x2 + 1
        self.assertEqual((a * b).exquo(b), a)
        self.assertIsNone((self.x1 + 1).exquo(self.x2 + 1))

    def test_evaluate_missing_variable(self):
        """Test evaluation at a partial assignment raises ValueError."""
        with self.assertRaises(ValueError):
            (self.x1 * self.x2).evaluate({x(1): Fraction(1)})

    def test_evaluation_homomorphism(self):
        """Test evaluation respects + and * on random triples."""
        for _ in range(20):
            a = random_polynomial(self.rng)
            b = random_polynomial(self.rng)
            point = random_point(self.rng)
            self.assertEqual((a * b).evaluate(point), a.evaluate(point) * b.evaluate(point))
            self.assertEqual((a + b).evaluate(point), a.evaluate(point) + b.evaluate(point))


class TestDiffRational(unittest.TestCase):
    """Test rational normal form and equality."""

    def setUp(self):
        self.rng = np.random.default_rng(5)
        self.x1 = DiffPolynomial.variable(x(1))
        self.x2 = DiffPolynomial.variable(x(2))

    def test_zero_denominator_raises(self):
        """Test constructing p/0 raises ZeroDivisionError."""
        with self.assertRaises(ZeroDivisionError):
            DiffRational(self.x1, 0)

    def test_exact_cancellation(self):
        """Test (x1^2 - x2^2)/(x1 + x2) normalizes to x1 - x2."""
        r = DiffRational(self.x1 * self.x1 - self.x2 * self.x2, self.x1 + self.x2)
        self.assertTrue(r.is_polynomial())
        self.assertEqual(r.num, self.x1 - self.x2)

    def test_equality_by_cross_multiplication(self):
        """Test equal fractions with different representatives compare equal."""
        a = DiffRational(self.x1 * (self.x2 + 1), self.x2 * (self.x2 + 1))
        b = DiffRational(self.x1, self.x2)
        self.assertTrue(eq_rational(a, b))

    def test_eq_rational_is_equivalence(self):
        """Test reflexivity, symmetry and transitivity on random triples."""
        for _ in range(10):
            p = random_polynomial(self.rng)
            q = random_polynomial(self.rng) + 3
            s = self.x1 + 2
            a = DiffRational(p, q)
            b = DiffRational(p * s, q * s)
            c = DiffRational(p * s * s, q * s * s)
            self.assertTrue(eq_rational(a, a))
            self.assertEqual(eq_rational(a, b), eq_rational(b, a))
            self.assertTrue(eq_rational(a, b) and eq_rational(b, c) and eq_rational(a, c))

    def test_normalizing_twice(self):
        """Test normal form is idempotent."""
        r = DiffRational(self.x1 * 2 + 4, self.x2 * 6)
        again = DiffRational(r.num, r.den)
        self.assertEqual(again.num, r.num)
        self.assertEqual(again.den, r.den)

    def test_quotient_rule(self):
        """Test d(x1/x2) = (dx1*x2 - x1*dx2)/x2^2."""
        r = DiffRational(self.x1, self.x2).derive()
        expected = DiffRational(DiffPolynomial.variable(x(1, 1)) * self.x2
                                - self.x1 * DiffPolynomial.variable(x(2, 1)), self.x2 * self.x2)
        self.assertEqual(r, expected)

    def test_evaluate_at_zero_denominator(self):
        """Test evaluation raises when the denominator vanishes."""
        r = DiffRational(self.x1, self.x2 - 1)
        with self.assertRaises(ZeroDivisionError):
            r.evaluate({x(1): Fraction(3), x(2): Fraction(1)})

    def test_negative_power(self):
        """Test r^-2 inverts."""
        r = DiffRational(self.x1, self.x2)
        self.assertEqual(r ** -2, DiffRational(self.x2 * self.x2, self.x1 * self.x1))

    def test_order_in(self):
        """Test the order of a function in one coordinate."""
        r = DiffRational(DiffPolynomial.variable(x(1, 3)), self.x2)
        self.assertEqual(order_in(r, 1), 3)
        self.assertEqual(order_in(r, 2), 0)

    def test_order_in_absent_variable(self):
        """Test order_in is None when x_i does not occur."""
        self.assertIsNone(order_in(DiffRational(self.x1, 1), 2))
        self.assertIsNone(order_in(DiffRational.of(5), 1))

    def test_order_in_after_derive(self):
        """Test d(d^2 x1 / x2) has order 3 in x1."""
        r = DiffRational(DiffPolynomial.variable(x(1, 2)), self.x2)
        self.assertEqual(order_in(r.derive(), 1), 3)
        self.assertEqual(order_in(r.derive(), 2), 1)

    def test_derive_raises_order_by_one(self):
        """Test d raises the order in every occurring coordinate by exactly one."""
        for _ in range(20):
            r = DiffRational(random_polynomial(self.rng), random_polynomial(self.rng) + 7)
            derived = r.derive()
            for i in (1, 2):
                before = order_in(r, i)
                if before is None:
                    continue
                self.assertEqual(order_in(derived, i), before + 1)

    def test_evaluate_with_default_total(self):
        """Test dx1/g at dx1 = 3, g = 2 is 3/2."""
        r = DiffRational.variable(x(1, 1)) / DiffRational.variable(aux("g"))
        self.assertEqual(r.evaluate({x(1, 1): Fraction(3), aux("g"): Fraction(2)}), Fraction(3, 2))
        self.assertEqual(self.x1.evaluate({x(1): Fraction(4)}), Fraction(4))


class TestDeterminants(unittest.TestCase):
    """Test exact determinants."""

    def test_fraction_determinant(self):
        """Test a constant 3x3 determinant."""
        rows = [[2, 0, 1], [1, 3, 2], [1, 1, 1]]
        self.assertEqual(fraction_det(rows), Fraction(0))
        self.assertEqual(fraction_det([[Fraction(1, 2), 1], [3, 4]]), Fraction(-1))

    def test_cofactor_matches_bareiss(self):
        """Test both algorithms agree on a polynomial matrix."""
        entries = [[DiffPolynomial.variable(x(i, k)) for k in range(1, 6)] for i in range(1, 6)]
        matrix = JetMatrix.from_rows(entries)
        self.assertEqual(det(matrix, cofactor_limit=5), det(matrix, cofactor_limit=1))

    def test_non_square_rejected(self):
        """Test a non-square matrix raises ValueError."""
        with self.assertRaises(ValueError):
            JetMatrix.from_rows([[1, 2], [3]])


if __name__ == '__main__':
    unittest.main()

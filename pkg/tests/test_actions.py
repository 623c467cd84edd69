"""
Unit tests for the affine action and reparametrized derivations.

Covers:
- AffineMap validation, composition and inverse
- act_affine on jets
- delta = g^-1 d and p^-1 d, reinterpretation, the shared delta-jet memo
- Phi_{k,i}{g} coefficients and the expansion of d^k
- Composition of auxiliary indeterminates
"""

import unittest
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

# Add parent directory to path for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from core.jets import aux, x
from core.polynomial import DiffPolynomial
from core.rational import DiffRational, eq_rational
from transforms.actions import (
    AffineMap, DerivationKind, DerivationSpec, act_affine, check_phi_expansion,
    compose_indeterminates, delta_apply, delta_jet, phi_coefficient, reinterpret)


def var(key):
    return DiffPolynomial.variable(key)


class TestAffineMap(unittest.TestCase):
    """Test the group elements themselves."""

    def test_singular_matrix_rejected(self):
        """Test a singular h raises ValueError."""
        with self.assertRaisesRegex(ValueError, "singular"):
            AffineMap(((1, 2), (2, 4)), (0, 0))

    def test_shift_length_checked(self):
        """Test h0 must match the dimension."""
        with self.assertRaises(ValueError):
            AffineMap(((1, 0), (0, 1)), (1,))

    def test_compose_with_inverse_is_identity(self):
        """Test m o m^-1 = identity."""
        m = AffineMap(((2, 1), (1, 1)), (3, Fraction(-1, 2)))
        self.assertEqual(m.compose(m.inverse()), AffineMap.identity(2))

    def test_orthogonality(self):
        """Test rotation by a Pythagorean angle is orthogonal."""
        rotation = AffineMap(((Fraction(3, 5), Fraction(-4, 5)), (Fraction(4, 5), Fraction(3, 5))), (0, 0))
        self.assertTrue(rotation.is_orthogonal())
        self.assertFalse(AffineMap(((2, 0), (0, 1)), (0, 0)).is_orthogonal())


class TestActAffine(unittest.TestCase):
    """Test substitution x -> h x + h0."""

    def setUp(self):
        self.m = AffineMap(((1, 2), (3, 4)), (5, 6))

    def test_translation_only_at_order_zero(self):
        """Test x1 picks up h0 but D(x1) does not."""
        self.assertEqual(act_affine(var(x(1)), self.m), var(x(1)) + var(x(2)) * 2 + 5)
        self.assertEqual(act_affine(var(x(1, 1)), self.m), var(x(1, 1)) + var(x(2, 1)) * 2)

    def test_determinant_scales(self):
        """Test det[dx, d^2x] is multiplied by det h."""
        w = var(x(1, 1)) * var(x(2, 2)) - var(x(2, 1)) * var(x(1, 2))
        self.assertEqual(act_affine(w, self.m), DiffRational.of(w) * self.m.determinant())

    def test_dimension_mismatch(self):
        """Test a coordinate beyond n raises ValueError."""
        with self.assertRaisesRegex(ValueError, "dimension mismatch"):
            act_affine(var(x(3)), self.m)

    def test_action_commutes_with_d(self):
        """Test act_affine(d f) = d act_affine(f)."""
        f = DiffRational(var(x(1)) * var(x(2, 1)), var(x(2)) + 1)
        self.assertTrue(eq_rational(act_affine(f.derive(), self.m), act_affine(f, self.m).derive()))


class TestReparametrization(unittest.TestCase):
    """Test delta = g^-1 d and reinterpretation."""

    def setUp(self):
        self.spec = DerivationSpec.g_reparam()
        self.g = DiffRational.variable(aux("g"))

    def test_delta_of_x(self):
        """Test delta x1 = D(x1)/g."""
        self.assertEqual(delta_jet(1, 1, self.spec), DiffRational.variable(x(1, 1)) / self.g)

    def test_delta_squared(self):
        """Test delta^2 x1 = D(x1,2)/g^2 - D(g) D(x1)/g^3."""
        expected = (DiffRational.variable(x(1, 2)) / self.g ** 2
                    - DiffRational.variable(aux("g", 1)) * DiffRational.variable(x(1, 1)) / self.g ** 3)
        self.assertEqual(delta_jet(1, 2, self.spec), expected)

    def test_reinterpret_base_is_identity(self):
        """Test the base derivation leaves f unchanged."""
        f = DiffRational.variable(x(1, 2))
        self.assertEqual(reinterpret(f, DerivationSpec.base()), f)

    def test_reinterpret_is_differential_map(self):
        """Test reinterpret(d f) = delta reinterpret(f)."""
        f = DiffRational(var(x(1)) * var(x(2, 1)), var(x(1, 1)) + 2)
        lhs = reinterpret(f.derive(), self.spec)
        rhs = delta_apply(reinterpret(f, self.spec), self.spec)
        self.assertTrue(eq_rational(lhs, rhs))

    def test_shared_spec_across_threads(self):
        """Test concurrent delta jets on one spec match a fresh sequential spec."""
        shared = DerivationSpec.g_reparam()
        jobs = [(i, k) for k in range(4, 0, -1) for i in (1, 2)] * 3
        with ThreadPoolExecutor(max_workers=6) as pool:
            results = list(pool.map(lambda job: delta_jet(job[0], job[1], shared), jobs))
        fresh = DerivationSpec.g_reparam()
        for (i, k), value in zip(jobs, results):
            self.assertEqual(value, delta_jet(i, k, fresh))

    def test_p_reparam_requires_nonzero(self):
        """Test delta = 0^-1 d is rejected."""
        with self.assertRaises(ValueError):
            DerivationSpec.p_reparam(DiffRational.of(0))

    def test_derivation_kind_labels(self):
        """Test labels round-trip through from_label."""
        for kind in DerivationKind:
            self.assertIs(DerivationKind.from_label(kind.label), kind)
        self.assertIs(DerivationKind.from_label("g-reparam"), DerivationKind.G_REPARAM)
        with self.assertRaises(ValueError):
            DerivationKind.from_label("h_reparam")

    def test_p_reparam_divisor(self):
        """Test the divisor of a p-reparametrization is p."""
        p = DiffRational.variable(x(1, 1))
        spec = DerivationSpec.p_reparam(p)
        self.assertEqual(spec.kind, DerivationKind.P_REPARAM)
        self.assertEqual(delta_jet(1, 1, spec), DiffRational.of(1))


class TestPhiCoefficients(unittest.TestCase):
    """Test the expansion d^k = sum_i Phi_{k,i}{g} delta^i."""

    def test_expansion_k_1_to_5(self):
        """Test the expansion holds exactly for k = 1..5."""
        for k in range(1, 6):
            with self.subTest(k=k):
                self.assertTrue(check_phi_expansion(k))

    def test_corner_coefficients(self):
        """Test Phi_{k,1} = d^(k-1) g and Phi_{k,k} = g^k for k <= 6."""
        for k in range(1, 7):
            with self.subTest(k=k):
                self.assertEqual(phi_coefficient(k, 1), var(aux("g", k - 1)))
                self.assertEqual(phi_coefficient(k, k), var(aux("g")) ** k)

    def test_second_order_middle(self):
        """Test Phi_{3,2} = 3 g D(g)."""
        self.assertEqual(phi_coefficient(3, 2), var(aux("g")) * var(aux("g", 1)) * 3)

    def test_invalid_indices(self):
        """Test i outside 1..k raises ValueError."""
        with self.assertRaises(ValueError):
            phi_coefficient(3, 4)
        with self.assertRaises(ValueError):
            check_phi_expansion(0)


class TestComposeIndeterminates(unittest.TestCase):
    """Test substitution of functions for auxiliary indeterminates."""

    def test_base_composition(self):
        """Test D(t1) with t1 := x1*x2 becomes d(x1*x2)."""
        f = DiffRational.variable(aux("t1", 1))
        images = {"t1": DiffRational.of(var(x(1)) * var(x(2)))}
        expected = DiffRational.of(var(x(1, 1)) * var(x(2)) + var(x(1)) * var(x(2, 1)))
        self.assertEqual(compose_indeterminates(f, images), expected)

    def test_reparametrized_composition(self):
        """Test D(t1) under delta = g^-1 d becomes d(image)/g."""
        f = DiffRational.variable(aux("t1", 1))
        images = {"t1": DiffRational.variable(x(1))}
        result = compose_indeterminates(f, images, DerivationSpec.g_reparam())
        self.assertEqual(result, DiffRational.variable(x(1, 1)) / DiffRational.variable(aux("g")))

    def test_unmapped_symbols_stay(self):
        """Test symbols without an image are left alone."""
        f = DiffRational.variable(aux("t2"))
        self.assertEqual(compose_indeterminates(f, {"t1": DiffRational.of(1)}), f)


if __name__ == '__main__':
    unittest.main()

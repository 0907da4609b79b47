import math
import unittest
from dataclasses import replace
from fractions import Fraction

import numpy as np

from hyperball.bs_torus import TorusSpec
from hyperball.bundle_geometry import CirclePoint, fiber_modulus
from hyperball.exceptions import AssumptionViolation, EnumerationOverflow, InvalidParameter, OddWeightVector
from hyperball.hermitian_core import BallPoint, GroupElement, Flavor, act, jacobian_det, random_ball_point, \
    random_group_element
from hyperball.series import LatticeSpec, SeriesSpec, ConstantMode, q_l, q_multi, gamma0_invariance_residual, \
    enumerate_group, coset_reps, theta_series, theta_value, nonvanishing_probe, torus_probe_points, example_lattice, \
    example_series, c1_sum, c1_residue, c1_residue_leibniz, c1_closed_form, residue_at, radial_beta, \
    radial_integral, torus_integral, empirical_ratio, constant_C, constant_report
from hyperball.spectral import hyperbolic_data, normal_form
from hyperball.types import TypesHelper, QuadratureSpec

REFERENCE = BallPoint(np.array([0.3, 0.2]))


def reference_point():
    return CirclePoint(REFERENCE, complex(fiber_modulus(REFERENCE.affine)))


class TestSeed(unittest.TestCase):
    def test_value(self):
        spec = example_series(1, 1, "cyclic", lam=2.0, max_word_length=1)
        self.assertAlmostEqual(q_l(REFERENCE, spec), 0.09 / 0.84934656, places=12)

    def test_invariance(self):
        rng = np.random.default_rng(41)
        spec = example_series(2, 3, "cyclic", lam=3.0, max_word_length=1)
        for _ in range(20):
            z = random_ball_point(rng, 2, 0.7)
            self.assertLess(gamma0_invariance_residual(spec, z), 1e-11 * max(1.0, abs(q_l(z, spec))))

    def test_weight_vector(self):
        hyp = hyperbolic_data(normal_form(2.0))
        self.assertAlmostEqual(q_multi(REFERENCE, hyp, [2], 1), 0.09 / 0.84934656, places=12)
        with self.assertRaises(OddWeightVector):
            q_multi(REFERENCE, hyp, [1], 1)
        with self.assertRaises(InvalidParameter):
            q_multi(REFERENCE, hyp, [-2], 1)

    def test_assumption(self):
        gamma0 = GroupElement(-normal_form(2.0).matrix, Flavor.U)
        with self.assertRaises(AssumptionViolation):
            SeriesSpec(1, 1, hyperbolic_data(gamma0), example_lattice("cyclic", 2.0, 1))


class TestEnumeration(unittest.TestCase):
    def test_sizes(self):
        self.assertEqual(len(enumerate_group(example_lattice("cyclic", 8.0, 2))), 5)
        elements = enumerate_group(example_lattice("two_generator", 8.0, 2))
        self.assertEqual(len(elements), 17)
        self.assertEqual([e.shell for e in elements[:5]], [0, 1, 1, 1, 1])
        with self.assertRaises(EnumerationOverflow):
            enumerate_group(example_lattice("two_generator", 8.0, 4), cap=30)

    def test_inverses_appended(self):
        lattice = example_lattice("two_generator", 8.0, 1)
        self.assertEqual(len(lattice.generators), 4)
        self.assertEqual(len(LatticeSpec(list(lattice.generators), 1).generators), 4)

    def test_finite_group_dedup(self):
        w = np.exp(2j * math.pi / 3)
        rotation = GroupElement(np.diag([w, 1.0 / w, 1.0]), Flavor.SU)
        self.assertEqual(len(enumerate_group(LatticeSpec([rotation], 6))), 3)

    def test_cyclic_cosets(self):
        spec = example_series(1, 1, "cyclic", max_word_length=4)
        reps = coset_reps(enumerate_group(spec.lattice), spec.gamma0)
        self.assertEqual(len(reps), 1)
        self.assertAlmostEqual(theta_value(REFERENCE, spec, reps), q_l(REFERENCE, spec), places=12)

    def test_power_of_generator(self):
        gamma = normal_form(2.0)
        spec = SeriesSpec(1, 1, hyperbolic_data(gamma.power(3)), LatticeSpec([gamma], 6))
        reps = coset_reps(enumerate_group(spec.lattice), spec.gamma0)
        self.assertEqual(len(reps), 3)
        self.assertAlmostEqual(theta_value(REFERENCE, spec, reps) / q_l(REFERENCE, spec), 3.0, places=10)

    def test_conjugated_lattice(self):
        rng = np.random.default_rng(42)
        h = random_group_element(rng, max_boost=0.5)
        spec = example_series(1, 1, max_word_length=3)
        moved = SeriesSpec(1, 1, spec.hyp.transported(h),
                           LatticeSpec([g.conjugate_by(h) for g in spec.lattice.generators], 3))
        reps = coset_reps(enumerate_group(spec.lattice), spec.gamma0)
        moved_reps = coset_reps(enumerate_group(moved.lattice), moved.gamma0)
        self.assertEqual(len(reps), len(moved_reps))
        z = BallPoint(np.array([0.2, 0.1j]))
        expected = theta_value(z, spec, reps)
        value = theta_value(act(h, z), moved, moved_reps) * jacobian_det(h, z.affine) ** 2
        self.assertLess(abs(value - expected) / abs(expected), 1e-8)

    def test_serialization(self):
        spec = example_series(1, 2, max_word_length=2)
        restored = TypesHelper.from_dict_facade(spec.to_dict())
        self.assertIsInstance(restored, SeriesSpec)
        self.assertEqual((restored.k, restored.l), (1, 2))
        self.assertEqual(len(restored.lattice.generators), 4)
        self.assertTrue(np.allclose(restored.gamma0.matrix, spec.gamma0.matrix))


class TestPartialSums(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.spec = example_series(1, 1)
        cls.reps = coset_reps(enumerate_group(cls.spec.lattice), cls.spec.gamma0)

    def test_trends(self):
        sums = theta_series(BallPoint(np.array([0.2, -0.1j])), self.spec, self.reps)
        self.assertEqual([p.shell for p in sums], list(range(6)))
        gaps = [p.cauchy_gap for p in sums[2:]]
        self.assertTrue(all(b < a for a, b in zip(gaps, gaps[1:])))
        self.assertGreater(sums[2].automorphy_residual, sums[5].automorphy_residual)
        self.assertAlmostEqual(sums[-1].value, theta_value(BallPoint(np.array([0.2, -0.1j])), self.spec, self.reps))
        self.assertEqual(sum(p.terms for p in sums), len(self.reps))

    def test_threads_agree(self):
        z = BallPoint(np.array([0.1, 0.3]))
        self.assertAlmostEqual(theta_value(z, self.spec, self.reps, threads=1),
                               theta_value(z, self.spec, self.reps, threads=4), places=12)

    def test_probe(self):
        points = torus_probe_points(self.spec, samples=3)
        rows = nonvanishing_probe(self.spec, self.reps, points, [1, 2])
        self.assertEqual(len(rows), 6)
        self.assertEqual([r.k for r in rows], [1, 1, 1, 2, 2, 2])
        self.assertTrue(all(r.abs_theta >= 0 for r in rows))


class TestExactConstants(unittest.TestCase):
    def test_alternating_sum(self):
        self.assertEqual(c1_sum(1, 1), Fraction(-1, 630))
        self.assertEqual(c1_sum(1, 2), Fraction(1, 12096))

    def test_residue(self):
        self.assertEqual(c1_residue(1, 1), Fraction(-1, 140))
        for k, l in ((1, 1), (1, 2), (2, 1), (2, 3)):
            self.assertEqual(c1_residue(k, l), c1_residue_leibniz(k, l))
            self.assertEqual(c1_residue(k, l), c1_closed_form(k, l))
        self.assertLess(residue_at(1, 1, -2.0), 0.0)
        with self.assertRaises(InvalidParameter):
            c1_sum(0, 1)

    def test_radial_integral(self):
        self.assertAlmostEqual(radial_integral(-1.0, 1, 1) * 140, 1.0, places=10)
        self.assertAlmostEqual(radial_integral(-2.0, 1, 1) * 2240, 1.0, places=10)
        self.assertAlmostEqual(radial_beta(-1.0, 1, 1), 1 / 140)
        self.assertAlmostEqual(radial_integral(-0.7, 2, 1) / -residue_at(2, 1, -0.7), 1.0, places=9)
        for bad in (1.0, 0.0, -1.0 + 0.5j):
            with self.assertRaises(InvalidParameter):
                radial_integral(bad, 1, 1)


class TestTorusIntegral(unittest.TestCase):
    def test_constant_variants(self):
        hyp = hyperbolic_data(normal_form(2.0))
        derived = constant_C(1, 1, hyp, ConstantMode.DERIVED)
        residue = constant_C(1, 1, hyp, ConstantMode.RESIDUE)
        self.assertAlmostEqual(residue / derived, 4.5)
        self.assertAlmostEqual(constant_C(1, 1, hyp, ConstantMode.BETA), 20.25j / math.pi)
        report = constant_report(1, 2, hyp, empirical=False)
        self.assertEqual(report["c1_sum"], Fraction(1, 12096))
        self.assertNotIn("C_empirical", report)

    def test_ratio_is_constant(self):
        spec = TorusSpec(1, 1, hyperbolic_data(normal_form(2.0)))
        first = empirical_ratio(spec, reference_point())
        z = BallPoint(np.array([-0.2, 0.35j]))
        second = empirical_ratio(spec, CirclePoint(z, complex(fiber_modulus(z.affine) * np.exp(0.8j))))
        self.assertLess(abs(first - second) / abs(first), 1e-3)
        beta = constant_C(1, 1, spec.hyp, ConstantMode.BETA)
        self.assertLess(abs(first - beta) / abs(beta), 1e-3)

    def test_fourier_selection(self):
        spec = TorusSpec(1, 1, hyperbolic_data(normal_form(2.0)))
        matched = torus_integral(spec, reference_point()).value
        reversed_mode = torus_integral(spec, reference_point(), mode_l=-1, check_convergence=False).value
        self.assertLess(abs(reversed_mode) / abs(matched), 1e-8)

    def test_rescaled_eigenvectors(self):
        hyp = hyperbolic_data(normal_form(2.0))
        rescaled = replace(hyp, X=2.0 * hyp.X, Y=hyp.Y / 2.0)
        self.assertAlmostEqual(rescaled.pairing, hyp.pairing)
        quad = QuadratureSpec(48, 48, tol=1e-5)
        before = constant_C(1, 1, hyp, ConstantMode.EMPIRICAL, quad)
        after = constant_C(1, 1, rescaled, ConstantMode.EMPIRICAL, quad)
        self.assertLess(abs(before - after) / abs(before), 1e-6)


if __name__ == '__main__':
    unittest.main()

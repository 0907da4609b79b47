import unittest

import numpy as np

from hyperball import InvariantRegistry
from hyperball.bundle_geometry import CirclePoint, TangentAtPoint, SignConvention, WeightedFunction, fiber_modulus, \
    bergman_kernel, kahler_form, d_theta, curvature_check, alpha_form, bundle_action, push_forward, petersson_inner, \
    gram_matrix
from hyperball.coherent import BasisIndex, CoherentState, basis_function, kernel_function
from hyperball.exceptions import FiberConstraintError, StepTooSmall, NonConvergent
from hyperball.helpers import Helper
from hyperball.hermitian_core import BallPoint, random_group_element, random_ball_point
from hyperball.types import QuadratureSpec


def bundle_tangent(rng, p):
    z = p.z.affine
    dz = rng.normal(size=2) + 1j * rng.normal(size=2)
    minus_q = 1.0 - np.sum(np.abs(z) ** 2)
    d_minus_q = -2.0 * np.real(np.sum(dz * np.conj(z)))
    return TangentAtPoint(p, dz, complex(p.zeta * (1.5 * d_minus_q / minus_q + 0.7j)))


class TestCircleBundle(unittest.TestCase):
    def test_fiber(self):
        origin = BallPoint(np.zeros(2))
        self.assertAlmostEqual(float(fiber_modulus(origin)), 1.0)
        CirclePoint(origin, 1j)
        with self.assertRaises(FiberConstraintError):
            CirclePoint(origin, 0.5)
        z = BallPoint(np.array([0.3, 0.4]))
        self.assertAlmostEqual(abs(CirclePoint.on_fiber(z, 1.0).zeta), 0.75 ** 1.5)

    def test_action_composes(self):
        rng = np.random.default_rng(5)
        p = CirclePoint.on_fiber(random_ball_point(rng, 2, 0.6), 0.3)
        g1, g2 = random_group_element(rng), random_group_element(rng)
        once = bundle_action(g1 @ g2, p)
        twice = bundle_action(g1, bundle_action(g2, p))
        self.assertTrue(np.allclose(once.z.affine, twice.z.affine))
        self.assertAlmostEqual(once.zeta, twice.zeta, places=10)

    def test_tangent_constraint(self):
        rng = np.random.default_rng(6)
        p = CirclePoint.on_fiber(random_ball_point(rng, 2, 0.6), 0.0)
        t = bundle_tangent(rng, p)
        self.assertTrue(t.is_tangent_to_bundle())
        self.assertTrue(push_forward(random_group_element(rng), t).is_tangent_to_bundle(1e-8))


class TestForms(unittest.TestCase):
    def test_kernel(self):
        z = np.array([0.3, 0.2j])
        self.assertAlmostEqual(bergman_kernel(np.zeros(2), z), 1.0)
        self.assertAlmostEqual(bergman_kernel(z, z), (1.0 - 0.13) ** -3)

    def test_kahler_at_centre(self):
        self.assertAlmostEqual(kahler_form(np.zeros(2), np.array([1.0, 0.0]), np.array([1j, 0.0])), -6.0)

    def test_curvature(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            z = random_ball_point(rng, 2, 0.7).affine
            u = rng.normal(size=2) + 1j * rng.normal(size=2)
            v = rng.normal(size=2) + 1j * rng.normal(size=2)
            u /= np.linalg.norm(u)
            v /= np.linalg.norm(v)
            self.assertLess(curvature_check(z, u, v), 1e-5)
            legendrian = d_theta(z, u, v, sign=SignConvention.LEGENDRIAN)
            self.assertLess(abs(legendrian - kahler_form(z, u, v)), 1e-5)
        with self.assertRaises(StepTooSmall):
            d_theta(np.zeros(2), np.array([1.0, 0.0]), np.array([0.0, 1.0]), step=1e-8)

    def test_curvature_invariant_at_suite_seed(self):
        entry = InvariantRegistry.getInstance().get_invariants()["curvature_of_theta"]
        self.assertEqual(entry["threshold"], 1e-5)
        self.assertLess(entry["method"](Helper.rng_for(7, "curvature_of_theta")), entry["threshold"])

    def test_alpha_invariance(self):
        rng = np.random.default_rng(8)
        for _ in range(30):
            g = random_group_element(rng, max_boost=1.0)
            t = bundle_tangent(rng, CirclePoint.on_fiber(random_ball_point(rng, 2, 0.7), rng.random()))
            self.assertLess(abs(alpha_form(push_forward(g, t)) - alpha_form(t)), 1e-9)

    def test_alpha_on_fiber_direction(self):
        p = CirclePoint.on_fiber(BallPoint(np.array([0.1, 0.2])), 0.0)
        self.assertAlmostEqual(alpha_form(TangentAtPoint(p, np.zeros(2), 1j * p.zeta)), -1.0)


class TestQuadrature(unittest.TestCase):
    def test_unit_norm(self):
        f = basis_function(BasisIndex(0, 0, 1))
        result = petersson_inner(f, f, 1, QuadratureSpec(16, 8))
        self.assertAlmostEqual(result.value, 1.0, places=10)

    def test_gram(self):
        functions = [basis_function(BasisIndex(1, 0, 1)), basis_function(BasisIndex(0, 1, 1))]
        gram = gram_matrix(functions, 1, QuadratureSpec(16, 8))
        self.assertTrue(np.allclose(gram, np.eye(2), atol=1e-10))

    def test_weighted_function(self):
        f = WeightedFunction(1, lambda z: z[..., 0] + 1.0, "shift")
        self.assertEqual(f(np.array([[0.5, 0.0]]))[0], 1.5)

    def test_non_convergent(self):
        cs = CoherentState(BallPoint(np.array([0.9, 0.0])), complex(0.19 ** 1.5), 1)
        psi = kernel_function(cs)
        with self.assertRaises(NonConvergent) as ctx:
            petersson_inner(psi, psi, 1, QuadratureSpec(4, 4, tol=1e-12))
        self.assertIn("est_error", ctx.exception.detail)


if __name__ == '__main__':
    unittest.main()

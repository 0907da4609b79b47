import math
import unittest
from fractions import Fraction

import numpy as np

from hyperball.bundle_geometry import CirclePoint
from hyperball.coherent import BasisIndex, CoherentState, KernelSign, basis_function, basis_F, coherent_eval, \
    kernel_series, kernel_double_series, reproducing_check, equivariance_check
from hyperball.exceptions import CoefficientOverflow, InvalidParameter, FiberConstraintError
from hyperball.hermitian_core import BallPoint, random_group_element, random_ball_point
from hyperball.types import QuadratureSpec


class TestBasis(unittest.TestCase):
    def test_coefficients(self):
        self.assertEqual(BasisIndex(0, 0, 1).coefficient_squared_exact(), 2)
        self.assertEqual(BasisIndex(1, 1, 1).coefficient_squared_exact(), 24)
        self.assertAlmostEqual(BasisIndex(0, 0, 1).coefficient(), math.sqrt(2) / (2 * math.pi))
        self.assertAlmostEqual(BasisIndex(2, 1, 2).coefficient() ** 2 * 4 * math.pi ** 2,
                               float(BasisIndex(2, 1, 2).coefficient_squared_exact()), places=6)
        with self.assertRaises(CoefficientOverflow):
            BasisIndex(100, 100, 1).coefficient()
        with self.assertRaises(InvalidParameter):
            BasisIndex(-1, 0, 1)

    def test_values(self):
        f = basis_function(BasisIndex(1, 2, 1))
        z = np.array([0.5, 0.2])
        self.assertAlmostEqual(f(z), BasisIndex(1, 2, 1).coefficient() * 0.5 * 0.04)
        p = CirclePoint.on_fiber(BallPoint(z), 0.3)
        self.assertAlmostEqual(basis_F(BasisIndex(1, 2, 1), p), f(z) * p.zeta)


class TestKernel(unittest.TestCase):
    def test_series(self):
        partial, closed = kernel_series(3, Fraction(1, 2), 200)
        self.assertEqual(closed, 96)
        self.assertLess(abs(closed - partial) / closed, 1e-12)
        partial, closed = kernel_double_series(1, Fraction(1, 10), Fraction(1, 5), 60)
        self.assertEqual(closed, Fraction(2) / Fraction(7, 10) ** 3)
        self.assertLess(abs(closed - partial) / closed, 1e-8)
        partial, closed = kernel_double_series(1, Fraction(1, 5), Fraction(1, 5), 60)
        self.assertEqual(closed, Fraction(250, 27))
        self.assertLess(abs(closed - partial) / closed, 1e-8)

    def test_reproducing_at_origin(self):
        residual = reproducing_check(BasisIndex(0, 0, 1), BallPoint(np.zeros(2)), 1.0, QuadratureSpec(32, 16))
        self.assertLess(residual, 1e-8)

    def test_reproducing(self):
        w = BallPoint(np.array([0.2, 0.1j]))
        eta = complex((1.0 - w.norm2()) ** 1.5 * np.exp(0.4j))
        self.assertLess(reproducing_check(BasisIndex(1, 1, 1), w, eta, QuadratureSpec(48, 32, tol=1e-5)), 1e-3)


class TestCoherentState(unittest.TestCase):
    def test_fiber(self):
        with self.assertRaises(FiberConstraintError):
            CoherentState(BallPoint(np.zeros(2)), 2.0, 1)
        with self.assertRaises(InvalidParameter):
            CoherentState(BallPoint(np.zeros(2)), 1.0, 0)
        self.assertEqual(CoherentState(BallPoint(np.zeros(2)), 1.0, 1, weight_doubling=True).q, 2)

    def test_sign_variants(self):
        cs = CoherentState(BallPoint(np.array([0.1, 0.2])), complex(0.95 ** 1.5), 1)
        p = CirclePoint.on_fiber(BallPoint(np.array([0.3, -0.1])), 0.2)
        derived, printed = coherent_eval(cs, p), coherent_eval(cs, p, KernelSign.PRINTED)
        self.assertAlmostEqual(printed / derived, -1.0)
        doubled = CoherentState(cs.w, cs.eta, 1, weight_doubling=True)
        self.assertAlmostEqual(coherent_eval(doubled, p, KernelSign.PRINTED) / coherent_eval(doubled, p), 1.0)

    def test_equivariance(self):
        rng = np.random.default_rng(31)
        for _ in range(10):
            g = random_group_element(rng, max_boost=0.8)
            cs = CoherentState.at(CirclePoint.on_fiber(random_ball_point(rng, 2, 0.5), rng.random()), 2)
            points = [CirclePoint.on_fiber(random_ball_point(rng, 2, 0.5), rng.random()) for _ in range(3)]
            self.assertLess(equivariance_check(g, cs, points), 1e-8)


if __name__ == '__main__':
    unittest.main()

import math
import unittest

import numpy as np

from hyperball.bs_torus import CylCoords, TorusSpec, ThetaLoop, RLoop, coords_to_ball, ball_to_coords, \
    gamma_in_coords, torus_point, lambda_point, sample_parameters, legendrian_residual, legendrian_report, \
    theta_line_integral, bs_integral, reduce_radius, half_form, half_form_invariance
from hyperball.exceptions import InvalidCoordinates, InvalidParameter
from hyperball.hermitian_core import random_group_element
from hyperball.spectral import hyperbolic_data, hyperbolic_element, normal_form


def normal_spec(k=1, l=1, lam=2.0):
    return TorusSpec(k, l, hyperbolic_data(normal_form(lam)))


class TestCoordinates(unittest.TestCase):
    def test_validation(self):
        for args in ((0.0, 1.0, 0.5, 0.0), (1.0, 0.0, 0.5, 0.0), (1.0, 1.0, 1.0, 0.0), (1.0, 1.0, 0.5, 7.0)):
            with self.assertRaises(InvalidCoordinates):
                CylCoords(*args)
        with self.assertRaises(InvalidParameter):
            TorusSpec(0, 1, hyperbolic_data(normal_form(2.0)))

    def test_inverse_maps(self):
        c = CylCoords(1.7, 1.1, 0.4, 2.5)
        back = ball_to_coords(coords_to_ball(c))
        for a, b in zip((c.r, c.phi, c.R, c.Theta), (back.r, back.phi, back.R, back.Theta)):
            self.assertAlmostEqual(a, b, places=12)

    def test_normal_form_in_coordinates(self):
        spec = normal_spec(lam=2.0)
        rng = np.random.default_rng(21)
        for _ in range(100):
            c = CylCoords(0.2 + 5 * rng.random(), 0.2 + 2.7 * rng.random(), 0.9 * rng.random(), 6.0 * rng.random())
            image = gamma_in_coords(spec, c)
            self.assertAlmostEqual(image.r / c.r, 4.0, places=10)
            self.assertAlmostEqual(image.R, c.R, places=10)
            self.assertAlmostEqual(image.phi, c.phi, places=10)

    def test_samples(self):
        spec = normal_spec(lam=3.0)
        r, Theta = sample_parameters(spec, 50)
        self.assertTrue(np.all((r >= 1.0) & (r < 9.0)))
        self.assertTrue(np.all((Theta >= 0.0) & (Theta < 2 * math.pi)))
        self.assertAlmostEqual(spec.R0, 0.5)

    def test_reduce_radius(self):
        spec = normal_spec(lam=2.0)
        r0, m = reduce_radius(spec, 20.0)
        self.assertAlmostEqual(r0, 1.25)
        self.assertEqual(m, 2)
        r0, m = reduce_radius(spec, 0.5)
        self.assertAlmostEqual(r0, 2.0)
        self.assertEqual(m, -1)
        with self.assertRaises(InvalidCoordinates):
            reduce_radius(spec, -1.0)


class TestLegendrian(unittest.TestCase):
    def test_normal_form_tori(self):
        for k, l in ((1, 1), (2, 3), (3, 1)):
            self.assertLess(legendrian_residual(normal_spec(k, l), samples=50), 1e-8)

    def test_conjugated_tori(self):
        rng = np.random.default_rng(22)
        hyp = hyperbolic_data(hyperbolic_element(2.5, random_group_element(rng, max_boost=0.8)))
        report = legendrian_report(TorusSpec(1, 2, hyp), samples=50)
        self.assertLess(report.residual, 1e-8)
        lambda_point(TorusSpec(1, 2, hyp), 1.5, 0.3)

    def test_perturbed_radius(self):
        spec = normal_spec()
        self.assertGreater(legendrian_residual(spec, samples=50, radius=0.9 * spec.R0), 1e-2)

    def test_torus_point_on_fiber(self):
        p = torus_point(normal_spec(), 2.0, 1.0)
        self.assertAlmostEqual(abs(p.zeta), (1.0 - np.sum(np.abs(p.z.affine) ** 2)) ** 1.5)
        with self.assertRaises(InvalidCoordinates):
            torus_point(normal_spec(), 0.0, 1.0)


class TestBohrSommerfeld(unittest.TestCase):
    def test_theta_loops(self):
        for l in (1, 2, 3):
            spec = normal_spec(1, l)
            for m in (1, 2):
                self.assertAlmostEqual(bs_integral(spec, ThetaLoop(m)), -3 * l * m, places=6)

    def test_theta_loops_on_lambda(self):
        rng = np.random.default_rng(23)
        spec = TorusSpec(1, 2, hyperbolic_data(hyperbolic_element(2.0, random_group_element(rng, max_boost=0.6))))
        self.assertAlmostEqual(bs_integral(spec, ThetaLoop(1), on_lambda=True), -6.0, places=6)

    def test_radial_loop(self):
        spec = normal_spec(1, 2)
        raw = theta_line_integral(spec, RLoop(0.4))
        self.assertLess(abs(raw.real), 1e-8)
        self.assertLess(abs(bs_integral(spec, RLoop(0.4))), 1e-8)

    def test_half_form(self):
        self.assertEqual(half_form(2.0, (1.0, 0.0), (0.0, 1.0)), -0.25j)
        self.assertLess(half_form_invariance(normal_spec()), 1e-6)


if __name__ == '__main__':
    unittest.main()

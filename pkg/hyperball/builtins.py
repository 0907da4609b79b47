import math
from fractions import Fraction

import numpy as np

from .bs_torus import TorusSpec, CylCoords, ThetaLoop, RLoop, gamma_in_coords, legendrian_residual, \
    bs_integral, half_form_invariance
from .bundle_geometry import CirclePoint, TangentAtPoint, push_forward, alpha_form, \
    curvature_check, loop_theta_integral, transported_loop, fiber_modulus, gram_matrix
from .coherent import BasisIndex, CoherentState, basis_function, reproducing_check, kernel_double_series, \
    equivariance_check
from .hermitian_core import herm_form, act_array, jacobian_det, random_group_element, random_ball_point
from .registry import InvariantRegistry
from .series import example_series, enumerate_group, coset_reps, theta_series, theta_value, q_l, \
    gamma0_invariance_residual, c1_residue, c1_residue_leibniz, c1_closed_form, c1_sum, radial_integral, residue_at, \
    torus_integral, empirical_ratio, constant_C, ConstantMode, group_lift_residual
from .spectral import hyperbolic_data, hyperbolic_element, normal_form, normal_form_residual
from .types import QuadratureSpec

instance = InvariantRegistry.getInstance()

SMALL_GRID = [(k, l) for k in (1, 2, 3) for l in (1, 2, 3)]


def _lift(z):
    return np.r_[z, 1.0]


def _bundle_tangent(rng, p: CirclePoint) -> TangentAtPoint:
    z = p.z.affine
    n = len(z)
    dz = rng.normal(size=n) + 1j * rng.normal(size=n)
    minus_q = 1.0 - np.sum(np.abs(z) ** 2)
    d_minus_q = -2.0 * np.real(np.sum(dz * np.conj(z)))
    dzeta = p.zeta * ((n + 1) / 2.0 * d_minus_q / minus_q + 1j * rng.normal())
    return TangentAtPoint(p, dz, complex(dzeta))


def _random_circle_point(rng, max_radius=0.8) -> CirclePoint:
    return CirclePoint.on_fiber(random_ball_point(rng, 2, max_radius), 2.0 * math.pi * rng.random())


# Group algebra

@instance.invariant("Jacobian cocycle", "Relative defect of det J(g1 g2, z) = det J(g1, g2 z) det J(g2, z).",
                    "hermitian_core", threshold=1e-10)
def jacobian_cocycle(rng):
    worst = 0.0
    for _ in range(1000):
        g1, g2 = random_group_element(rng), random_group_element(rng)
        z = random_ball_point(rng).affine
        lhs = jacobian_det(g1 @ g2, z)
        rhs = jacobian_det(g1, act_array(g2, z)) * jacobian_det(g2, z)
        worst = max(worst, abs(lhs - rhs) / abs(lhs))
    return worst


@instance.invariant("Form isometry", "Defect of <gz, gw> = <z, w> on lifts, relative to |<z, w>|.",
                    "hermitian_core", threshold=1e-10)
def form_isometry(rng):
    worst = 0.0
    for _ in range(1000):
        g = random_group_element(rng).matrix
        z, w = _lift(random_ball_point(rng).affine), _lift(random_ball_point(rng).affine)
        worst = max(worst, abs(herm_form(g @ z, g @ w) - herm_form(z, w)) / abs(herm_form(z, w)))
    return worst


@instance.invariant("Action preserves the ball", "Largest squared norm of images of random points.",
                    "hermitian_core", threshold=1.0)
def action_preserves_ball(rng):
    worst = 0.0
    for _ in range(1000):
        image = act_array(random_group_element(rng), random_ball_point(rng).affine)
        worst = max(worst, float(np.sum(np.abs(image) ** 2)))
    return worst


# Spectral

@instance.invariant("Normal form recovery", "Max entry of A^-1 g A - N(lambda) over conjugated normal forms.",
                    "spectral", threshold=1e-8)
def normal_form_recovery(rng):
    worst = 0.0
    for _ in range(20):
        lam = 1.5 + 2.5 * rng.random()
        g = hyperbolic_element(lam, random_group_element(rng))
        data = hyperbolic_data(g)
        worst = max(worst, normal_form_residual(data), abs(data.lam - lam) / lam)
    return worst


@instance.invariant("Normal form entries", "Defect of a^2 - b^2 = 1 for the normal form.", "spectral",
                    threshold=1e-14)
def normal_form_entries(rng):
    worst = 0.0
    for _ in range(20):
        m = normal_form(1.0 + 3.0 * rng.random()).matrix
        worst = max(worst, abs(m[1, 1] ** 2 - m[1, 2] ** 2 - 1.0))
    return worst


# Bundle geometry

@instance.invariant("Curvature of theta", "|d theta + Phi| by central differences at random points.",
                    "bundle_geometry", threshold=1e-5)
def curvature_of_theta(rng):
    worst = 0.0
    for _ in range(50):
        z = random_ball_point(rng, 2, 0.7).affine
        u = rng.normal(size=2) + 1j * rng.normal(size=2)
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        u /= np.linalg.norm(u)
        v /= np.linalg.norm(v)
        worst = max(worst, curvature_check(z, u, v))
    return worst


@instance.invariant("Connection form invariance", "|alpha(M_* t) - alpha(t)| over random tangent vectors to P.",
                    "bundle_geometry", threshold=1e-9)
def connection_form_invariance(rng):
    worst = 0.0
    for _ in range(200):
        g = random_group_element(rng, max_boost=1.0)
        t = _bundle_tangent(rng, _random_circle_point(rng, 0.7))
        worst = max(worst, abs(alpha_form(push_forward(g, t)) - alpha_form(t)))
    return worst


@instance.invariant("Loop integral of theta", "Change of a small closed-loop integral of theta under the group.",
                    "bundle_geometry", threshold=1e-8)
def loop_integral_invariance(rng):
    worst = 0.0
    for _ in range(20):
        center = random_ball_point(rng, 2, 0.5).affine
        direction = rng.normal(size=2) + 1j * rng.normal(size=2)
        direction *= 0.2 / np.linalg.norm(direction)

        def curve(t):
            return center + np.exp(2j * np.pi * t)[..., None] * direction

        def velocity(t):
            return 2j * np.pi * np.exp(2j * np.pi * t)[..., None] * direction

        g = random_group_element(rng, max_boost=1.0)
        image, image_velocity = transported_loop(g, curve, velocity)
        worst = max(worst, abs(loop_theta_integral(image, image_velocity) - loop_theta_integral(curve, velocity)))
    return worst


# Bohr-Sommerfeld tori

@instance.invariant("Cylinder coordinates under the normal form", "Drift of R and phi and of r'/r from lambda^2.",
                    "bs_torus", threshold=1e-12)
def cylinder_invariance(rng):
    spec = TorusSpec(1, 1, hyperbolic_data(normal_form(2.0)))
    worst = 0.0
    for _ in range(1000):
        c = CylCoords(0.1 + 9.9 * rng.random(), math.pi * (0.05 + 0.9 * rng.random()), 0.95 * rng.random(),
                      2.0 * math.pi * rng.random())
        image = gamma_in_coords(spec, c)
        worst = max(worst, abs(image.R - c.R), abs(image.phi - c.phi), abs(image.r / c.r / spec.lam ** 2 - 1.0))
    return worst


@instance.invariant("Legendrian tori", "Max |alpha| on tangent planes of T(l) and Lambda(l), (k,l) up to 3.",
                    "bs_torus", threshold=1e-8)
def legendrian_tori(rng):
    hyp = hyperbolic_data(hyperbolic_element(2.0, random_group_element(rng, max_boost=0.8)))
    return max(legendrian_residual(TorusSpec(k, l, hyp)) for k, l in SMALL_GRID)


@instance.invariant("Perturbed torus is not Legendrian", "Max |alpha| on the torus of radius 0.9 R_0.",
                    "bs_torus", threshold=1e-2, expect="above")
def perturbed_torus(rng):
    spec = TorusSpec(1, 1, hyperbolic_data(normal_form(2.0)))
    return legendrian_residual(spec, radius=0.9 * spec.R0)


@instance.invariant("Bohr-Sommerfeld quantization", "|BS(ThetaLoop(m)) + 3 l m| for l up to 3 and m up to 2.",
                    "bs_torus", threshold=1e-6)
def bs_quantization(rng):
    hyp = hyperbolic_data(normal_form(2.0))
    return max(abs(bs_integral(TorusSpec(1, l, hyp), ThetaLoop(m)) + 3 * l * m) for l in (1, 2, 3) for m in (1, 2))


@instance.invariant("Radial loop", "BS value of the loop closed by the normal form.", "bs_torus", threshold=1e-8)
def radial_loop(rng):
    hyp = hyperbolic_data(normal_form(2.0))
    return max(abs(bs_integral(TorusSpec(k, l, hyp), RLoop(2.0 * math.pi * rng.random()))) for k, l in SMALL_GRID)


@instance.invariant("Half-form invariance", "Change of (i/2) dTheta dr / r under the normal form.", "bs_torus",
                    threshold=1e-6)
def half_form_invariant(rng):
    return half_form_invariance(TorusSpec(1, 1, hyperbolic_data(normal_form(2.0))))


# Coherent states

@instance.invariant("Orthonormal basis", "Max entry of Gram(F_{l,m,1}) - I for l, m <= 2.", "coherent",
                    threshold=1e-4, slow=True)
def orthonormal_basis(rng):
    functions = [basis_function(BasisIndex(l, m, 1)) for l in range(3) for m in range(3)]
    gram = gram_matrix(functions, 1, QuadratureSpec(128, 64))
    return float(np.max(np.abs(gram - np.eye(len(functions)))))


@instance.invariant("Reproducing property", "|F(w) eta^k - (F, Psi_w)| for two basis functions and two points.",
                    "coherent", threshold=1e-3, slow=True)
def reproducing_property(rng):
    worst = 0.0
    for idx in (BasisIndex(0, 0, 1), BasisIndex(1, 1, 1)):
        for _ in range(2):
            p = _random_circle_point(rng, 0.4)
            worst = max(worst, reproducing_check(idx, p.z, p.zeta, QuadratureSpec(48, 32, tol=1e-5)))
    return worst


@instance.invariant("Kernel series", "Relative error of the double series against (3k-1)!/(1-x-y)^{3k}.",
                    "coherent", threshold=1e-8)
def kernel_series_identity(rng):
    partial, closed = kernel_double_series(1, Fraction(1, 5), Fraction(1, 5), 60)
    return float(abs(closed - partial) / closed)


@instance.invariant("Coherent state equivariance", "Max |Psi_{(w,eta)}(g^-1 p) - Psi_{g(w,eta)}(p)|.",
                    "coherent", threshold=1e-9)
def coherent_equivariance(rng):
    worst = 0.0
    for _ in range(50):
        g = random_group_element(rng, max_boost=0.8)
        p = _random_circle_point(rng, 0.5)
        cs = CoherentState(p.z, p.zeta, 1 + int(rng.integers(2)))
        points = [_random_circle_point(rng, 0.5) for _ in range(3)]
        worst = max(worst, equivariance_check(g, cs, points))
    return worst


# Relative Poincare series

@instance.invariant("Seed invariance", "|q_l(gamma_0 z) det J^{2k} - q_l(z)| at random points.", "series",
                    threshold=1e-11)
def seed_invariance(rng):
    spec = example_series(1, 1, "cyclic", lam=2.0, max_word_length=1)
    return max(gamma0_invariance_residual(spec, random_ball_point(rng, 2, 0.7)) for _ in range(100))


@instance.invariant("Degenerate lattice", "|Theta - q_l| when the lattice is the cyclic subgroup.", "series",
                    threshold=1e-12)
def degenerate_lattice(rng):
    spec = example_series(1, 1, "cyclic", max_word_length=4)
    reps = coset_reps(enumerate_group(spec.lattice), spec.gamma0)
    z = random_ball_point(rng, 2, 0.7)
    return abs(theta_value(z, spec, reps) - q_l(z, spec))


@instance.invariant("Coset class function", "Change of the partial sum when representatives are moved by gamma_0.",
                    "series", threshold=1e-10)
def coset_class_function(rng):
    spec = example_series(1, 1, max_word_length=3)
    reps = coset_reps(enumerate_group(spec.lattice), spec.gamma0)
    z = random_ball_point(rng, 2, 0.5)
    moved = [r.__class__(spec.gamma0.power(int(rng.integers(-2, 3))) @ r.element, r.word, r.shell, r.power)
             for r in reps]
    value = theta_value(z, spec, reps)
    return abs(theta_value(z, spec, moved) - value) / abs(value)


@instance.invariant("Cauchy gaps decrease", "Cauchy gaps of the two-generator example decrease from shell 2 to 5.",
                    "series", expect="true")
def cauchy_gaps_decrease(rng):
    spec = example_series(1, 1)
    reps = coset_reps(enumerate_group(spec.lattice), spec.gamma0)
    gaps = [p.cauchy_gap for p in theta_series(random_ball_point(rng, 2, 0.5), spec, reps)[2:6]]
    return all(b < a for a, b in zip(gaps, gaps[1:]))


@instance.invariant("Automorphy improves", "Automorphy residual at shell 2 over the residual at shell 5.", "series",
                    threshold=10.0, expect="above")
def automorphy_improves(rng):
    spec = example_series(1, 1)
    reps = coset_reps(enumerate_group(spec.lattice), spec.gamma0)
    sums = theta_series(random_ball_point(rng, 2, 0.5), spec, reps)
    return sums[2].automorphy_residual / max(sums[5].automorphy_residual, 1e-300)


@instance.invariant("Residue closed form", "c1_residue equals the Leibniz sum and (-1)^p (p!)^2 / N! exactly.",
                    "series", expect="true")
def residue_closed_form(rng):
    return all(c1_residue(k, l) == c1_residue_leibniz(k, l) == c1_closed_form(k, l) for k, l in SMALL_GRID)


@instance.invariant("Radial integral", "Relative gap between the radial integral and minus the residue.", "series",
                    threshold=1e-10)
def radial_integral_residue(rng):
    worst = 0.0
    for k, l in ((1, 1), (1, 2), (2, 1)):
        for a in (-1.0, -2.0, -0.5 - rng.random()):
            expected = -residue_at(k, l, a)
            worst = max(worst, abs(radial_integral(a, k, l) - expected) / expected)
    return worst


@instance.invariant("Printed alternating sum", "c1_sum(1, 1) as printed, reported next to the residue.", "series",
                    expect="true")
def printed_alternating_sum(rng):
    return c1_sum(1, 1) == Fraction(-1, 630) and c1_residue(1, 1) == Fraction(-1, 140)


def _torus_points(rng, count):
    points = []
    while len(points) < count:
        z = random_ball_point(rng, 2, 0.5)
        if abs(z.affine[0]) > 0.1:
            points.append(CirclePoint(z, complex(fiber_modulus(z.affine) * np.exp(2j * math.pi * rng.random()))))
    return points


@instance.invariant("Torus integral ratio", "Relative spread of torus_integral / (q_l zeta^{2k}) over 5 points.",
                    "series", threshold=1e-3)
def torus_integral_ratio(rng):
    spec = TorusSpec(1, 1, hyperbolic_data(normal_form(2.0)))
    ratios = np.array([empirical_ratio(spec, p) for p in _torus_points(rng, 5)])
    return float(np.max(np.abs(ratios - ratios.mean())) / np.abs(ratios.mean()))


@instance.invariant("Closed-form constant", "Relative gap between the quadrature constant and the Beta closed form.",
                    "series", threshold=1e-3)
def closed_form_constant(rng):
    hyp = hyperbolic_data(hyperbolic_element(2.0, random_group_element(rng, max_boost=0.5)))
    beta = constant_C(1, 1, hyp, ConstantMode.BETA)
    empirical = constant_C(1, 1, hyp, ConstantMode.EMPIRICAL)
    return abs(empirical - beta) / abs(beta)


@instance.invariant("Fourier selection", "Torus integral with the fiber mode reversed, relative to the matched one.",
                    "series", threshold=1e-8)
def fourier_selection(rng):
    spec = TorusSpec(1, 1, hyperbolic_data(normal_form(2.0)))
    p = _torus_points(rng, 1)[0]
    matched = torus_integral(spec, p).value
    reversed_mode = torus_integral(spec, p, mode_l=-spec.l, check_convergence=False).value
    return abs(reversed_mode) / abs(matched)


@instance.invariant("Group lift", "Lattice defect of the lifted series at 2 shells over the defect at 5 shells.",
                    "series", threshold=1.0, expect="above")
def group_lift_invariance(rng):
    spec = example_series(1, 1)
    reps = coset_reps(enumerate_group(spec.lattice), spec.gamma0)
    short = [r for r in reps if r.shell <= 2]
    g = random_group_element(rng, max_boost=0.8)
    defects = [max(group_lift_residual(spec, subset, g, gamma) for gamma in spec.lattice.generators)
               for subset in (short, reps)]
    return defects[0] / max(defects[1], 1e-300)

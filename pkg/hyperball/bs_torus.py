"""
Cylinder coordinates adapted to the normal form and the Bohr-Sommerfeld tori.

``w_2 = (r e^{i phi} - i) / (r e^{i phi} + i)`` and ``w_1 = sqrt(1 - |w_2|^2) R e^{i Theta}``. The normal form with
parameter ``lambda`` maps ``r`` to ``lambda^2 r`` and keeps ``phi`` and ``R``. On ``phi = pi/2`` the torus ``T(l)`` is
``R = R_0 = sqrt(l / (3k + l))`` with fiber coordinate ``(-<w,w>)^{3/2} e^{i psi}``, ``psi = -(l/k) Theta``; its image
under the normalizer ``A`` is ``Lambda(l)``.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .bundle_geometry import CirclePoint, TangentAtPoint, SignConvention, bundle_action, push_forward, \
    alpha_form, theta_values, fiber_modulus
from .exceptions import InvalidCoordinates, CurveNotClosed, InvalidParameter
from .hermitian_core import BallPoint, act_array, jacobian
from .spectral import HyperbolicData, normal_form

logger = logging.getLogger(__name__)

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class CylCoords:
    r: float
    phi: float
    R: float
    Theta: float

    def __post_init__(self):
        if not self.r > 0:
            raise InvalidCoordinates(f"r must be positive, got {self.r}.")
        if not 0.0 < self.phi < math.pi:
            raise InvalidCoordinates(f"phi must lie in (0, pi), got {self.phi}.")
        if not 0.0 <= self.R < 1.0:
            raise InvalidCoordinates(f"R must lie in [0, 1), got {self.R}.")
        if not 0.0 <= self.Theta < 2.0 * math.pi:
            raise InvalidCoordinates(f"Theta must lie in [0, 2 pi), got {self.Theta}.")


@dataclass(frozen=True, eq=False)
class TorusSpec:
    k: int
    l: int
    hyp: HyperbolicData

    def __post_init__(self):
        if int(self.k) < 1 or int(self.l) < 1:
            raise InvalidParameter("k and l must be positive integers.")

    @property
    def R0(self) -> float:
        return math.sqrt(self.l / (3.0 * self.k + self.l))

    @property
    def phi0(self) -> float:
        return math.pi / 2.0

    @property
    def slope(self) -> float:
        return -self.l / self.k

    @property
    def lam(self) -> float:
        return self.hyp.lam

    @property
    def gamma(self):
        return normal_form(self.hyp.lam)


@dataclass(frozen=True)
class ThetaLoop:
    m: int
    r: float = 1.0


@dataclass(frozen=True)
class RLoop:
    Theta: float = 0.0


def coords_to_ball_array(r, phi, R, Theta) -> np.ndarray:
    e = np.asarray(r) * np.exp(1j * np.asarray(phi))
    w2 = (e - 1j) / (e + 1j)
    w1 = np.sqrt(1.0 - np.abs(w2) ** 2) * np.asarray(R) * np.exp(1j * np.asarray(Theta))
    return np.stack(np.broadcast_arrays(w1, w2), axis=-1)


def ball_to_coords_array(w: np.ndarray):
    w = np.asarray(w, dtype=complex)
    w1, w2 = w[..., 0], w[..., 1]
    e = 1j * (1.0 + w2) / (1.0 - w2)
    R = np.abs(w1) / np.sqrt(1.0 - np.abs(w2) ** 2)
    Theta = np.mod(np.angle(w1), 2.0 * np.pi)
    return np.abs(e), np.angle(e), R, Theta


def coords_to_ball(c: CylCoords) -> BallPoint:
    return BallPoint(coords_to_ball_array(c.r, c.phi, c.R, c.Theta))


def ball_to_coords(w: BallPoint) -> CylCoords:
    if abs(1.0 - w.affine[1]) < 1e-15:
        raise InvalidCoordinates("w_2 = 1 has no cylinder coordinates.")
    r, phi, R, Theta = ball_to_coords_array(w.affine)
    Theta = float(Theta) % (2.0 * math.pi)
    return CylCoords(float(r), float(phi), float(R), 0.0 if Theta >= 2.0 * math.pi else Theta)


def gamma_in_coords(spec: TorusSpec, c: CylCoords) -> CylCoords:
    """
    Action of the normal form in cylinder coordinates, computed through the ball.
    """
    return ball_to_coords(BallPoint(act_array(spec.gamma, coords_to_ball(c).affine)))


def _radius(spec: TorusSpec, radius: Optional[float]) -> float:
    return spec.R0 if radius is None else float(radius)


def torus_arrays(spec: TorusSpec, r, Theta, radius: Optional[float] = None):
    """
    Base points of shape (..., 2) and fiber coordinates of ``T(l)`` at parameters ``(r, Theta)``.
    """
    w = coords_to_ball_array(r, spec.phi0, _radius(spec, radius), Theta)
    zeta = fiber_modulus(w) * np.exp(1j * spec.slope * np.asarray(Theta))
    return w, zeta


def torus_tangent_arrays(spec: TorusSpec, r, Theta, radius: Optional[float] = None):
    """
    Analytic derivatives of the parametrization: ``((dw/dr, dzeta/dr), (dw/dTheta, dzeta/dTheta))``.
    """
    R = _radius(spec, radius)
    r = np.asarray(r, dtype=float)
    Theta = np.asarray(Theta, dtype=float)
    w, zeta = torus_arrays(spec, r, Theta, R)
    s = 2.0 * np.sqrt(r) / (r + 1.0)
    ds = (1.0 - r) / (np.sqrt(r) * (r + 1.0) ** 2)
    dw_r = np.stack(np.broadcast_arrays(ds * R * np.exp(1j * Theta), 2.0 / (r + 1.0) ** 2 + 0j), axis=-1)
    dzeta_r = zeta * 3.0 * ds / s
    dw_theta = np.stack(np.broadcast_arrays(1j * w[..., 0], np.zeros_like(w[..., 1])), axis=-1)
    dzeta_theta = zeta * 1j * spec.slope
    return (dw_r, dzeta_r), (dw_theta, dzeta_theta)


def torus_point(spec: TorusSpec, r: float, Theta: float, radius: Optional[float] = None) -> CirclePoint:
    if not r > 0:
        raise InvalidCoordinates(f"r must be positive, got {r}.")
    w, zeta = torus_arrays(spec, r, Theta, radius)
    return CirclePoint(BallPoint(w), complex(zeta))


def lambda_point(spec: TorusSpec, r: float, Theta: float, radius: Optional[float] = None) -> CirclePoint:
    return bundle_action(spec.hyp.A, torus_point(spec, r, Theta, radius))


def sample_parameters(spec: TorusSpec, samples: int):
    """
    Deterministic samples over one fundamental domain: ``r = lambda^{2i/N}`` and golden-ratio angles.
    """
    i = np.arange(samples)
    r = np.abs(spec.lam) ** (2.0 * i / samples)
    Theta = 2.0 * np.pi * np.mod(i * GOLDEN, 1.0)
    return r, Theta


@dataclass(frozen=True)
class LegendrianReport:
    torus: float
    lambda_: float

    @property
    def residual(self) -> float:
        return max(self.torus, self.lambda_)

    @property
    def transport_gap(self) -> float:
        return abs(self.torus - self.lambda_)


def legendrian_report(spec: TorusSpec, samples: int = 200, radius: Optional[float] = None,
                      sign: SignConvention = SignConvention.LEGENDRIAN) -> LegendrianReport:
    r, Theta = sample_parameters(spec, samples)
    w, zeta = torus_arrays(spec, r, Theta, radius)
    tangents = torus_tangent_arrays(spec, r, Theta, radius)
    torus = 0.0
    for dw, dzeta in tangents:
        alpha = theta_values(w, dw, sign) + 1j * dzeta / zeta
        torus = max(torus, float(np.max(np.abs(alpha))))
    transported = 0.0
    a = spec.hyp.A
    for i in range(samples):
        base = CirclePoint(BallPoint(w[i]), complex(zeta[i]))
        for dw, dzeta in tangents:
            image = push_forward(a, TangentAtPoint(base, dw[i], complex(dzeta[i])))
            transported = max(transported, abs(alpha_form(image, sign)))
    return LegendrianReport(torus, transported)


def legendrian_residual(spec: TorusSpec, samples: int = 200, radius: Optional[float] = None) -> float:
    """
    Max of ``|alpha|`` on the tangent planes of ``T(l)`` and of ``Lambda(l)``.
    """
    return legendrian_report(spec, samples, radius).residual


def _gauss(a: float, b: float, nodes: int):
    x, w = np.polynomial.legendre.leggauss(nodes)
    return (b - a) / 2.0 * x + (a + b) / 2.0, (b - a) / 2.0 * w


def _theta_on_path(spec: TorusSpec, r, Theta, dw, on_lambda: bool, sign: SignConvention):
    w, _ = torus_arrays(spec, r, Theta)
    if on_lambda:
        a = spec.hyp.A
        dw = np.einsum("...ij,...j->...i", jacobian(a, w), dw)
        w = act_array(a, w)
    return theta_values(w, dw, sign)


def rloop_endpoints(spec: TorusSpec, loop: RLoop, tol: float = 1e-9):
    """
    ``(log r, Theta)`` of the start and of its image under the normal form; the image must be on the same torus.
    """
    start = CylCoords(1.0, spec.phi0, spec.R0, loop.Theta % (2.0 * math.pi))
    end = gamma_in_coords(spec, start)
    if abs(end.phi - spec.phi0) > tol or abs(end.R - spec.R0) > tol:
        raise CurveNotClosed("Image of the loop start is off the torus.")
    shift = (end.Theta - start.Theta + math.pi) % (2.0 * math.pi) - math.pi
    return (0.0, start.Theta), (math.log(end.r), start.Theta + shift)


def theta_line_integral(spec: TorusSpec, curve: Union[ThetaLoop, RLoop], nodes: int = 2048,
                        on_lambda: bool = False, sign: SignConvention = SignConvention.LEGENDRIAN) -> complex:
    """
    Raw complex line integral of ``theta`` along the projection of a loop on ``T(l)`` or ``Lambda(l)``.
    """
    if isinstance(curve, ThetaLoop):
        if not curve.r > 0:
            raise InvalidCoordinates("ThetaLoop radius must be positive.")
        Theta, weights = _gauss(0.0, 2.0 * math.pi * curve.m, nodes)
        r = np.full_like(Theta, curve.r)
        _, (dw, _) = torus_tangent_arrays(spec, r, Theta)
        values = _theta_on_path(spec, r, Theta, dw, on_lambda, sign)
        return complex(np.sum(weights * values))
    if isinstance(curve, RLoop):
        (x0, t0), (x1, t1) = rloop_endpoints(spec, curve)
        tau, weights = _gauss(0.0, 1.0, nodes)
        r = np.exp(x0 + tau * (x1 - x0))
        Theta = t0 + tau * (t1 - t0)
        (dw_r, _), (dw_theta, _) = torus_tangent_arrays(spec, r, Theta)
        dw = dw_r * (r * (x1 - x0))[:, None] + dw_theta * (t1 - t0)
        values = _theta_on_path(spec, r, Theta, dw, on_lambda, sign)
        return complex(np.sum(weights * values))
    raise InvalidParameter(f"Unknown curve {curve}.")


def bs_integral(spec: TorusSpec, curve: Union[ThetaLoop, RLoop], nodes: int = 2048, on_lambda: bool = False) -> float:
    """
    ``(3k / 2 pi) Re(integral of theta)``; ``-3 l m`` for ``ThetaLoop(m)``.
    """
    raw = theta_line_integral(spec, curve, nodes, on_lambda)
    return float((3.0 * spec.k / (2.0 * math.pi) * raw).real)


def reduce_radius(spec: TorusSpec, r: float):
    """
    ``r = lambda^{2m} r_0`` with ``r_0`` in ``[1, lambda^2)``.
    """
    if not r > 0:
        raise InvalidCoordinates(f"r must be positive, got {r}.")
    period = 2.0 * math.log(abs(spec.lam))
    m = math.floor(math.log(r) / period)
    r0 = r / math.exp(m * period)
    if r0 >= math.exp(period):
        m, r0 = m + 1, r0 / math.exp(period)
    elif r0 < 1.0:
        m, r0 = m - 1, r0 * math.exp(period)
    return r0, m


def half_form(r, u, v) -> complex:
    """
    ``nu = (i/2) dTheta ^ dr / r`` on tangent vectors ``u, v`` given as ``(dr, dTheta)``.
    """
    return 0.5j * (u[1] * v[0] - v[1] * u[0]) / r


def half_form_invariance(spec: TorusSpec, samples: int = 20, step: float = 1e-6) -> float:
    """
    Max of ``|nu(gamma_* u, gamma_* v) - nu(u, v)|`` for the coordinate vectors, by central differences.
    """
    r_values, angles = sample_parameters(spec, samples)
    worst = 0.0
    for r, Theta in zip(r_values, angles):
        Theta = min(max(Theta, 10 * step), 2.0 * math.pi - 10 * step)

        def image(dr, dtheta):
            c = gamma_in_coords(spec, CylCoords(r + dr, spec.phi0, spec.R0, Theta + dtheta))
            return c.r, c.Theta

        columns = []
        for dr, dtheta in ((step * r, 0.0), (0.0, step)):
            plus, minus = image(dr, dtheta), image(-dr, -dtheta)
            d_theta = (plus[1] - minus[1] + math.pi) % (2.0 * math.pi) - math.pi
            columns.append(((plus[0] - minus[0]) / 2.0, d_theta / 2.0))
        image_r = image(0.0, 0.0)[0]
        u, v = (step * r, 0.0), (0.0, step)
        worst = max(worst, abs(half_form(image_r, columns[0], columns[1]) - half_form(r, u, v)) / (step ** 2))
    return worst

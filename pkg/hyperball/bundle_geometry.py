"""
Differential forms, the circle bundle and inner products on the ball.

Points of the circle bundle ``P`` are pairs ``(z, zeta)`` with ``|zeta| = (-<z,z>)^((n+1)/2)``. The potential form is
``theta = sigma (n+1) i <dz, z> / <z, z>`` where ``sigma = +1`` follows the definition ``theta = i d' ln (-<z,z>)^(n+1)``
and ``sigma = -1`` is the convention under which ``alpha = theta + i dzeta/zeta`` is invariant under the bundle action
and vanishes on the Bohr-Sommerfeld tori.

Measure on the ball: with ``z_j = x_j + i y_j`` one has ``dz_j ^ dzbar_j = -2i dx_j ^ dy_j``, hence
``i^2 dz_1 ^ dzbar_1 ^ dz_2 ^ dzbar_2 = 4 dx_1 dy_1 dx_2 dy_2``.
"""
import logging
from dataclasses import dataclass
from enum import Enum, unique
from typing import Callable, Optional, Union

import numpy as np

from .exceptions import BranchCut, FiberConstraintError, StepTooSmall, NonConvergent, DimensionMismatch
from .helpers import Helper
from .hermitian_core import BallPoint, GroupElement, herm_form, act_array, jacobian, jacobian_det, denominator
from .registry import EPS_FIBER
from .types import QuadratureSpec, QuadratureResult

logger = logging.getLogger(__name__)


@unique
class SignConvention(Enum):
    DEFINITION = 1
    LEGENDRIAN = -1


def _affine(value) -> np.ndarray:
    if isinstance(value, BallPoint):
        return value.affine
    return np.asarray(value, dtype=complex)


def _lift(z: np.ndarray) -> np.ndarray:
    return np.concatenate([z, np.ones(z.shape[:-1] + (1,), dtype=complex)], axis=-1)


def _tangent_lift(dz: np.ndarray) -> np.ndarray:
    return np.concatenate([dz, np.zeros(dz.shape[:-1] + (1,), dtype=complex)], axis=-1)


def minus_form(z, w=None):
    """
    ``-<z, w>`` on lifts of affine points (``w = z`` when omitted).
    """
    z = _affine(z)
    w = z if w is None else _affine(w)
    return -herm_form(_lift(z), _lift(w))


def fiber_modulus(z) -> np.ndarray:
    z = _affine(z)
    return minus_form(z).real ** ((z.shape[-1] + 1) / 2.0)


@dataclass(frozen=True, eq=False)
class CirclePoint:
    z: BallPoint
    zeta: complex

    def __post_init__(self):
        expected = float(fiber_modulus(self.z.affine))
        if abs(abs(self.zeta) - expected) >= EPS_FIBER * max(1.0, expected):
            raise FiberConstraintError(f"|zeta| = {abs(self.zeta)} but the fiber has radius {expected}.")

    @classmethod
    def on_fiber(cls, z: BallPoint, phase: float = 0.0) -> "CirclePoint":
        return CirclePoint(z, complex(fiber_modulus(z.affine) * np.exp(1j * phase)))

    @property
    def n(self):
        return self.z.n


@dataclass(frozen=True, eq=False)
class TangentAtPoint:
    base: Union[BallPoint, CirclePoint]
    dz: np.ndarray
    dzeta: complex = 0.0

    def __post_init__(self):
        dz = np.asarray(self.dz, dtype=complex)
        point = self.base.z if isinstance(self.base, CirclePoint) else self.base
        if dz.shape != point.affine.shape:
            raise DimensionMismatch("Tangent vector and base point dimensions differ.")
        object.__setattr__(self, "dz", dz)

    @property
    def point(self) -> BallPoint:
        return self.base.z if isinstance(self.base, CirclePoint) else self.base

    def fiber_constraint_residual(self) -> float:
        """
        Defect of the linearized fiber constraint ``2 Re(zetabar dzeta) = (n+1) (-Q)^n d(-Q)``.
        """
        if not isinstance(self.base, CirclePoint):
            return 0.0
        z = self.point.affine
        n = len(z)
        minus_q = float(minus_form(z).real)
        d_minus_q = -2.0 * float(np.real(np.sum(self.dz * np.conj(z))))
        lhs = 2.0 * float(np.real(np.conj(self.base.zeta) * self.dzeta))
        return abs(lhs - (n + 1) * minus_q ** n * d_minus_q)

    def is_tangent_to_bundle(self, tol: float = 1e-9) -> bool:
        return self.fiber_constraint_residual() <= tol


@dataclass(frozen=True)
class WeightedFunction:
    """
    Holomorphic function on the ball carrying weight ``(n+1)k``. ``func`` maps arrays of shape (..., n) to (...).
    """
    k: int
    func: Callable
    name: str = ""

    def __call__(self, z) -> np.ndarray:
        return self.func(_affine(z))


def bergman_kernel(z, w):
    """
    ``K(z, w) = (-<z, w>)^{-(n+1)}``.

    :raises BranchCut: when ``Re(-<z, w>) <= 0``.
    """
    z = _affine(z)
    w = _affine(w)
    base = minus_form(z, w)
    if np.any(np.real(base) <= 0):
        raise BranchCut("-<z,w> left the right half plane.")
    return base ** (-(z.shape[-1] + 1))


def theta_values(z, dz, sign: SignConvention = SignConvention.LEGENDRIAN):
    """
    Vectorized ``theta(dz)`` at affine points ``z``.
    """
    z = _affine(z)
    dz = np.asarray(dz, dtype=complex)
    n = z.shape[-1]
    return sign.value * (n + 1) * 1j * herm_form(_tangent_lift(dz), _lift(z)) / herm_form(_lift(z), _lift(z))


def theta_form(at: TangentAtPoint, sign: SignConvention = SignConvention.LEGENDRIAN) -> complex:
    return complex(theta_values(at.point.affine, at.dz, sign))


def alpha_form(at: TangentAtPoint, sign: SignConvention = SignConvention.LEGENDRIAN) -> complex:
    """
    Connection form ``theta + i dzeta / zeta`` on a tangent vector to ``P``.
    """
    if not isinstance(at.base, CirclePoint):
        raise DimensionMismatch("alpha is evaluated on tangent vectors to the circle bundle.")
    return theta_form(at, sign) + 1j * at.dzeta / at.base.zeta


def bundle_action(m: GroupElement, p: CirclePoint) -> CirclePoint:
    """
    ``(z, zeta) -> (Mz, zeta det J(M, z))``.
    """
    image = BallPoint(act_array(m, p.z.affine))
    zeta = complex(p.zeta * jacobian_det(m, p.z.affine))
    return CirclePoint(image, zeta)


def push_forward(m: GroupElement, t: TangentAtPoint) -> TangentAtPoint:
    """
    Differential of the bundle action.
    """
    z = t.point.affine
    n = len(z)
    dz = jacobian(m, z) @ t.dz
    if not isinstance(t.base, CirclePoint):
        return TangentAtPoint(BallPoint(act_array(m, z)), dz)
    den = denominator(m, z)
    c = m.matrix[-1, :-1]
    ddet = -(n + 1) * den ** (-(n + 2)) * np.dot(c, t.dz)
    dzeta = t.dzeta * jacobian_det(m, z) + t.base.zeta * ddet
    return TangentAtPoint(bundle_action(m, t.base), dz, complex(dzeta))


def kahler_form(z, u, v, kappa: Optional[float] = None) -> complex:
    """
    ``Phi_kappa(u, v)`` for real tangent vectors given by their complex components ``u, v``.

    Wedges follow ``(a ^ b)(u, v) = a(u) b(v) - a(v) b(u)``; at the centre
    ``Phi_kappa(d/dx_1, d/dy_1) = -4 kappa``.
    """
    z = _affine(z)
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    n = len(z)
    kappa = (n + 1) / 2.0 if kappa is None else kappa
    q = herm_form(_lift(z), _lift(z))
    dzdzbar = np.sum(u * np.conj(v) - v * np.conj(u))
    dz_z_u, dz_z_v = np.dot(u, np.conj(z)), np.dot(v, np.conj(z))
    z_dz_u, z_dz_v = np.dot(z, np.conj(u)), np.dot(z, np.conj(v))
    wedge = dz_z_u * z_dz_v - dz_z_v * z_dz_u
    return complex(2.0 * kappa * 1j / q ** 2 * (q * dzdzbar - wedge))


def d_theta(z, u, v, step: float = 1e-4, sign: SignConvention = SignConvention.LEGENDRIAN) -> complex:
    """
    ``d theta(u, v)`` by central differences; second order in ``step``.
    """
    if step < 1e-7:
        raise StepTooSmall(f"Step {step} is below the cancellation guard 1e-7.")
    z = _affine(z)
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    du_theta_v = (theta_values(z + step * u, v, sign) - theta_values(z - step * u, v, sign)) / (2 * step)
    dv_theta_u = (theta_values(z + step * v, u, sign) - theta_values(z - step * v, u, sign)) / (2 * step)
    return complex(du_theta_v - dv_theta_u)


def curvature_check(z, u, v, step: float = 1e-4, sign: SignConvention = SignConvention.DEFINITION) -> float:
    """
    ``|d theta(u, v) + sigma Phi_{(n+1)/2}(u, v)|``; zero when ``d theta = -Phi`` in the definition convention.
    """
    return abs(d_theta(z, u, v, step, sign) + sign.value * kahler_form(z, u, v))


def loop_theta_integral(curve: Callable, velocity: Callable, nodes: int = 512,
                        sign: SignConvention = SignConvention.LEGENDRIAN) -> complex:
    """
    ``closed-loop integral of theta`` for a curve ``t -> curve(t)`` periodic on [0, 1]; trapezoid rule.
    """
    t = np.arange(nodes) / nodes
    values = theta_values(curve(t), velocity(t), sign)
    return complex(Helper.pairwise_sum(list(values)) / nodes)


def transported_loop(m: GroupElement, curve: Callable, velocity: Callable):
    """
    Image curve ``M C`` and its velocity.
    """

    def image(t):
        return act_array(m, curve(t))

    def image_velocity(t):
        return np.einsum("...ij,...j->...i", jacobian(m, curve(t)), velocity(t))

    return image, image_velocity


@dataclass(frozen=True)
class BallTile:
    """
    Nodes of one radial slice ``u = s`` of the ball rule: points ``z`` of shape (N, n) and weights of shape (N,).
    """
    z: np.ndarray
    weights: np.ndarray


def _gauss_unit(nodes: int):
    x, w = np.polynomial.legendre.leggauss(nodes)
    return (x + 1.0) / 2.0, w / 2.0


def ball_tiles(quad: QuadratureSpec):
    """
    Tiles of the tensor rule on B^2 for the measure ``4 dx_1 dy_1 dx_2 dy_2``.

    With ``u = |z_1|^2 = s``, ``v = |z_2|^2 = (1 - s) t`` the measure is ``(1 - s) ds dt dphi_1 dphi_2``;
    Gauss-Legendre in ``s, t`` and the trapezoid rule in both angles.
    """
    s_nodes, s_weights = _gauss_unit(quad.n_rad)
    t_nodes, t_weights = _gauss_unit(quad.n_rad)
    phi = 2.0 * np.pi * np.arange(quad.n_ang) / quad.n_ang
    angle_weight = (2.0 * np.pi / quad.n_ang) ** 2
    t_grid, phi1, phi2 = np.meshgrid(t_nodes, phi, phi, indexing="ij")
    tw_grid = np.broadcast_to(t_weights[:, None, None], t_grid.shape)
    tiles = []
    for s, ws in zip(s_nodes, s_weights):
        rho1 = np.sqrt(s)
        rho2 = np.sqrt((1.0 - s) * t_grid)
        z = np.stack([rho1 * np.exp(1j * phi1), rho2 * np.exp(1j * phi2)], axis=-1).reshape(-1, 2)
        weights = ((1.0 - s) * ws * angle_weight * tw_grid).reshape(-1)
        tiles.append(BallTile(z, weights))
    return tiles


def _inner_once(f: WeightedFunction, g: WeightedFunction, k: int, quad: QuadratureSpec, threads=None) -> complex:
    def tile_value(tile: BallTile):
        density = minus_form(tile.z).real ** (3 * k - 3)
        return np.sum(tile.weights * f(tile.z) * np.conj(g(tile.z)) * density)

    return complex(Helper.tiled_sum(tile_value, ball_tiles(quad), threads))


def petersson_inner(f: WeightedFunction, g: WeightedFunction, k: int, quad: QuadratureSpec = QuadratureSpec(),
                    threads=None, check_convergence: bool = True) -> QuadratureResult:
    """
    ``(f, g)`` over B^2: ``int f conj(g) (-<z,z>)^{3k-3} 4 dV``.

    :param f: Weighted function.
    :param g: Weighted function.
    :param k: Weight parameter, k >= 1.
    :param quad: Node counts.
    :param threads: Worker cap for the tiles.
    :param check_convergence: Raise NonConvergent when the half-resolution estimate exceeds ``quad.tol``.
    :return: Value with error estimate.
    """
    value = _inner_once(f, g, k, quad, threads)
    coarse = _inner_once(f, g, k, quad.halved(), threads)
    est_error = abs(value - coarse)
    if check_convergence and est_error > quad.tol * max(1.0, abs(value)):
        raise NonConvergent("Inner product did not converge.",
                            detail={"value": [value.real, value.imag], "est_error": est_error,
                                    "n_rad": quad.n_rad, "n_ang": quad.n_ang})
    return QuadratureResult(value, est_error)


def gram_matrix(functions, k: int, quad: QuadratureSpec = QuadratureSpec(), threads=None) -> np.ndarray:
    """
    All inner products ``(f_i, f_j)`` from a single pass over the tiles.
    """
    functions = list(functions)

    def tile_value(tile: BallTile):
        density = minus_form(tile.z).real ** (3 * k - 3)
        values = np.array([f(tile.z) for f in functions])
        return values @ (values * tile.weights * density).conj().T

    return Helper.tiled_sum(tile_value, ball_tiles(quad), threads)

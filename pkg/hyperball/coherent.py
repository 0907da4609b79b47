"""
Orthonormal monomial basis and coherent states of weight ``3k`` (or ``6k``) on the circle bundle over B^2.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum, unique
from fractions import Fraction
from typing import Iterable

import numpy as np
from scipy.special import gammaln

from .bundle_geometry import CirclePoint, WeightedFunction, bundle_action, minus_form, petersson_inner
from .exceptions import InvalidParameter, CoefficientOverflow, BranchCut
from .hermitian_core import BallPoint, GroupElement
from .types import QuadratureSpec

logger = logging.getLogger(__name__)

MAX_FLOAT_FACTORIAL = 170


@unique
class KernelSign(Enum):
    DERIVED = "derived"
    PRINTED = "printed"


@dataclass(frozen=True)
class BasisIndex:
    l: int
    m: int
    k: int

    def __post_init__(self):
        if self.l < 0 or self.m < 0:
            raise InvalidParameter("Basis exponents must be non-negative.")
        if self.k < 1:
            raise InvalidParameter("Basis weight parameter k must be positive.")

    def coefficient_squared_exact(self) -> Fraction:
        """
        ``(3k+l+m-1)! / (l! m! (3k-3)!)``; the coefficient is ``sqrt`` of it over ``2 pi``.
        """
        k, l, m = self.k, self.l, self.m
        return Fraction(math.factorial(3 * k + l + m - 1),
                        math.factorial(l) * math.factorial(m) * math.factorial(3 * k - 3))

    def coefficient(self) -> float:
        k, l, m = self.k, self.l, self.m
        if 3 * k + l + m - 1 > MAX_FLOAT_FACTORIAL:
            raise CoefficientOverflow(f"3k+l+m-1 = {3 * k + l + m - 1} exceeds {MAX_FLOAT_FACTORIAL}.")
        log_sq = gammaln(3 * k + l + m) - gammaln(l + 1) - gammaln(m + 1) - gammaln(3 * k - 2)
        return float(np.exp(0.5 * log_sq) / (2.0 * math.pi))


def basis_function(idx: BasisIndex) -> WeightedFunction:
    coefficient = idx.coefficient()

    def func(z):
        return coefficient * z[..., 0] ** idx.l * z[..., 1] ** idx.m

    return WeightedFunction(idx.k, func, f"F_{idx.l},{idx.m},{idx.k}")


def basis_F(idx: BasisIndex, p: CirclePoint) -> complex:
    return complex(basis_function(idx)(p.z.affine) * p.zeta ** idx.k)


@dataclass(frozen=True, eq=False)
class CoherentState:
    w: BallPoint
    eta: complex
    k: int
    weight_doubling: bool = False

    def __post_init__(self):
        if self.k < 1:
            raise InvalidParameter("Coherent state weight parameter k must be positive.")
        CirclePoint(self.w, self.eta)

    @classmethod
    def at(cls, p: CirclePoint, k: int, weight_doubling: bool = False) -> "CoherentState":
        return CoherentState(p.z, p.zeta, k, weight_doubling)

    @property
    def point(self) -> CirclePoint:
        return CirclePoint(self.w, self.eta)

    @property
    def q(self) -> int:
        return 2 * self.k if self.weight_doubling else self.k

    @property
    def prefactor(self) -> float:
        return (3 * self.q - 1) * (3 * self.q - 2) / (4.0 * math.pi ** 2)


def coherent_values(w, eta, q: int, z, zeta, sign: KernelSign = KernelSign.DERIVED):
    """
    Vectorized ``(3q-1)(3q-2)/(4 pi^2) zeta^q conj(eta)^q (-<z,w>)^{-3q}`` over points ``z`` of shape (..., 2).
    """
    base = minus_form(z, w)
    if np.any(np.real(base) <= 0):
        raise BranchCut("-<z,w> left the right half plane.")
    if sign == KernelSign.PRINTED:
        base = -base
    prefactor = (3 * q - 1) * (3 * q - 2) / (4.0 * math.pi ** 2)
    return prefactor * np.asarray(zeta) ** q * np.conj(eta) ** q * base ** (-3 * q)


def coherent_eval(cs: CoherentState, p: CirclePoint, sign: KernelSign = KernelSign.DERIVED) -> complex:
    return complex(coherent_values(cs.w.affine, cs.eta, cs.q, p.z.affine, p.zeta, sign))


def kernel_function(cs: CoherentState) -> WeightedFunction:
    """
    Holomorphic part ``psi`` of the coherent state, ``Psi(z, zeta) = psi(z) zeta^q``.
    """
    return WeightedFunction(cs.q, lambda z: coherent_values(cs.w.affine, cs.eta, cs.q, z, 1.0), "psi")


def kernel_series(n: int, t: Fraction, terms: int):
    """
    Partial sum of ``sum_l (N+l)!/l! t^l`` and the closed form ``N! / (1-t)^{N+1}``, both exact.
    """
    t = Fraction(t)
    partial = sum(Fraction(math.factorial(n + l), math.factorial(l)) * t ** l for l in range(terms))
    return partial, Fraction(math.factorial(n)) / (1 - t) ** (n + 1)


def kernel_double_series(k: int, x: Fraction, y: Fraction, terms: int):
    """
    Partial sum of ``sum_{l,m < terms} (3k+l+m-1)!/(l! m!) x^l y^m`` and ``(3k-1)! / (1-x-y)^{3k}``, both exact.
    """
    x, y = Fraction(x), Fraction(y)
    partial = Fraction(0)
    for l in range(terms):
        for m in range(terms):
            partial += Fraction(math.factorial(3 * k + l + m - 1), math.factorial(l) * math.factorial(m)) \
                * x ** l * y ** m
    return partial, Fraction(math.factorial(3 * k - 1)) / (1 - x - y) ** (3 * k)


def reproducing_residual(f: WeightedFunction, w: BallPoint, eta: complex, quad: QuadratureSpec = QuadratureSpec(),
                         threads=None) -> float:
    """
    ``|f(w) eta^k - (f, psi_w)|``; the fiber integral keeps only the matching Fourier mode.
    """
    cs = CoherentState(w, eta, f.k)
    expected = complex(f(w.affine) * eta ** f.k)
    result = petersson_inner(f, kernel_function(cs), f.k, quad, threads)
    return abs(expected - result.value)


def reproducing_check(idx: BasisIndex, w: BallPoint, eta: complex, quad: QuadratureSpec = QuadratureSpec(),
                      threads=None) -> float:
    return reproducing_residual(basis_function(idx), w, eta, quad, threads)


def equivariance_check(g: GroupElement, cs: CoherentState, points: Iterable[CirclePoint]) -> float:
    """
    Max over ``points`` of ``|Psi_{(w,eta)}(g^-1 p) - Psi_{g(w,eta)}(p)|``.
    """
    g_inv = g.inverse()
    moved = CoherentState.at(bundle_action(g, cs.point), cs.k, cs.weight_doubling)
    residual = 0.0
    for p in points:
        residual = max(residual, abs(coherent_eval(cs, bundle_action(g_inv, p)) - coherent_eval(moved, p)))
    return residual

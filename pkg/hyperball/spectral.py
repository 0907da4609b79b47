"""
Eigen-analysis of group elements.

A loxodromic element has an attracting null eigenvector ``X`` (eigenvalue of modulus ``rho > 1``), a repelling null
eigenvector ``Y`` (modulus ``1/rho``) and positive eigenvectors spanning the form-orthogonal complement. It is
hyperbolic when the positive eigenvalues share one unit phase ``tau`` and ``mu_X / tau`` is real.

Canonical scaling: ``X`` has last coordinate ``+1`` and ``Y`` has last coordinate ``-1``. The normal form
``[[1, 0, 0], [0, a, b], [0, b, a]]`` then has ``X = (0, 1, 1)``, ``Y = (0, 1, -1)``, ``<X, Y> = 2`` and ``A = I``.
"""
import logging
from dataclasses import dataclass
from enum import Enum, unique
from functools import cached_property
from typing import Optional

import numpy as np
import scipy.linalg

from .exceptions import DegenerateSpectrum, NotHyperbolic, NormalizationFailure, InvalidParameter
from .hermitian_core import GroupElement, Flavor, herm_form, validate_group, signature_matrix
from .registry import EPS_GROUP, EPS_SPECTRAL, NEAR_PARABOLIC

logger = logging.getLogger(__name__)


@unique
class ElementKind(Enum):
    ELLIPTIC_OR_OTHER = "Elliptic-or-other"
    LOXODROMIC = "Loxodromic"
    HYPERBOLIC = "Hyperbolic"


@dataclass(frozen=True, eq=False)
class LoxodromicData:
    element: GroupElement
    mu: complex
    mu_inv: complex
    X: np.ndarray
    Y: np.ndarray
    positives: np.ndarray
    taus: np.ndarray

    @property
    def rho(self) -> float:
        return float(abs(self.mu))

    @property
    def pairing(self) -> complex:
        return complex(herm_form(self.X, self.Y))

    def eigen_residuals(self) -> float:
        g = self.element.matrix
        res = [np.max(np.abs(g @ self.X - self.mu * self.X)), np.max(np.abs(g @ self.Y - self.mu_inv * self.Y))]
        for i in range(self.positives.shape[1]):
            u = self.positives[:, i]
            res.append(np.max(np.abs(g @ u - self.taus[i] * u)))
        return float(max(res))


@dataclass(frozen=True, eq=False)
class HyperbolicData(LoxodromicData):
    lam: float = 0.0
    phase: complex = 1.0

    @property
    def v(self) -> np.ndarray:
        """
        Positive eigenvector scaled as the first column of the normalizer.
        """
        return self.A.matrix[:, 0]

    @cached_property
    def A(self) -> GroupElement:
        return build_A(self)

    def transported(self, h: GroupElement) -> "HyperbolicData":
        """
        Eigen-data of ``h g h^-1``: every eigenvector is mapped by ``h``.
        """
        m = h.matrix
        return HyperbolicData(self.element.conjugate_by(h), self.mu, self.mu_inv, m @ self.X, m @ self.Y,
                              m @ self.positives, self.taus, self.lam, self.phase)


@dataclass(frozen=True, eq=False)
class Classification:
    kind: ElementKind
    eigenvalues: np.ndarray
    data: Optional[LoxodromicData] = None

    def to_dict(self) -> dict:
        result = {"kind": self.kind.value, "eigenvalues": self.eigenvalues}
        if self.data is not None:
            result.update({"rho": self.data.rho, "X": self.data.X, "Y": self.data.Y,
                           "positives": self.data.positives.T, "pairing": self.data.pairing})
        if isinstance(self.data, HyperbolicData):
            result.update({"lambda": self.data.lam, "phase": self.data.phase, "v": self.data.v,
                           "A": self.data.A.matrix, "unit_eigenvalue": has_unit_eigenvalue(self.data)})
        return result


def _form_orthonormalize(vectors: np.ndarray) -> np.ndarray:
    result = []
    for i in range(vectors.shape[1]):
        u = vectors[:, i].copy()
        for w in result:
            u = u - herm_form(u, w) * w
        norm2 = herm_form(u, u).real
        if norm2 <= 0:
            raise DegenerateSpectrum("Complement of the null eigenvectors is not positive definite.")
        result.append(u / np.sqrt(norm2))
    return np.array(result).T.reshape(vectors.shape[0], len(result))


def classify_element(g: GroupElement, tol: float = EPS_SPECTRAL) -> Classification:
    """
    Elliptic-or-other, loxodromic or hyperbolic, with eigen-data for the latter two.

    :raises DegenerateSpectrum: largest modulus within NEAR_PARABOLIC of 1 but above ``tol``.
    """
    m = g.matrix
    n = g.n
    eigenvalues, eigenvectors = np.linalg.eig(m)
    moduli = np.abs(eigenvalues)
    order = np.lexsort((np.angle(eigenvalues), -moduli))
    eigenvalues = eigenvalues[order]
    eigenvectors = eigenvectors[:, order]
    rho = moduli[order][0]
    if rho - 1.0 <= tol:
        return Classification(ElementKind.ELLIPTIC_OR_OTHER, eigenvalues)
    if rho - 1.0 < NEAR_PARABOLIC:
        raise DegenerateSpectrum(f"Spectral radius {rho} is too close to 1.")
    mu, mu_inv = eigenvalues[0], eigenvalues[-1]
    if abs(rho * abs(mu_inv) - 1.0) > tol * 10:
        logger.warning(f"Eigenvalue moduli {rho} and {abs(mu_inv)} are not reciprocal.")
    X = eigenvectors[:, 0] / eigenvectors[-1, 0]
    Y = -eigenvectors[:, -1] / eigenvectors[-1, -1]
    # Parabolic elements split into nearly parallel null eigenvectors.
    if abs(herm_form(X, Y)) < NEAR_PARABOLIC * np.linalg.norm(X) * np.linalg.norm(Y):
        raise DegenerateSpectrum(f"Null eigenvectors are nearly parallel at spectral radius {rho}.")

    if n > 1:
        j = signature_matrix(n)
        basis = scipy.linalg.null_space(np.vstack([(j @ X).conj(), (j @ Y).conj()]))
        restricted = np.linalg.pinv(basis) @ m @ basis
        taus, w = np.linalg.eig(restricted)
        positives = _form_orthonormalize(basis @ w)
        tau = taus[0]
        common = bool(np.all(np.abs(taus - tau) <= tol * 10))
    else:
        positives = np.zeros((n + 1, 0), dtype=complex)
        taus = np.zeros(0, dtype=complex)
        tau = mu / abs(mu)
        common = True

    ratio, ratio_inv = mu / tau, mu_inv / tau
    hyperbolic = common and abs(ratio.imag) <= tol * abs(ratio) and abs(ratio_inv.imag) <= tol * abs(ratio_inv)
    if not hyperbolic:
        data = LoxodromicData(g, mu, mu_inv, X, Y, positives, taus)
        return Classification(ElementKind.LOXODROMIC, eigenvalues, data)
    data = HyperbolicData(g, mu, mu_inv, X, Y, positives, taus, float(ratio.real), complex(tau))
    logger.debug(f"hyperbolic element with lambda={data.lam} and phase={data.phase}")
    return Classification(ElementKind.HYPERBOLIC, eigenvalues, data)


def hyperbolic_data(g: GroupElement, tol: float = EPS_SPECTRAL) -> HyperbolicData:
    classification = classify_element(g, tol)
    if classification.kind != ElementKind.HYPERBOLIC:
        raise NotHyperbolic(f"Element is {classification.kind.value}.")
    return classification.data


def has_unit_eigenvalue(data: LoxodromicData, tol: float = EPS_SPECTRAL) -> bool:
    """
    True when 1 is among the eigenvalues of the element.
    """
    return bool(np.any(np.abs(data.taus - 1.0) <= tol * 10))


def square_to_su(g: GroupElement, tol: float = EPS_GROUP) -> GroupElement:
    """
    Square of a hyperbolic element after removing its unimodular phase; an SU(n,1) element with eigenvalue 1.
    """
    data = hyperbolic_data(g)
    scaled = g.matrix / data.phase
    return validate_group(scaled @ scaled, Flavor.SU, tol)


def build_A(data: HyperbolicData, tol: float = EPS_GROUP) -> GroupElement:
    """
    Normalizer with columns ``v, X/<X,Y> + Y/2, X/<X,Y> - Y/2``.

    ``v`` is scaled to unit form-length and its phase fixed so that ``det A = 1``; since ``|det A| = 1`` for any
    unit ``v`` the scaling is unique.
    """
    pairing = data.pairing
    if abs(pairing) < tol:
        raise NormalizationFailure("Null eigenvectors are form-orthogonal.")
    c2 = data.X / pairing + data.Y / 2.0
    c3 = data.X / pairing - data.Y / 2.0
    raw = data.positives[:, 0]
    v = raw / np.sqrt(herm_form(raw, raw).real)
    columns = [v] + [data.positives[:, i] for i in range(1, data.positives.shape[1])] + [c2, c3]
    a = np.array(columns).T
    det = complex(scipy.linalg.det(a))
    if abs(abs(det) - 1.0) > tol * 100:
        raise NormalizationFailure(f"Normalizer has |det| = {abs(det)}.")
    a[:, 0] = a[:, 0] / det
    try:
        return validate_group(a, Flavor.SU, tol * 100)
    except Exception as e:
        raise NormalizationFailure(e)


def normal_form(lam: float, n: int = 2) -> GroupElement:
    """
    ``diag(1, ..., 1) + [[a, b], [b, a]]`` with ``a = (lam^2+1)/(2 lam)`` and ``b = (lam^2-1)/(2 lam)``.
    """
    if isinstance(lam, complex) or not np.isfinite(lam) or abs(lam) <= 1.0:
        raise InvalidParameter(f"Normal form needs a real lambda with |lambda| > 1, got {lam}.")
    lam = float(lam)
    a = (lam ** 2 + 1.0) / (2.0 * lam)
    b = (lam ** 2 - 1.0) / (2.0 * lam)
    matrix = np.eye(n + 1, dtype=complex)
    matrix[n - 1:, n - 1:] = [[a, b], [b, a]]
    return GroupElement(matrix, Flavor.SU, 0.0)


def normal_form_residual(data: HyperbolicData) -> float:
    a = data.A
    conjugated = a.inverse().matrix @ (data.element.matrix / data.phase) @ a.matrix
    return float(np.max(np.abs(conjugated - normal_form(data.lam, data.element.n).matrix)))


def axis_endpoints(data: LoxodromicData, tol: float = 1e-10):
    """
    Boundary fixed points: projectivizations of ``X`` (attracting) and ``Y`` (repelling).
    """
    endpoints = []
    for u in (data.X, data.Y):
        if abs(u[-1]) < tol:
            raise NormalizationFailure("Null eigenvector with vanishing last coordinate.")
        point = u[:-1] / u[-1]
        if abs(np.sum(np.abs(point) ** 2) - 1.0) > tol:
            raise NormalizationFailure("Axis endpoint is off the unit sphere.")
        endpoints.append(point)
    return endpoints[0], endpoints[1]


def hyperbolic_element(lam: float, h: Optional[GroupElement] = None, n: int = 2) -> GroupElement:
    """
    ``h N(lam) h^-1``; the normal form itself when ``h`` is omitted.
    """
    g = normal_form(lam, n)
    return g if h is None else g.conjugate_by(h)


"""
Linear algebra of the Hermitian form of signature (n, 1), points of the unit ball and the group acting on them.

The form is ``<z, w> = z_1 w_1* + ... + z_n w_n* - z_{n+1} w_{n+1}*`` and a ball point ``z`` is represented by its
lift ``(z_1, ..., z_n, 1)``. A matrix ``g`` belongs to U(n, 1) when ``g* J g = J`` with ``J = diag(1, ..., 1, -1)``;
it acts by fractional-linear transformations with denominator ``c.z + d`` (last row of ``g``).
"""
import logging
from dataclasses import dataclass
from enum import Enum, unique

import numpy as np
import scipy.linalg
import scipy.stats

from .exceptions import DimensionMismatch, ZeroVectorError, NotInGroup, DenominatorNearZero, OutsideBall, \
    InvalidParameter
from .parsers import parse_matrix, dump_matrix
from .registry import InvariantRegistry, EPS_GROUP, EPS_BALL, EPS_DEN
from .types import DictSerializable

logger = logging.getLogger(__name__)

registry = InvariantRegistry.getInstance()


@unique
class Flavor(Enum):
    U = "U"
    SU = "SU"


@unique
class VectorClass(Enum):
    NEGATIVE = "Negative"
    NULL = "Null"
    POSITIVE = "Positive"


def signature_matrix(n: int) -> np.ndarray:
    return np.diag(np.r_[np.ones(n), -1.0]).astype(complex)


def _coords(value) -> np.ndarray:
    if isinstance(value, HVec):
        return value.coords
    if isinstance(value, BallPoint):
        return value.lift().coords
    return np.asarray(value, dtype=complex)


def _affine(value) -> np.ndarray:
    if isinstance(value, BallPoint):
        return value.affine
    return np.asarray(value, dtype=complex)


def _matrix(value) -> np.ndarray:
    if isinstance(value, GroupElement):
        return value.matrix
    return np.asarray(value, dtype=complex)


@dataclass(frozen=True, eq=False)
class HVec:
    coords: np.ndarray

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=complex)
        if coords.ndim != 1 or len(coords) < 2:
            raise DimensionMismatch("HVec needs a one dimensional array of at least 2 coordinates.")
        if not np.all(np.isfinite(coords)):
            raise InvalidParameter("HVec coordinates must be finite.")
        object.__setattr__(self, "coords", coords)

    @property
    def n(self):
        return len(self.coords) - 1

    def projectivize(self) -> np.ndarray:
        """
        Affine coordinates with the last entry normalized to 1.
        """
        if abs(self.coords[-1]) < EPS_DEN:
            raise DenominatorNearZero("Vector has vanishing last coordinate.")
        return self.coords[:-1] / self.coords[-1]


@dataclass(frozen=True, eq=False)
class BallPoint:
    affine: np.ndarray

    def __post_init__(self):
        affine = np.asarray(self.affine, dtype=complex)
        if affine.ndim != 1 or len(affine) < 1:
            raise DimensionMismatch("BallPoint needs a one dimensional array of coordinates.")
        norm2 = float(np.sum(np.abs(affine) ** 2))
        if not np.isfinite(norm2) or norm2 >= 1.0 - EPS_BALL:
            raise OutsideBall(f"Point with squared norm {norm2} is not in the open unit ball.")
        object.__setattr__(self, "affine", affine)

    @property
    def n(self):
        return len(self.affine)

    def lift(self) -> HVec:
        return HVec(np.r_[self.affine, 1.0])

    def norm2(self) -> float:
        return float(np.sum(np.abs(self.affine) ** 2))


@registry.register_for_json
@dataclass(frozen=True, eq=False)
class GroupElement(DictSerializable):
    matrix: np.ndarray
    flavor: Flavor = Flavor.SU
    residual: float = 0.0

    _key = "GroupElement"

    @property
    def n(self):
        return self.matrix.shape[0] - 1

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        flavor = Flavor.SU if self.flavor == other.flavor == Flavor.SU else Flavor.U
        return GroupElement(self.matrix @ other.matrix, flavor, self.residual + other.residual)

    def inverse(self) -> "GroupElement":
        j = signature_matrix(self.n)
        return GroupElement(j @ self.matrix.conj().T @ j, self.flavor, self.residual)

    def power(self, m: int) -> "GroupElement":
        base = self if m >= 0 else self.inverse()
        return GroupElement(np.linalg.matrix_power(base.matrix, abs(int(m))), self.flavor, self.residual * abs(m))

    def conjugate_by(self, h: "GroupElement") -> "GroupElement":
        return h @ self @ h.inverse()

    @classmethod
    def identity(cls, n: int = 2) -> "GroupElement":
        return GroupElement(np.eye(n + 1, dtype=complex), Flavor.SU, 0.0)

    @classmethod
    def from_dict(cls, dict_obj) -> "GroupElement":
        assert dict_obj["key"] == cls._key, "Keys are inconsistent. Are you trying to deserialize different type?"
        obj = dict_obj["obj"]
        return validate_group(parse_matrix(obj["matrix"]), Flavor(obj.get("flavor", "SU")))

    def to_dict(self) -> dict:
        return {"key": self.__class__._key,
                "obj": {"matrix": dump_matrix(self.matrix), "flavor": self.flavor.value}}


def herm_form(z, w):
    """
    Signature (n, 1) Hermitian form, vectorized over leading axes.

    :param z: HVec or array of shape (..., n+1).
    :param w: HVec or array of shape (..., n+1).
    :return: Complex value(s) of <z, w>.
    """
    z = _coords(z)
    w = _coords(w)
    if z.shape[-1] != w.shape[-1]:
        raise DimensionMismatch(f"Vectors of length {z.shape[-1]} and {w.shape[-1]} cannot be paired.")
    prod = z * np.conj(w)
    return np.sum(prod[..., :-1], axis=-1) - prod[..., -1]


def classify_vector(z, tol: float = EPS_BALL) -> VectorClass:
    z = _coords(z)
    if not np.any(z != 0):
        raise ZeroVectorError("Zero vector has no sign class.")
    value = herm_form(z, z).real
    if abs(value) <= tol:
        return VectorClass.NULL
    return VectorClass.NEGATIVE if value < 0 else VectorClass.POSITIVE


def group_residual(matrix) -> float:
    matrix = _matrix(matrix)
    j = signature_matrix(matrix.shape[0] - 1)
    return float(np.max(np.abs(matrix.conj().T @ j @ matrix - j)))


def validate_group(matrix, flavor: Flavor = Flavor.SU, tol: float = EPS_GROUP) -> GroupElement:
    """
    Checks ``g* J g = J`` (and ``det g = 1`` for SU) to ``tol``.

    :raises NotInGroup: residual carries the max-entry defect.
    """
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 2:
        raise DimensionMismatch("Group element must be a square matrix of size n+1 >= 2.")
    if not np.all(np.isfinite(matrix)):
        raise NotInGroup("Group element has non finite entries.", residual=float("inf"))
    flavor = Flavor(flavor)
    residual = group_residual(matrix)
    if flavor == Flavor.SU:
        residual = max(residual, float(abs(scipy.linalg.det(matrix) - 1.0)))
    if residual > tol:
        raise NotInGroup(f"Matrix is not in {flavor.value}(n,1), residual {residual:.3e}.", residual=residual)
    return GroupElement(matrix, flavor, residual)


def normalize_det(g, tol: float = EPS_GROUP) -> GroupElement:
    """
    Divides by the principal (n+1)-th root of the determinant, producing an SU(n,1) element.
    """
    matrix = _matrix(g)
    det = complex(scipy.linalg.det(matrix))
    if abs(det) < EPS_DEN:
        raise NotInGroup("Singular matrix cannot be normalized.", residual=float("inf"))
    root = det ** (1.0 / matrix.shape[0])
    return validate_group(matrix / root, Flavor.SU, tol)


def denominator(g, z) -> np.ndarray:
    """
    ``c.z + d`` for ball point(s) ``z`` of shape (..., n).
    """
    matrix = _matrix(g)
    z = _affine(z)
    return z @ matrix[-1, :-1] + matrix[-1, -1]


def _checked_denominator(g, z):
    den = denominator(g, z)
    if np.any(np.abs(den) < EPS_DEN):
        raise DenominatorNearZero("Denominator c.z+d vanishes; invalid element or boundary point.")
    return den


def act_array(g, z) -> np.ndarray:
    """
    Fractional-linear action on an array of affine points of shape (..., n).
    """
    matrix = _matrix(g)
    z = _affine(z)
    den = _checked_denominator(matrix, z)
    num = z @ matrix[:-1, :-1].T + matrix[:-1, -1]
    return num / den[..., None]


def act(g, z: BallPoint) -> BallPoint:
    if _matrix(g).shape[0] != z.n + 1:
        raise DimensionMismatch("Group element and point dimensions differ.")
    return BallPoint(act_array(g, z.affine))


def jacobian(g, z) -> np.ndarray:
    """
    Complex Jacobian matrix of the action, ``(a_ij - (gz)_i c_j) / (c.z + d)``.
    """
    matrix = _matrix(g)
    z = _affine(z)
    den = _checked_denominator(matrix, z)
    image = act_array(matrix, z)
    return (matrix[:-1, :-1] - image[..., :, None] * matrix[-1, :-1]) / den[..., None, None]


def jacobian_det(g, z):
    """
    ``det J(g, z) = (c.z + d)^{-(n+1)}``; vectorized over leading axes of ``z``.
    """
    matrix = _matrix(g)
    den = _checked_denominator(matrix, z)
    return den ** (-(matrix.shape[0]))


def boost(n: int, t: float, axis: int = 0) -> GroupElement:
    """
    Real boost of rapidity ``t`` in the plane of ``e_axis`` and ``e_{n+1}``.
    """
    if not 0 <= axis < n:
        raise InvalidParameter(f"Axis {axis} is out of range for n={n}.")
    matrix = np.eye(n + 1, dtype=complex)
    matrix[axis, axis] = matrix[n, n] = np.cosh(t)
    matrix[axis, n] = matrix[n, axis] = np.sinh(t)
    return GroupElement(matrix, Flavor.SU, 0.0)


def random_compact(rng: np.random.Generator, n: int) -> np.ndarray:
    if n == 1:
        u = np.array([[np.exp(2j * np.pi * rng.random())]])
    else:
        u = scipy.stats.unitary_group.rvs(n, random_state=rng)
    return scipy.linalg.block_diag(u, np.exp(2j * np.pi * rng.random())).astype(complex)


def random_group_element(rng: np.random.Generator, n: int = 2, max_boost: float = 1.5) -> GroupElement:
    """
    Random SU(n,1) element as ``K1 . boost . K2`` with compact factors drawn from the Haar measure.
    """
    k1 = random_compact(rng, n)
    k2 = random_compact(rng, n)
    matrix = k1 @ boost(n, max_boost * rng.random()).matrix @ k2
    return normalize_det(matrix)


def random_ball_point(rng: np.random.Generator, n: int = 2, max_radius: float = 0.9) -> BallPoint:
    direction = rng.normal(size=n) + 1j * rng.normal(size=n)
    direction /= np.linalg.norm(direction)
    return BallPoint(direction * max_radius * rng.random() ** (1.0 / (2 * n)))

"""
Relative Poincare series over cosets of a cyclic hyperbolic subgroup, and the constants of the torus integral.

The seed is ``q_l(z) = <z,v>^{2l} / (<z,X> <z,Y>)^{3k+l}``. On lifts it is homogeneous of degree ``-6k``, so the term
``q_l(gz) det J(g,z)^{2k}`` of the series equals the seed evaluated on the unnormalized lift ``g (z, 1)``. All sums
below are computed that way.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum, unique
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np
import scipy.integrate
import sympy

from .bs_torus import TorusSpec, torus_arrays, lambda_point, sample_parameters
from .bundle_geometry import CirclePoint, fiber_modulus
from .coherent import coherent_values
from .exceptions import OddWeightVector, EnumerationOverflow, AssumptionViolation, ToleranceNotMet, \
    InvalidParameter, ConfigError
from .helpers import Helper
from .hermitian_core import BallPoint, GroupElement, herm_form, act_array, jacobian_det, validate_group, boost, \
    Flavor
from .parsers import parse_matrix, dump_matrix
from .registry import InvariantRegistry
from .spectral import HyperbolicData, hyperbolic_data, has_unit_eigenvalue, normal_form
from .types import DictSerializable, QuadratureSpec, QuadratureResult

logger = logging.getLogger(__name__)

registry = InvariantRegistry.getInstance()

ENUMERATION_CAP = 200000
TERM_CHUNK = 256
DEFAULT_MAX_POWER = 8
REFERENCE_POINT = (0.3, 0.2)


def _fingerprint(matrix: np.ndarray, tol: float) -> bytes:
    quantized = np.concatenate([np.round(matrix.real / tol), np.round(matrix.imag / tol)])
    return quantized.astype(np.int64).tobytes()


@registry.register_for_json
@dataclass(frozen=True, eq=False)
class LatticeSpec(DictSerializable):
    """
    Finitely generated subgroup given by generators; missing inverses are appended after the listed generators.
    """
    generators: Sequence[GroupElement]
    max_word_length: int
    dedup_tol: float = 1e-8

    _key = "LatticeSpec"

    def __post_init__(self):
        if len(self.generators) == 0:
            raise InvalidParameter("Lattice needs at least one generator.")
        if int(self.max_word_length) < 0:
            raise InvalidParameter("max_word_length must be non-negative.")
        if not self.dedup_tol > 0:
            raise InvalidParameter("dedup_tol must be positive.")
        gens = []
        seen = set()
        for g in self.generators:
            assert isinstance(g, GroupElement), "Generators must be GroupElement instances."
            key = _fingerprint(g.matrix, self.dedup_tol)
            if key not in seen:
                seen.add(key)
                gens.append(g)
        for g in list(gens):
            g_inv = g.inverse()
            key = _fingerprint(g_inv.matrix, self.dedup_tol)
            if key not in seen:
                seen.add(key)
                gens.append(g_inv)
        object.__setattr__(self, "generators", tuple(gens))
        object.__setattr__(self, "max_word_length", int(self.max_word_length))

    @property
    def n(self):
        return self.generators[0].n

    @classmethod
    def from_config(cls, obj: dict) -> "LatticeSpec":
        try:
            generators = [validate_group(parse_matrix(m), Flavor.SU) for m in obj["generators"]]
            return LatticeSpec(generators, int(obj["max_word_length"]), float(obj.get("dedup_tol", 1e-8)))
        except KeyError as e:
            raise ConfigError(f"Lattice config misses {e}.")

    @classmethod
    def from_dict(cls, dict_obj) -> "LatticeSpec":
        assert dict_obj["key"] == cls._key, "Keys are inconsistent. Are you trying to deserialize different type?"
        return cls.from_config(dict_obj["obj"])

    def to_dict(self) -> dict:
        return {"key": self.__class__._key,
                "obj": {"generators": [dump_matrix(g.matrix) for g in self.generators],
                        "max_word_length": self.max_word_length, "dedup_tol": self.dedup_tol}}


@registry.register_for_json
@dataclass(frozen=True, eq=False)
class SeriesSpec(DictSerializable):
    k: int
    l: int
    hyp: HyperbolicData
    lattice: LatticeSpec

    _key = "SeriesSpec"

    def __post_init__(self):
        if int(self.k) < 1 or int(self.l) < 1:
            raise InvalidParameter("k and l must be positive integers.")
        if not has_unit_eigenvalue(self.hyp):
            raise AssumptionViolation("gamma_0 does not have 1 among its eigenvalues.")

    @property
    def gamma0(self) -> GroupElement:
        return self.hyp.element

    def with_k(self, k: int) -> "SeriesSpec":
        return SeriesSpec(k, self.l, self.hyp, self.lattice)

    @classmethod
    def from_config(cls, obj: dict) -> "SeriesSpec":
        try:
            gamma0 = validate_group(parse_matrix(obj["gamma0"]), Flavor.SU)
            lattice = LatticeSpec.from_config(obj["lattice"])
            return SeriesSpec(int(obj["k"]), int(obj["l"]), hyperbolic_data(gamma0), lattice)
        except KeyError as e:
            raise ConfigError(f"Series config misses {e}.")

    @classmethod
    def from_dict(cls, dict_obj) -> "SeriesSpec":
        assert dict_obj["key"] == cls._key, "Keys are inconsistent. Are you trying to deserialize different type?"
        return cls.from_config(dict_obj["obj"])

    def to_dict(self) -> dict:
        return {"key": self.__class__._key,
                "obj": {"k": self.k, "l": self.l, "gamma0": dump_matrix(self.gamma0.matrix),
                        "lattice": self.lattice.to_dict()["obj"]}}


@dataclass(frozen=True, eq=False)
class WordElement:
    element: GroupElement
    word: tuple
    shell: int


@dataclass(frozen=True, eq=False)
class CosetRep:
    element: GroupElement
    word: tuple
    shell: int
    power: int


@dataclass(frozen=True)
class PartialSum:
    value: complex
    shell: int
    cauchy_gap: float
    abs_increment: float
    automorphy_residual: float = 0.0
    terms: int = 0

    def to_dict(self) -> dict:
        return {"shell": self.shell, "value": [self.value.real, self.value.imag], "cauchy_gap": self.cauchy_gap,
                "abs_increment": self.abs_increment, "automorphy_residual": self.automorphy_residual,
                "terms": self.terms}


@dataclass(frozen=True)
class ProbeRow:
    k: int
    point_id: int
    abs_theta: float
    cauchy_gap: float


@unique
class ConstantMode(Enum):
    PRINTED = "printed"
    DERIVED = "derived"
    RESIDUE = "residue"
    BETA = "beta"
    EMPIRICAL = "empirical"


def _lift(z) -> np.ndarray:
    z = z.affine if isinstance(z, BallPoint) else np.asarray(z, dtype=complex)
    return np.concatenate([z, np.ones(z.shape[:-1] + (1,), dtype=complex)], axis=-1)


def q_lift_values(u, hyp: HyperbolicData, k: int, l: int):
    """
    Seed on (unnormalized) lifts of shape (..., 3).
    """
    return herm_form(u, hyp.v) ** (2 * l) / (herm_form(u, hyp.X) * herm_form(u, hyp.Y)) ** (3 * k + l)


def q_values(z, hyp: HyperbolicData, k: int, l: int):
    return q_lift_values(_lift(z), hyp, k, l)


def q_l(z: BallPoint, spec) -> complex:
    """
    ``<z,v>^{2l} / (<z,X><z,Y>)^{3k+l}`` for a spec carrying ``k``, ``l`` and ``hyp``.
    """
    return complex(q_values(z, spec.hyp, spec.k, spec.l))


def q_multi(z, hyp: HyperbolicData, l_vector: Sequence[int], k: int) -> complex:
    """
    General-n seed ``prod <z,v_i>^{l_i} / (<z,X><z,Y>)^{(n+1)k + sum(l)/2}``; ``v_1`` is the normalizer column.

    :raises OddWeightVector: sum of ``l_vector`` is odd.
    """
    l_vector = [int(x) for x in l_vector]
    if any(x < 0 for x in l_vector):
        raise InvalidParameter("Weight vector entries must be non-negative.")
    if sum(l_vector) % 2 == 1:
        raise OddWeightVector(f"Weight vector {l_vector} has odd sum.")
    positives = [hyp.v] + [hyp.positives[:, i] for i in range(1, hyp.positives.shape[1])]
    if len(l_vector) > len(positives):
        raise InvalidParameter(f"At most {len(positives)} weights for this element.")
    u = _lift(z)
    n = u.shape[-1] - 1
    numerator = np.prod([herm_form(u, v) ** li for v, li in zip(positives, l_vector)], axis=0)
    exponent = (n + 1) * k + sum(l_vector) // 2
    return complex(numerator / (herm_form(u, hyp.X) * herm_form(u, hyp.Y)) ** exponent)


def gamma0_invariance_residual(spec, z) -> float:
    """
    ``|q_l(gamma_0 z) det J(gamma_0, z)^{2k} - q_l(z)|``.
    """
    z = z.affine if isinstance(z, BallPoint) else np.asarray(z, dtype=complex)
    g = spec.hyp.element
    moved = q_values(act_array(g, z), spec.hyp, spec.k, spec.l) * jacobian_det(g, z) ** (2 * spec.k)
    return float(abs(moved - q_values(z, spec.hyp, spec.k, spec.l)))


def enumerate_group(lat: LatticeSpec, cap: int = ENUMERATION_CAP) -> List[WordElement]:
    """
    Breadth-first closure of words up to ``lat.max_word_length``. Each element is kept at its first (shortest) word;
    within a shell the order is lexicographic in generator indices.

    :raises EnumerationOverflow: more than ``cap`` distinct elements.
    """
    identity = GroupElement.identity(lat.n)
    result = [WordElement(identity, (), 0)]
    seen = {_fingerprint(identity.matrix, lat.dedup_tol)}
    frontier = result
    for shell in range(1, lat.max_word_length + 1):
        next_frontier = []
        for item in frontier:
            for i, g in enumerate(lat.generators):
                element = item.element @ g
                key = _fingerprint(element.matrix, lat.dedup_tol)
                if key in seen:
                    continue
                seen.add(key)
                next_frontier.append(WordElement(element, item.word + (i,), shell))
                if len(seen) > cap:
                    raise EnumerationOverflow(f"More than {cap} elements at word length {shell}.")
        logger.debug(f"shell {shell}: {len(next_frontier)} new elements")
        result.extend(next_frontier)
        frontier = next_frontier
        if not frontier:
            break
    return result


def coset_reps(elements: Sequence, gamma0: GroupElement, max_power: int = DEFAULT_MAX_POWER,
               dedup_tol: float = 1e-8) -> List[CosetRep]:
    """
    Canonical representatives of the cosets ``<gamma_0> g``: the ``gamma_0^m g`` of least Frobenius norm for
    ``|m| <= max_power``, smallest ``m`` on ties. The shell of a coset is that of its first element in ``elements``.
    """
    powers = list(range(-max_power, max_power + 1))
    stack = np.array([gamma0.power(m).matrix for m in powers])
    reps = []
    seen = set()
    at_boundary = 0
    for item in elements:
        if isinstance(item, GroupElement):
            item = WordElement(item, (), 0)
        candidates = stack @ item.element.matrix
        norms = np.linalg.norm(candidates, axis=(1, 2))
        best = int(np.argmin(norms))
        if best in (0, len(powers) - 1):
            at_boundary += 1
        key = _fingerprint(candidates[best], dedup_tol)
        if key in seen:
            continue
        seen.add(key)
        element = GroupElement(candidates[best], item.element.flavor, item.element.residual)
        reps.append(CosetRep(element, item.word, item.shell, powers[best]))
    if at_boundary:
        logger.warning(f"{at_boundary} elements reached the max_power={max_power} boundary; "
                       f"their representatives may not be canonical.")
    return reps


def _sum_terms(matrices: np.ndarray, lift: np.ndarray, spec, threads=None):
    """
    Sum and absolute sum of seed terms over a stack of matrices applied to one lift.
    """
    if len(matrices) == 0:
        return 0j, 0.0
    chunks = [matrices[i:i + TERM_CHUNK] for i in range(0, len(matrices), TERM_CHUNK)]

    def chunk_value(chunk):
        values = q_lift_values(chunk @ lift, spec.hyp, spec.k, spec.l)
        return np.array([np.sum(values), np.sum(np.abs(values))])

    total = Helper.tiled_sum(chunk_value, chunks, threads)
    return complex(total[0]), float(total[1].real)


def theta_series(z, spec: SeriesSpec, reps: Sequence[CosetRep], test_elements: Optional[Sequence] = None,
                 threads=None) -> List[PartialSum]:
    """
    Shell-by-shell partial sums of ``sum q_l(gz) det J(g,z)^{2k}`` over coset representatives.

    :param z: Ball point.
    :param spec: Series specification.
    :param reps: Output of ``coset_reps``.
    :param test_elements: Elements for the automorphy residual; the lattice generators by default.
    :param threads: Worker cap for term evaluation.
    :return: One PartialSum per shell, ``0..max shell``.
    """
    lift = _lift(z)
    if test_elements is None:
        test_elements = spec.lattice.generators
    tests = [t.matrix if isinstance(t, GroupElement) else np.asarray(t, dtype=complex) for t in test_elements]
    max_shell = max((r.shell for r in reps), default=0)
    value = 0j
    moved = np.zeros(len(tests), dtype=complex)
    result = []
    for shell in range(max_shell + 1):
        matrices = np.array([r.element.matrix for r in reps if r.shell == shell]).reshape(-1, lift.shape[-1],
                                                                                           lift.shape[-1])
        shell_sum, abs_increment = _sum_terms(matrices, lift, spec, threads)
        value += shell_sum
        for i, t in enumerate(tests):
            moved[i] += _sum_terms(matrices @ t, lift, spec, threads)[0]
        residual = float(np.max(np.abs(moved - value))) if tests else 0.0
        result.append(PartialSum(complex(value), shell, abs(shell_sum), abs_increment, residual, len(matrices)))
    gaps = [p.cauchy_gap for p in result[2:]]
    if any(b > a for a, b in zip(gaps, gaps[1:])):
        logger.warning("Cauchy gaps are not monotone after shell 2.")
    return result


def theta_value(z, spec: SeriesSpec, reps: Sequence[CosetRep], threads=None) -> complex:
    return _sum_terms(np.array([r.element.matrix for r in reps]), _lift(z), spec, threads)[0]


def group_lift(spec: SeriesSpec, reps: Sequence[CosetRep], g: GroupElement, threads=None) -> complex:
    """
    ``F(g) = Theta(g 0) det J(g, 0)^{2k}``, the series as a left-invariant function on the group.
    """
    origin = np.zeros(g.n + 1, dtype=complex)
    origin[-1] = 1.0
    matrices = np.array([r.element.matrix @ g.matrix for r in reps])
    return _sum_terms(matrices, origin, spec, threads)[0]


def group_lift_residual(spec: SeriesSpec, reps: Sequence[CosetRep], g: GroupElement, gamma: GroupElement,
                        threads=None) -> float:
    return abs(group_lift(spec, reps, gamma @ g, threads) - group_lift(spec, reps, g, threads))


def associated_function(spec: SeriesSpec, reps: Sequence[CosetRep], constant: complex, p: CirclePoint,
                        threads=None) -> complex:
    """
    ``C zeta^{2k} Theta(z)``: the torus integral of the coherent state averaged over the lattice.
    """
    return complex(constant * p.zeta ** (2 * spec.k) * theta_value(p.z, spec, reps, threads))


def nonvanishing_probe(spec: SeriesSpec, reps: Sequence[CosetRep], points: Sequence[BallPoint],
                       k_values: Sequence[int], threads=None) -> List[ProbeRow]:
    rows = []
    for k in k_values:
        current = spec.with_k(int(k))
        for point_id, z in enumerate(points):
            last = theta_series(z, current, reps, test_elements=(), threads=threads)[-1]
            rows.append(ProbeRow(int(k), point_id, abs(last.value), last.cauchy_gap))
    return rows


def torus_probe_points(spec: SeriesSpec, samples: int = 8) -> List[BallPoint]:
    """
    Base points of ``Lambda(l)`` over one fundamental domain.
    """
    torus = TorusSpec(spec.k, spec.l, spec.hyp)
    r_values, angles = sample_parameters(torus, samples)
    return [lambda_point(torus, float(r), float(t)).z for r, t in zip(r_values, angles)]


def example_lattice(kind: str = "two_generator", lam: float = 8.0, max_word_length: int = 5) -> LatticeSpec:
    """
    ``cyclic``: the subgroup generated by the normal form. ``two_generator``: the normal form and the boost of the
    same length along the first coordinate axis.
    """
    gamma0 = normal_form(lam)
    if kind == "cyclic":
        return LatticeSpec([gamma0], max_word_length)
    if kind == "two_generator":
        return LatticeSpec([gamma0, boost(2, math.log(lam), axis=0)], max_word_length)
    raise InvalidParameter(f"Unknown example lattice {kind}.")


def example_series(k: int = 1, l: int = 1, kind: str = "two_generator", lam: float = 8.0,
                   max_word_length: int = 5) -> SeriesSpec:
    return SeriesSpec(k, l, hyperbolic_data(normal_form(lam)), example_lattice(kind, lam, max_word_length))


def _exponents(k: int, l: int):
    if int(k) < 1 or int(l) < 1:
        raise InvalidParameter("k and l must be positive integers.")
    return 3 * k + l - 1, 6 * k + 2 * l - 1


def c1_sum(k: int, l: int) -> Fraction:
    """
    ``sum_{j=0}^{3k+l-1} (-1)^j (3k+l-1)! / (j! j! (6k+2l-1-j)!)`` in exact arithmetic.
    """
    p, n = _exponents(k, l)
    return sum((Fraction((-1) ** j * math.factorial(p),
                         math.factorial(j) ** 2 * math.factorial(n - j)) for j in range(p + 1)), Fraction(0))


def c1_residue(k: int, l: int) -> Fraction:
    """
    Coefficient ``c`` in ``res = c a^{-(3k+l)}`` of ``z^{3k+l-1} ln z / (z-a)^{6k+2l}``, from the symbolic
    ``N``-th derivative of ``z^p ln z`` divided by ``N!``.
    """
    p, n = _exponents(k, l)
    z = sympy.Symbol("z", positive=True)
    coefficient = sympy.simplify(sympy.diff(z ** p * sympy.log(z), z, n) / sympy.factorial(n) * z ** (3 * k + l))
    if not coefficient.is_Rational:
        raise ArithmeticError(f"Residue coefficient {coefficient} is not rational.")
    return Fraction(int(coefficient.p), int(coefficient.q))


def c1_residue_leibniz(k: int, l: int) -> Fraction:
    """
    Same coefficient by the Leibniz rule, using ``(d/dz)^m ln z = (-1)^{m-1} (m-1)! z^{-m}``.
    """
    p, n = _exponents(k, l)
    total = Fraction(0)
    for j in range(p + 1):
        m = n - j
        total += math.comb(n, j) * Fraction(math.factorial(p), math.factorial(p - j)) \
            * (-1) ** (m - 1) * math.factorial(m - 1)
    return total / math.factorial(n)


def c1_closed_form(k: int, l: int) -> Fraction:
    p, n = _exponents(k, l)
    return Fraction((-1) ** p * math.factorial(p) ** 2, math.factorial(n))


def residue_at(k: int, l: int, a: float) -> float:
    """
    Residue at ``z = a``; negative for every ``a < 0``.
    """
    return float(c1_residue(k, l)) * a ** (-(3 * k + l))


def radial_beta(a: float, k: int, l: int) -> float:
    """
    ``p! p! / N! |a|^{-(3k+l)}``, the Beta-function value of the radial integral.
    """
    p, n = _exponents(k, l)
    return math.factorial(p) ** 2 / math.factorial(n) * abs(a) ** (-(3 * k + l))


def radial_integral(a: float, k: int, l: int, tol: float = 1e-12) -> float:
    """
    ``int_0^inf r^{3k+l-1} / (r-a)^{6k+2l} dr`` by adaptive quadrature after ``r = t/(1-t)``.

    :raises ToleranceNotMet: quadrature error estimate above ``tol`` relative.
    """
    if isinstance(a, complex) or not a < 0:
        raise InvalidParameter(f"Radial integral needs a real a < 0, got {a}.")
    p, n = _exponents(k, l)

    def integrand(t):
        if t >= 1.0:
            return 0.0
        r = t / (1.0 - t)
        return r ** p / (r - a) ** (n + 1) / (1.0 - t) ** 2

    value, error = scipy.integrate.quad(integrand, 0.0, 1.0, epsabs=0.0, epsrel=tol, limit=400)
    if error > 10 * tol * abs(value):
        raise ToleranceNotMet("Radial integral did not reach the tolerance.",
                              detail={"value": value, "error": error, "a": a, "k": k, "l": l})
    return float(value)


def node_ratio(spec: TorusSpec, z, r) -> np.ndarray:
    """
    ``|A / B|`` with ``A = 2 sqrt(r) R_0 v_1`` and ``B = v_2 (r-1) - r - 1`` where ``(v_1, v_2)`` is
    ``A^{-1} z``; the angular contour argument needs it below 1.
    """
    z = z.affine if isinstance(z, BallPoint) else np.asarray(z, dtype=complex)
    v = act_array(spec.hyp.A.inverse(), z)
    r = np.asarray(r, dtype=float)
    return np.abs(2.0 * np.sqrt(r) * spec.R0 * v[0]) / np.abs(v[1] * (r - 1.0) - r - 1.0)


def _torus_once(spec: TorusSpec, p: CirclePoint, quad: QuadratureSpec, mode_l, threads):
    x, w = np.polynomial.legendre.leggauss(quad.n_rad)
    t = (x + 1.0) / 2.0
    r = t / (1.0 - t)
    radial_weights = w / 2.0 / (t * (1.0 - t))
    Theta = 2.0 * np.pi * np.arange(quad.n_ang) / quad.n_ang
    angle_weight = 2.0 * np.pi / quad.n_ang
    a = spec.hyp.A
    ratio = node_ratio(spec, p.z, r)
    if np.any(ratio >= 1.0):
        raise AssumptionViolation(f"|B/A| > 1 fails at a radial node (max |A/B| = {ratio.max()}).")

    def row(i):
        base, eta = torus_arrays(spec, r[i], Theta)
        if mode_l is not None:
            eta = np.abs(eta) * np.exp(-1j * mode_l / spec.k * Theta)
        u = act_array(a, base)
        eta_u = eta * jacobian_det(a, base)
        values = coherent_values(u, eta_u, 2 * spec.k, p.z.affine, p.zeta)
        weight = radial_weights[i] * angle_weight
        return np.array([weight * np.sum(values), weight * np.sum(np.abs(values))])

    total = Helper.tiled_sum(row, range(quad.n_rad), threads)
    return 0.5j * complex(total[0]), 0.5 * float(total[1].real)


def torus_integral(spec: TorusSpec, p: CirclePoint, quad: QuadratureSpec = QuadratureSpec(), mode_l=None,
                   threads=None, check_convergence: bool = True) -> QuadratureResult:
    """
    Integral of the weight-``6k`` coherent state at ``(u, eta)`` in ``Lambda(l)`` against ``nu = (i/2) dTheta dr/r``.

    :param spec: Torus specification.
    :param p: Point of the circle bundle off the torus closure.
    :param quad: ``n_rad`` Gauss-Legendre nodes in ``t = r/(1+r)`` and ``n_ang`` trapezoid nodes in ``Theta``.
    :param mode_l: Replace the fiber phase ``e^{-i (l/k) Theta}`` by ``e^{-i (mode_l/k) Theta}``.
    :param threads: Worker cap over radial rows.
    :param check_convergence: Raise when the half-resolution estimate exceeds ``quad.tol``.
    :return: Value with error estimate.
    """
    value, scale = _torus_once(spec, p, quad, mode_l, threads)
    coarse, _ = _torus_once(spec, p, quad.halved(), mode_l, threads)
    est_error = abs(value - coarse)
    if check_convergence and est_error > quad.tol * scale:
        raise ToleranceNotMet("Torus integral did not converge.",
                              detail={"value": [value.real, value.imag], "est_error": est_error,
                                      "n_rad": quad.n_rad, "n_ang": quad.n_ang})
    return QuadratureResult(value, est_error)


def empirical_ratio(spec: TorusSpec, p: CirclePoint, quad: QuadratureSpec = QuadratureSpec(), threads=None) -> complex:
    """
    ``torus_integral / (q_l(z) zeta^{2k})``.
    """
    seed = q_l(p.z, spec)
    if abs(seed) == 0:
        raise InvalidParameter("q_l vanishes at the reference point.")
    return torus_integral(spec, p, quad, threads=threads).value / (seed * p.zeta ** (2 * spec.k))


def _shared_factor(k: int, l: int) -> Fraction:
    return Fraction(math.factorial(6 * k + 2 * l - 1), math.factorial(2 * l) * math.factorial(6 * k - 3))


def _radius_factor(k: int, l: int) -> Fraction:
    return Fraction(3 * k, 3 * k + l) ** (3 * k) * Fraction(l, 3 * k + l) ** l


def constant_C(k: int, l: int, hyp: HyperbolicData, mode: ConstantMode = ConstantMode.RESIDUE,
               quad: QuadratureSpec = QuadratureSpec(), point: Optional[CirclePoint] = None, threads=None) -> complex:
    """
    The constant of the torus-integral identity, in one of its variants.

    ``PRINTED`` evaluates the displayed formula with the printed alternating sum; ``DERIVED`` the last line of its
    derivation with the same sum; ``RESIDUE`` that line with the residue coefficient; ``BETA`` the closed form from
    evaluating the radial integral with the Beta function; ``EMPIRICAL`` the quadrature ratio at ``point``.
    """
    mode = ConstantMode(mode)
    s = 3 * k + l
    half_pairing = complex(np.conj(hyp.pairing)) / 2.0
    if mode == ConstantMode.PRINTED:
        exact = Fraction(2) ** (s - 2) * _shared_factor(k, l) * Fraction((3 * k) ** (3 * k) * l ** l, s ** s) \
            * c1_sum(k, l)
        return 1j * float(exact) * (2.0 * half_pairing) ** s
    if mode in (ConstantMode.DERIVED, ConstantMode.RESIDUE):
        c1 = c1_sum(k, l) if mode == ConstantMode.DERIVED else c1_residue(k, l)
        exact = Fraction(2) ** (2 * s - 2) * _shared_factor(k, l) * _radius_factor(k, l) * c1
        return 1j * float(exact) * half_pairing ** (-s)
    if mode == ConstantMode.BETA:
        p = s - 1
        exact = Fraction(4) ** s * _radius_factor(k, l) * Fraction(math.factorial(p) ** 2,
                                                                     4 * math.factorial(2 * l) * math.factorial(6 * k - 3))
        return 1j * float(exact) / math.pi * (-1) ** s * half_pairing ** s
    spec = TorusSpec(k, l, hyp)
    if point is None:
        z = BallPoint(np.array(REFERENCE_POINT, dtype=complex))
        point = CirclePoint(z, complex(fiber_modulus(z.affine)))
    return complex(empirical_ratio(spec, point, quad, threads))


def constant_report(k: int, l: int, hyp: HyperbolicData, quad: QuadratureSpec = QuadratureSpec(),
                    empirical: bool = True, threads=None) -> dict:
    report = {"k": k, "l": l, "c1_sum": c1_sum(k, l), "c1_residue": c1_residue(k, l),
              "c1_closed_form": c1_closed_form(k, l)}
    for mode in ConstantMode:
        if mode == ConstantMode.EMPIRICAL and not empirical:
            continue
        report[f"C_{mode.value}"] = constant_C(k, l, hyp, mode, quad, threads=threads)
    return report

"""
Command-line driver. Reports go to stdout (or ``--output``), logs to stderr.

Exit codes: 0 on success, 1 when a check fails, 2 when the configuration cannot be loaded.
"""
import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field, asdict
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np

from .bs_torus import TorusSpec, ThetaLoop, RLoop, legendrian_residual, bs_integral
from .coherent import BasisIndex, reproducing_check, kernel_double_series
from .exceptions import HyperballError, ParseError, ConfigError
from .hermitian_core import BallPoint, Flavor, GroupElement, group_residual, validate_group
from .helpers import Helper
from .parsers import parse_json_file, parse_matrix, parse_ball_point, parse_positive_int, parse_positive_float
from .registry import InvariantRegistry, HYPERBALL_LOG_LEVEL
from .series import SeriesSpec, LatticeSpec, example_series, enumerate_group, coset_reps, theta_series, \
    constant_report, nonvanishing_probe, torus_probe_points
from .spectral import classify_element, hyperbolic_data, normal_form
from .types import DictSerializable, TypesHelper, QuadratureSpec

logger = logging.getLogger(__name__)

registry = InvariantRegistry.getInstance()

COMMANDS = ("validate", "classify", "bs-check", "kernel-check", "series", "constants", "probe", "suite")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


@registry.register_for_json
@dataclass(frozen=True)
class RunConfig(DictSerializable):
    command: str
    k: int = 1
    l: int = 1
    lam: float = 2.0
    matrix: Optional[str] = None
    spec: Optional[str] = None
    example: str = "two_generator"
    point: str = "0.3,0.0,0.2,0.0"
    shells: Optional[int] = None
    k_max: int = 3
    samples: int = 8
    seed: int = 7
    quick: bool = False
    empirical: bool = True
    format: str = "json"
    output: Optional[str] = None
    threads: Optional[int] = None
    quad: QuadratureSpec = field(default_factory=QuadratureSpec)

    _key = "RunConfig"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"{self.command} is not a known command.")
        if self.format not in ("json", "csv"):
            raise ConfigError(f"{self.format} is not a known output format.")
        if int(self.k) < 1 or int(self.l) < 1 or int(self.k_max) < 1 or int(self.samples) < 1:
            raise ConfigError("k, l, k_max and samples must be positive.")
        if not abs(self.lam) > 1.0:
            raise ConfigError("lambda must have modulus above 1.")
        if self.command in ("validate", "classify") and self.matrix is None:
            raise ConfigError(f"{self.command} needs a matrix file.")

    @classmethod
    def from_dict(cls, dict_obj) -> "RunConfig":
        assert dict_obj["key"] == cls._key, "Keys are inconsistent. Are you trying to deserialize different type?"
        obj = dict(dict_obj["obj"])
        if "quad" in obj:
            obj["quad"] = QuadratureSpec.from_dict(obj["quad"])
        return RunConfig(**obj)

    def to_dict(self) -> dict:
        obj = asdict(self)
        obj["quad"] = self.quad.to_dict()
        return {"key": self.__class__._key, "obj": obj}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperball", description="Complex hyperbolic geometry checks on SU(2,1).")
    parser.add_argument("--output", help="Write the report to this file instead of stdout.")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--threads", type=parse_positive_int, help="Worker cap, overrides HYPERBALL_THREADS.")
    parser.add_argument("--log-level", default=HYPERBALL_LOG_LEVEL)
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("validate", "classify"):
        p = sub.add_parser(name)
        p.add_argument("matrix", nargs="?", help="JSON file with a matrix of [re, im] pairs.")
        p.add_argument("--matrix", dest="matrix_option", metavar="MATRIX", help="Same as the positional file.")

    p = sub.add_parser("bs-check")
    p.add_argument("--k", type=parse_positive_int, default=1)
    p.add_argument("--l", type=parse_positive_int, default=1)
    p.add_argument("--lambda", dest="lam", type=parse_positive_float, default=2.0)
    p.add_argument("--matrix", help="Hyperbolic element to use instead of the normal form of --lambda.")

    p = sub.add_parser("kernel-check")
    p.add_argument("--k", type=parse_positive_int, default=1)
    p.add_argument("--point", default="0.3,0.0,0.2,0.0")
    p.add_argument("--quad-rad", type=parse_positive_int, default=48)
    p.add_argument("--quad-ang", type=parse_positive_int, default=32)

    for name in ("series", "probe"):
        p = sub.add_parser(name)
        p.add_argument("--spec", help="JSON series config {k, l, gamma0, lattice}.")
        p.add_argument("--example", choices=("cyclic", "two_generator"), default="two_generator")
        p.add_argument("--shells", type=parse_positive_int)
        if name == "series":
            p.add_argument("--z", dest="point", default="0.3,0.0,0.2,0.0")
        else:
            p.add_argument("--k-max", type=parse_positive_int, default=3)
            p.add_argument("--samples", type=parse_positive_int, default=8)

    p = sub.add_parser("constants")
    p.add_argument("--k", type=parse_positive_int, default=1)
    p.add_argument("--l", type=parse_positive_int, default=1)
    p.add_argument("--lambda", dest="lam", type=parse_positive_float, default=2.0)
    p.add_argument("--no-empirical", dest="empirical", action="store_false")

    p = sub.add_parser("suite")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--quick", action="store_true", help="Skip invariants marked slow.")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__ and v is not None}
    if getattr(args, "matrix_option", None) is not None:
        if args.matrix is not None and args.matrix != args.matrix_option:
            raise ConfigError("Give the matrix file once, either positionally or with --matrix.")
        values["matrix"] = args.matrix_option
    if args.command == "kernel-check":
        values["quad"] = QuadratureSpec(args.quad_rad, args.quad_ang, 1e-5)
    return RunConfig(**values)


def _load_series(config: RunConfig) -> SeriesSpec:
    try:
        return _read_series(config)
    except (ParseError, ConfigError):
        raise
    except HyperballError as e:
        raise ConfigError(f"invalid series config: {e}")


def _read_series(config: RunConfig) -> SeriesSpec:
    if config.spec is None:
        return example_series(1, 1, config.example, max_word_length=config.shells or 5)
    raw = parse_json_file(config.spec)
    if type(raw) == dict and "key" in raw:
        spec = TypesHelper.from_dict_facade(raw)
    else:
        spec = SeriesSpec.from_config(raw)
    if not isinstance(spec, SeriesSpec):
        raise ConfigError(f"{config.spec} does not describe a series.")
    if config.shells is not None:
        lattice = LatticeSpec(spec.lattice.generators, config.shells, spec.lattice.dedup_tol)
        spec = SeriesSpec(spec.k, spec.l, spec.hyp, lattice)
    return spec


def _load_matrix(config: RunConfig) -> np.ndarray:
    raw = parse_json_file(config.matrix)
    if type(raw) == dict and raw.get("key") == GroupElement._key:
        raw = raw["obj"]["matrix"]
    return parse_matrix(raw)


def run_validate(config: RunConfig):
    matrix = _load_matrix(config)
    residual = group_residual(matrix)
    try:
        element = validate_group(matrix, Flavor.SU)
        return {"valid": True, "residual": element.residual}, True
    except HyperballError as e:
        logger.info(f"validation failed: {e}")
        return {"valid": False, "residual": getattr(e, "residual", residual)}, False


def run_classify(config: RunConfig):
    try:
        element = validate_group(_load_matrix(config), Flavor.U)
    except (ParseError, ConfigError):
        raise
    except HyperballError as e:
        raise ConfigError(f"invalid matrix: {e}")
    return classify_element(element).to_dict(), True


def _load_hyperbolic(config: RunConfig):
    if config.matrix is None:
        return hyperbolic_data(normal_form(config.lam)), False
    try:
        return hyperbolic_data(validate_group(_load_matrix(config), Flavor.U)), True
    except (ParseError, ConfigError):
        raise
    except HyperballError as e:
        raise ConfigError(f"invalid matrix: {e}")


def run_bs_check(config: RunConfig):
    hyp, on_lambda = _load_hyperbolic(config)
    spec = TorusSpec(config.k, config.l, hyp)
    residual = legendrian_residual(spec)
    loops = {f"theta_loop_{m}": bs_integral(spec, ThetaLoop(m), on_lambda=on_lambda) for m in (1, 2)}
    # The radial loop closes through the normal form only.
    loops["r_loop"] = bs_integral(spec, RLoop())
    passed = residual < 1e-8 and all(abs(loops[f"theta_loop_{m}"] + 3 * config.l * m) < 1e-6 for m in (1, 2)) \
        and abs(loops["r_loop"]) < 1e-6
    report = {"legendrian_residual": residual, "bs": loops, "lambda": spec.lam, "expected_theta_loop_1": -3 * config.l}
    return report, passed


def run_kernel_check(config: RunConfig):
    z = BallPoint(parse_ball_point(config.point))
    eta = complex((1.0 - z.norm2()) ** 1.5)
    partial, closed = kernel_double_series(config.k, Fraction(1, 5), Fraction(1, 5), 60)
    series_error = float(abs(closed - partial) / closed)
    residuals = {f"F_{l},{m},{config.k}": reproducing_check(BasisIndex(l, m, config.k), z, eta, config.quad,
                                                            config.threads)
                 for l, m in ((0, 0), (1, 1))}
    passed = series_error < 1e-8 and all(r < 1e-3 for r in residuals.values())
    return {"kernel_series_rel_error": series_error, "reproducing_residual": residuals}, passed


def run_series(config: RunConfig):
    spec = _load_series(config)
    z = BallPoint(parse_ball_point(config.point))
    reps = coset_reps(enumerate_group(spec.lattice), spec.gamma0)
    sums = theta_series(z, spec, reps, threads=config.threads)
    return [s.to_dict() for s in sums], True


def run_constants(config: RunConfig):
    hyp = hyperbolic_data(normal_form(config.lam))
    return constant_report(config.k, config.l, hyp, config.quad, config.empirical, config.threads), True


def run_probe(config: RunConfig):
    spec = _load_series(config)
    reps = coset_reps(enumerate_group(spec.lattice), spec.gamma0)
    points = torus_probe_points(spec, config.samples)
    rows = nonvanishing_probe(spec, reps, points, range(1, config.k_max + 1), config.threads)
    return [asdict(r) for r in rows], True


def _passed(entry: dict, value) -> bool:
    if entry["expect"] == "true":
        return bool(value)
    if entry["expect"] == "above":
        return bool(value > entry["threshold"])
    return bool(value < entry["threshold"])


def run_suite(config: RunConfig):
    with Helper.threads_default(config.threads):
        rows = [_suite_row(key, entry, config) for key, entry in registry.get_invariants().items()
                if not (config.quick and entry["slow"])]
    return rows, all(r["passed"] for r in rows)


def _suite_row(key: str, entry: dict, config: RunConfig) -> dict:
    rng = Helper.rng_for(config.seed, key)
    try:
        value = entry["method"](rng)
        passed = _passed(entry, value)
        error = ""
    except HyperballError as e:
        value, passed, error = float("nan"), False, f"{e.__class__.__name__}: {e}"
    logger.info(f"{key}: {value} ({'pass' if passed else 'FAIL'})")
    return {"key": key, "module": entry["module"], "name": entry["pretty_name"],
            "value": value if not isinstance(value, (bool, np.bool_)) else bool(value),
            "threshold": entry["threshold"], "expect": entry["expect"], "passed": passed, "error": error}


RUNNERS = {
    "validate": run_validate,
    "classify": run_classify,
    "bs-check": run_bs_check,
    "kernel-check": run_kernel_check,
    "series": run_series,
    "constants": run_constants,
    "probe": run_probe,
    "suite": run_suite,
}


def render(result, fmt: str) -> str:
    data = TypesHelper.value_to_json_compatible(result)
    if fmt == "json" or not isinstance(data, list):
        return json.dumps(data, indent=2, sort_keys=True) + "\n"
    buffer = io.StringIO()
    if data:
        columns = sorted(data[0].keys())
        writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for row in data:
            writer.writerow({c: json.dumps(row[c]) if isinstance(row[c], list) else row[c] for c in columns})
    return buffer.getvalue()


def run(config: RunConfig) -> int:
    try:
        result, passed = RUNNERS[config.command](config)
    except (ParseError, ConfigError) as e:
        logger.error(f"configuration error: {e}")
        return EXIT_CONFIG
    except HyperballError as e:
        logger.error(f"{config.command} failed: {e.__class__.__name__}: {e}")
        return EXIT_FAILED
    text = render(result, config.format)
    if config.output:
        Path(config.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK if passed else EXIT_FAILED


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(format="[%(module)-14s] %(message)s", level=str(args.log_level).upper())
    try:
        config = config_from_args(args)
    except HyperballError as e:
        logger.error(f"configuration error: {e}")
        return EXIT_CONFIG
    logger.debug(f"run config: {json.dumps(config.to_dict(), sort_keys=True)}")
    return run(config)


if __name__ == "__main__":
    sys.exit(main())

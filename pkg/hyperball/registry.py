import logging
import os
from inspect import signature, isclass

from .exceptions import InvariantRegistryError

logger = logging.getLogger(__name__)

EPS_GROUP = 1e-9
EPS_BALL = 1e-12
EPS_DEN = 1e-13
EPS_FIBER = 1e-9
EPS_SPECTRAL = 1e-8
NEAR_PARABOLIC = 1e-6

HYPERBALL_THREADS = int(os.getenv("HYPERBALL_THREADS", "0")) or (os.cpu_count() or 1)
HYPERBALL_LOG_LEVEL = os.getenv("HYPERBALL_LOG_LEVEL", "WARNING")

ALLOWED_MODULES = frozenset(("hermitian_core", "spectral", "bundle_geometry", "bs_torus", "coherent", "series",
                             "cli"))

ALLOWED_EXPECTATIONS = frozenset(("below", "above", "true"))


class InvariantRegistry(object):
    __instance__ = None

    def __init__(self):
        if InvariantRegistry.__instance__ is not None:
            raise AssertionError("this class is a singleton")
        self.__system_available_invariants = {}
        self.__system_available_json_reprs = {}
        self.__system_available_json_repr_bases = []

    @staticmethod
    def getInstance():
        """
        Invariant registry is globally available in application context. Suite invariants and json serializable
        types are registered here.

        :return: Global registry instance.
        :returntype: InvariantRegistry
        """
        if InvariantRegistry.__instance__ is None:
            InvariantRegistry.__instance__ = InvariantRegistry()
        return InvariantRegistry.__instance__

    def invariant(self, pretty_name, description, module, key=None, threshold=0.0, expect="below", slow=False):
        """
        Adds an invariant to the suite. The decorated function receives a seeded numpy generator and returns
        the measured quantity.

        :param pretty_name: Pretty name of the invariant.
        :param description: What the invariant measures.
        :param module: Module the invariant belongs to.
        :param key: Optional key. Defaults to the function name.
        :param threshold: Bound the measured value is compared against.
        :param expect: "below" (value < threshold), "above" (value > threshold) or "true" (truthy value).
        :param slow: Excluded from the quick suite.
        :return: A decorator object.
        """

        def w(method_def):
            nonlocal key
            assert len(signature(method_def).parameters) == 1, "Decorated invariant should accept 1 parameter."
            if module not in ALLOWED_MODULES:
                raise InvariantRegistryError(f"{module} is not a known module.")
            if expect not in ALLOWED_EXPECTATIONS:
                raise InvariantRegistryError(f"{expect} is not a known expectation.")
            key = str(key if key else method_def.__name__)
            if key in self.__system_available_invariants:
                raise InvariantRegistryError(f"Invariant {key} is already registered.")
            self.__system_available_invariants[key] = {
                "method": method_def,
                "pretty_name": str(pretty_name),
                "description": str(description),
                "module": module,
                "threshold": float(threshold),
                "expect": expect,
                "slow": bool(slow),
            }
            return method_def

        return w

    def _register_base(self, current_base):
        if isclass(current_base):
            self.__system_available_json_repr_bases.append(current_base)
        else:
            raise TypeError("Parameter must be a type.")
        return current_base

    def register_for_json(self, current_class):
        if any([issubclass(current_class, x) for x in self.__system_available_json_repr_bases]):
            self.__system_available_json_reprs[current_class._key] = current_class
        return current_class

    def get_invariants(self):
        """
        Get all invariants, ordered by key.
        :return: Dict of invariants.
        """
        return {k: self.__system_available_invariants[k] for k in sorted(self.__system_available_invariants)}

    def get_json_reprs(self):
        """
        Get all json representations.
        :return: Dict of representations.
        """
        return self.__system_available_json_reprs

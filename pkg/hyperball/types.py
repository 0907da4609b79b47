import abc
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exceptions import ConfigError, InvalidParameter
from .registry import InvariantRegistry

registry = InvariantRegistry.getInstance()


@registry._register_base
class DictSerializable(metaclass=abc.ABCMeta):
    _base_type = "DictSerializable"

    @property
    @abc.abstractmethod
    def _key(self):
        pass

    @classmethod
    @abc.abstractmethod
    def from_dict(cls, dict_obj) -> "DictSerializable":
        """
        Creates object from its dictionary representation.

        :param dict_obj: Input dictionary obj
        :return: Deserialized object.
        """
        pass

    @abc.abstractmethod
    def to_dict(self) -> dict:
        """
        Returns dictionary representation of the object.

        :return: Result dictionary object.
        """
        pass


class TypesHelper:
    @classmethod
    def value_to_json_compatible(cls, value):
        if isinstance(value, DictSerializable):
            return value.to_dict()
        if isinstance(value, np.ndarray):
            return [cls.value_to_json_compatible(x) for x in value.tolist()]
        if type(value) in (list, tuple):
            return [cls.value_to_json_compatible(x) for x in value]
        if type(value) == dict:
            return {str(k): cls.value_to_json_compatible(v) for k, v in value.items()}
        return cls._value_to_json_compatible_single(value)

    @classmethod
    def _value_to_json_compatible_single(cls, value):
        if isinstance(value, Fraction):
            return f"{value.numerator}/{value.denominator}"
        if isinstance(value, (complex, np.complexfloating)):
            return [float(value.real), float(value.imag)]
        if isinstance(value, (bool, np.bool_)):
            return bool(value)
        if isinstance(value, (int, np.integer)):
            return int(value)
        if isinstance(value, (float, np.floating)):
            return float(value)
        return value

    @classmethod
    def from_dict_facade(cls, dict_obj):
        dict_obj_mappings = registry.get_json_reprs()
        if type(dict_obj) != dict or "key" not in dict_obj:
            raise ConfigError("Serialized object must be a dict with a key attribute.")
        if dict_obj["key"] not in dict_obj_mappings:
            raise ConfigError(f"{dict_obj['key']} is not a known type for deserializing.")
        return dict_obj_mappings[dict_obj["key"]].from_dict(dict_obj)


@registry.register_for_json
@dataclass(frozen=True)
class QuadratureSpec(DictSerializable):
    """
    Node counts of the tensor rule on the ball: ``n_rad`` Gauss-Legendre nodes per radial variable and
    ``n_ang`` trapezoid nodes per angle.
    """
    n_rad: int = 64
    n_ang: int = 64
    tol: float = 1e-6

    _key = "QuadratureSpec"

    def __post_init__(self):
        if int(self.n_rad) < 2 or int(self.n_ang) < 2:
            raise InvalidParameter("Quadrature needs at least 2 nodes per variable.")
        if not self.tol > 0:
            raise InvalidParameter("Quadrature tolerance must be positive.")

    def halved(self) -> "QuadratureSpec":
        return QuadratureSpec(max(2, self.n_rad // 2), max(2, self.n_ang // 2), self.tol)

    def doubled(self) -> "QuadratureSpec":
        return QuadratureSpec(self.n_rad * 2, self.n_ang * 2, self.tol)

    @classmethod
    def from_dict(cls, dict_obj) -> "QuadratureSpec":
        assert dict_obj["key"] == cls._key, "Keys are inconsistent. Are you trying to deserialize different type?"
        obj = dict_obj["obj"]
        return QuadratureSpec(int(obj["n_rad"]), int(obj["n_ang"]), float(obj.get("tol", 1e-6)))

    def to_dict(self) -> dict:
        return {"key": self.__class__._key, "obj": {"n_rad": self.n_rad, "n_ang": self.n_ang, "tol": self.tol}}


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    est_error: float

    def to_dict(self) -> dict:
        return {"value": TypesHelper.value_to_json_compatible(complex(self.value)),
                "est_error": float(self.est_error)}

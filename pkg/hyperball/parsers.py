import json
from pathlib import Path

import numpy as np

from .exceptions import ParseError


def parse_complex(value):
    if value is None:
        return None
    if type(value) in (int, float):
        return complex(float(value), 0.0)
    if type(value) in (list, tuple) and len(value) == 2:
        try:
            return complex(float(value[0]), float(value[1]))
        except Exception as e:
            raise ParseError(e)
    raise ParseError("complex value must be a [re, im] pair or a real number.")


def parse_complex_list(value: list):
    if type(value) != list:
        raise ParseError("Value must be a list.")
    return np.array(list(map(lambda x: parse_complex(x), value)), dtype=complex)


def parse_matrix(value: list):
    if type(value) != list or len(value) == 0:
        raise ParseError("Matrix must be a non-empty list of rows.")
    rows = list(map(lambda x: parse_complex_list(x), value))
    if any([len(row) != len(rows) for row in rows]):
        raise ParseError("Matrix must be square.")
    return np.vstack(rows)


def parse_ball_point(value):
    """
    Parses ``"re1,im1,re2,im2,..."`` or a list of [re, im] pairs into a complex coordinate array.
    """
    if value is None:
        return None
    if type(value) == list:
        return parse_complex_list(value)
    try:
        parts = [float(x) for x in str(value).split(",") if len(x.strip()) > 0]
    except Exception as e:
        raise ParseError(e)
    if len(parts) == 0 or len(parts) % 2 != 0:
        raise ParseError("Ball point needs an even number of real components.")
    return np.array(parts[0::2], dtype=float) + 1j * np.array(parts[1::2], dtype=float)


def parse_positive_int(value):
    try:
        result = int(str(value))
    except Exception as e:
        raise ParseError(e)
    if result <= 0:
        raise ParseError(f"{value} is not a positive integer.")
    return result


def parse_positive_float(value):
    try:
        result = float(str(value))
    except Exception as e:
        raise ParseError(e)
    if not result > 0:
        raise ParseError(f"{value} is not a positive number.")
    return result


def parse_json_file(path):
    try:
        with Path(path).open("r", encoding="utf-8") as f:
            return json.load(f)
    except (OSError, ValueError) as e:
        raise ParseError(e)


def dump_matrix(matrix):
    return [[[float(x.real), float(x.imag)] for x in row] for row in np.asarray(matrix, dtype=complex)]

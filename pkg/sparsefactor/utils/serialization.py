"""
On-disk formats: JSON manifests and raw little-endian float64 blobs.
"""

import json
import os
from typing import Any, Optional, Tuple

import numpy as np

from ..errors import InputError

F64 = np.dtype('<f8')


def _ensure_parent(path: str) -> None:
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)


def write_json(path: str, payload: Any) -> None:
    """Write a JSON document, creating parent directories."""
    _ensure_parent(path)
    with open(path, 'w') as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")


def read_json(path: str) -> Any:
    try:
        with open(path, 'r') as f:
            return json.load(f)
    except FileNotFoundError:
        raise InputError(f"File '{path}' does not exist")
    except json.JSONDecodeError as e:
        raise InputError(f"Invalid JSON in '{path}': {e}")


def write_f64(path: str, values: np.ndarray) -> None:
    """Dump an array as flat little-endian float64."""
    _ensure_parent(path)
    np.ascontiguousarray(values, dtype=F64).tofile(path)


def read_f64(path: str, shape: Optional[Tuple[int, ...]] = None) -> np.ndarray:
    try:
        flat = np.fromfile(path, dtype=F64)
    except FileNotFoundError:
        raise InputError(f"File '{path}' does not exist")
    values = flat.astype(np.float64)
    if shape is None:
        return values
    expected = int(np.prod(shape))
    if values.size != expected:
        raise InputError(f"'{path}' holds {values.size} values, expected {expected}")
    return values.reshape(shape)

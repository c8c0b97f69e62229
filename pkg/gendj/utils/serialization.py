"""
Serialization helpers - deterministic JSON for reports and fixtures

Floats are rounded to a fixed number of significant digits and complex
numbers become [re, im] pairs, so identical runs produce identical bytes.
"""

import json
from dataclasses import asdict, is_dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Union

import numpy as np

from ..core.errors import FormatError

DEFAULT_FLOAT_DIGITS = 15


def round_float(value: float, digits: int = DEFAULT_FLOAT_DIGITS) -> float:
    """Round to `digits` significant digits; -0.0 collapses to 0.0"""
    rounded = float(format(float(value), f".{digits}g"))
    return rounded + 0.0


def complex_pair(value: complex, digits: int = DEFAULT_FLOAT_DIGITS) -> list:
    value = complex(value)
    return [round_float(value.real, digits), round_float(value.imag, digits)]


def to_jsonable(obj: Any, digits: int = DEFAULT_FLOAT_DIGITS) -> Any:
    """Recursively convert reports, numpy values and enums into JSON types"""
    if hasattr(obj, 'to_dict'):
        return to_jsonable(obj.to_dict(), digits)
    if is_dataclass(obj) and not isinstance(obj, type):
        return to_jsonable(asdict(obj), digits)
    if hasattr(obj, 'model_dump'):
        return to_jsonable(obj.model_dump(mode='python'), digits)
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v, digits) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v, digits) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return round_float(obj, digits)
    if isinstance(obj, (complex, np.complexfloating)):
        return complex_pair(obj, digits)
    if isinstance(obj, Path):
        return str(obj)
    return obj


def dumps(obj: Any, digits: int = DEFAULT_FLOAT_DIGITS) -> str:
    """Render `obj` as indented JSON with a trailing newline"""
    return json.dumps(to_jsonable(obj, digits), indent=2, allow_nan=False) + "\n"


def write_json(obj: Any, path: Union[str, Path], digits: int = DEFAULT_FLOAT_DIGITS) -> Path:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(obj, digits), encoding="utf-8")
    return path


def read_json(path: Union[str, Path]) -> Any:
    """Load a JSON document, mapping parse errors onto FormatError"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise FormatError(f"Cannot read {path}: {e}", {'path': str(path)}) from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"Invalid JSON in {path}: {e}", {'path': str(path), 'line': e.lineno}) from e


def parse_complex_pairs(pairs: Any) -> np.ndarray:
    """Decode a list of [re, im] pairs (or plain reals) into a complex array"""
    if not isinstance(pairs, list) or not pairs:
        raise FormatError("Expected a non-empty list of [re, im] pairs")
    values = []
    for item in pairs:
        if isinstance(item, (int, float)):
            values.append(complex(item, 0.0))
        elif isinstance(item, list) and len(item) == 2 and all(isinstance(p, (int, float)) for p in item):
            values.append(complex(item[0], item[1]))
        else:
            raise FormatError(f"Malformed amplitude entry: {item!r}")
    return np.asarray(values, dtype=np.complex128)

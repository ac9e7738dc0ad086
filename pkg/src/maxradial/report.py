"""Deterministic JSON and CSV emission.

Floats are written with 17 significant digits so that a report round-trips
bit for bit; non-finite floats become the strings "inf", "-inf" and "nan".
Key order is the insertion order of the producing code.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, is_dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

import numpy as np

__all__ = ["SCHEMA_VERSION", "to_plain", "dumps", "format_float", "csv_text"]

SCHEMA_VERSION = 1


def format_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    if x == 0:
        return "0.0" if math.copysign(1.0, x) > 0 else "-0.0"
    s = f"{x:.17g}"
    if "e" not in s and "." not in s:
        s += ".0"
    return s


def to_plain(obj: Any) -> Any:
    """Reduce reports, numpy values and fractions to dicts, lists and scalars."""
    if hasattr(obj, "to_json"):
        return to_plain(obj.to_json())
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if hasattr(obj, "_asdict"):
        return to_plain(obj._asdict())
    if is_dataclass(obj) and not isinstance(obj, type):
        return to_plain(asdict(obj))
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(obj: Any, out: list[str], indent: int, level: int) -> None:
    pad = "\n" + " " * (indent * (level + 1)) if indent else ""
    end = "\n" + " " * (indent * level) if indent else ""
    sep = ": " if indent else ":"
    if obj is None:
        out.append("null")
    elif obj is True or obj is False:
        out.append("true" if obj else "false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj))
    elif isinstance(obj, str):
        out.append(_quote(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            out.append(("," if i else "") + pad + _quote(k) + sep)
            _emit(v, out, indent, level + 1)
        out.append(end + "}")
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
            return
        flat = all(not isinstance(v, (dict, list)) for v in obj)
        out.append("[")
        for i, v in enumerate(obj):
            if flat:
                out.append(", " if i and indent else "," if i else "")
            else:
                out.append(("," if i else "") + pad)
            _emit(v, out, indent, level + 1)
        out.append(("" if flat else end) + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def _quote(s: str) -> str:
    return json.dumps(s, ensure_ascii=False)


def dumps(obj: Any, indent: int = 2) -> str:
    out: list[str] = []
    _emit(to_plain(obj), out, indent, 0)
    return "".join(out) + "\n"


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_float(float(v)).strip('"') if isinstance(v, (float, np.floating))
                    else v for v in row])
    return buf.getvalue()

"""Deterministic JSON and CSV emission.

JSON floats are printed with 17 significant digits and dict fields keep
insertion order, so identical inputs yield byte-identical output.  CSV
floats use the shortest round-trip representation; metadata rides in
leading comment lines.
"""

from __future__ import annotations

import math
from typing import Iterable


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "null"
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return "%.17g" % x


def json_text(obj) -> str:
    """Serialize nested dict/list/scalar structures deterministically."""
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        out = obj.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
        return f'"{out}"'
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, complex):
        return json_text({"re": obj.real, "im": obj.imag})
    if isinstance(obj, dict):
        inner = ", ".join(f"{json_text(str(k))}: {json_text(v)}" for k, v in obj.items())
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(json_text(v) for v in obj) + "]"
    try:
        import numpy as np

        if isinstance(obj, np.ndarray):
            return json_text(obj.tolist())
        if isinstance(obj, (np.floating,)):
            return _fmt_float(float(obj))
        if isinstance(obj, (np.integer,)):
            return str(int(obj))
        if isinstance(obj, (np.bool_,)):
            return "true" if obj else "false"
        if isinstance(obj, (np.complexfloating,)):
            return json_text(complex(obj))
    except ImportError:  # pragma: no cover
        pass
    raise TypeError(f"cannot serialize {type(obj)!r}")


def _csv_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "null" if math.isnan(v) else repr(v)
    if v is None:
        return "null"
    return str(v)


def csv_text(meta: dict, header: list[str], rows: Iterable[tuple]) -> str:
    lines = [f"# {k} = {v}" for k, v in meta.items()]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_csv_cell(v) for v in row))
    return "\n".join(lines) + "\n"

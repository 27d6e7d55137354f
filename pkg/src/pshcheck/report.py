"""Deterministic report serialization.

Reports must replay byte-identically for a fixed config, so floats are
written with 17 significant digits by a small emitter instead of relying
on library float repr.  Nonfinite values, which JSON cannot express, are
written as the strings "inf", "-inf", "nan"; complex numbers as
two-element [re, im] arrays.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .errors import ConfigError

SCHEMA = "pshcheck-report/1"
WALL_TIME_KEY = "wall_time_s"


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def _escape(s: str) -> str:
    out = []
    for ch in s:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    return "".join(out)


def to_plain(obj):
    """Recursively convert report objects to JSON-ready python structures."""
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, complex):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.complexfloating):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {
            f.name: to_plain(getattr(obj, f.name))
            for f in dataclasses.fields(obj)
        }
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    raise ConfigError(f"cannot serialize object of type {type(obj).__name__}")


def _emit(obj, out: list):
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_fmt_float(obj))
    elif isinstance(obj, str):
        out.append(f'"{_escape(obj)}"')
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(",")
            out.append(f'"{_escape(str(k))}":')
            _emit(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(",")
            _emit(v, out)
        out.append("]")
    else:
        raise ConfigError(f"cannot emit object of type {type(obj).__name__}")


def to_json(obj, drop: tuple[str, ...] = ()) -> str:
    """Serialize to a deterministic single-line JSON string.

    drop removes the named top-level keys first (used to exclude wall
    time from byte comparisons).
    """
    plain = to_plain(obj)
    if drop and isinstance(plain, dict):
        plain = {k: v for k, v in plain.items() if k not in drop}
    out: list[str] = []
    _emit(plain, out)
    return "".join(out)


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".17g")
    if isinstance(v, (list, tuple)):
        return ";".join(_csv_cell(x) for x in v)
    s = str(v)
    if any(c in s for c in ',"\n'):
        s = '"' + s.replace('"', '""') + '"'
    return s


def to_csv(header: list, rows: list) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_csv_cell(c) for c in row))
    return "\n".join(lines) + "\n"


def build_report(config: dict, result: dict, backend: str, wall_time_s: float) -> dict:
    from . import __version__

    return {
        "schema": SCHEMA,
        "tool_version": __version__,
        "backend": backend,
        "config": config,
        "result": result,
        WALL_TIME_KEY: wall_time_s,
    }


def verdict_csv(verdict_plain: dict, grid) -> str:
    """Flat per-point table for a check verdict.

    The witness columns are filled from the first witness whose point
    serializes identically to the grid point.
    """
    grid_plain = [to_plain(list(np.asarray(p).tolist())) for p in grid]
    by_point: dict[int, dict] = {}
    for w in verdict_plain.get("witnesses", []):
        for idx, gp in enumerate(grid_plain):
            if idx not in by_point and w["point"] == gp:
                by_point[idx] = w
                break
    header = [
        "point_index",
        "point",
        "status",
        "frame",
        "radii",
        "margin",
        "std_error",
        "escalated",
    ]
    rows = []
    statuses = verdict_plain.get("point_status", [])
    for idx, gp in enumerate(grid_plain):
        w = by_point.get(idx)
        rows.append(
            [
                idx,
                gp,
                statuses[idx] if idx < len(statuses) else "",
                w["frame"] if w else "",
                w["radii"] if w else "",
                w["margin"] if w else "",
                w["std_error"] if w else "",
                w["escalated"] if w else "",
            ]
        )
    return to_csv(header, rows)

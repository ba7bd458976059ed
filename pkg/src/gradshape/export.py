"""Deterministic CSV / JSON export of envelope meshes."""
from __future__ import annotations

import math

from .envelope import Mesh

MESH_COLUMNS = ("u", "v", "x", "y", "h", "s", "t", "frozen")


def _num(v) -> str:
    v = float(v)
    return f"{v:.17g}" if math.isfinite(v) else "nan"


def _json_num(v) -> str:
    v = float(v)
    return f"{v:.17g}" if math.isfinite(v) else "null"


def _rows(points):
    if isinstance(points, Mesh):
        return (points[k] for k in range(len(points)))
    return iter(points)


def mesh_csv(points) -> str:
    lines = [",".join(MESH_COLUMNS)]
    for p in _rows(points):
        z = complex(p.zeta)
        vals = (z.real, z.imag, p.x, p.y, p.h, p.s, p.t)
        lines.append(",".join(_num(v) for v in vals) + f",{int(bool(p.frozen))}")
    return "\n".join(lines) + "\n"


def mesh_json(points) -> str:
    items = []
    for p in _rows(points):
        z = complex(p.zeta)
        vals = (z.real, z.imag, p.x, p.y, p.h, p.s, p.t)
        body = ", ".join(f'"{k}": {_json_num(v)}' for k, v in zip(MESH_COLUMNS, vals))
        items.append("  {" + body + f', "frozen": {"true" if p.frozen else "false"}' + "}")
    if not items:
        return "[]\n"
    return "[\n" + ",\n".join(items) + "\n]\n"


def export_mesh(points, path, format: str = "csv") -> None:
    """Write envelope points (a :class:`Mesh` or a list of points) to ``path``.

    Rows keep the input order, which for a mesh is row-major over the
    parameter grid.  An empty input gives a header-only CSV or ``[]``.
    """
    if format == "csv":
        text = mesh_csv(points)
    elif format == "json":
        text = mesh_json(points)
    else:
        raise ValueError(f"unknown format {format!r}; expected csv or json")
    with open(path, "w", newline="") as fh:
        fh.write(text)

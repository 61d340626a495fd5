"""Run artifacts: legacy VTK snapshots, history CSV, run report.

All floating-point output uses 17 significant digits so re-running an
identical configuration reproduces byte-identical files.
"""

from __future__ import annotations

from typing import TextIO

import numpy as np

from .mesh import TriMesh
from .solver import StepRecord

__all__ = ["write_vtk", "HISTORY_COLUMNS", "history_row", "write_history"]

HISTORY_COLUMNS = (
    "step,u_bar,E_el,E_S,E_pen,E_total,min_alpha,max_alpha,"
    "stag_iters,tr_iters,crack_tip_x,crack_tip_y"
)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_vtk(stream: TextIO, mesh: TriMesh, u: np.ndarray, alpha: np.ndarray, title: str = "fraktur fields") -> None:
    """Legacy ASCII unstructured-grid snapshot with point scalars u and alpha."""
    n, m = mesh.n_vertices, mesh.n_triangles
    stream.write("# vtk DataFile Version 3.0\n")
    stream.write(title[:255] + "\n")
    stream.write("ASCII\nDATASET UNSTRUCTURED_GRID\n")
    stream.write(f"POINTS {n} double\n")
    for x, y in mesh.vertices:
        stream.write(f"{_fmt(x)} {_fmt(y)} 0\n")
    stream.write(f"CELLS {m} {4 * m}\n")
    for i, j, k in mesh.triangles:
        stream.write(f"3 {i} {j} {k}\n")
    stream.write(f"CELL_TYPES {m}\n")
    stream.write("5\n" * m)
    stream.write(f"POINT_DATA {n}\n")
    for name, values in (("u", u), ("alpha", alpha)):
        stream.write(f"SCALARS {name} double 1\nLOOKUP_TABLE default\n")
        for v in values:
            stream.write(_fmt(float(v)) + "\n")


def history_row(record: StepRecord) -> str:
    e = record.energies
    fields = (
        str(record.step),
        _fmt(record.u_bar),
        _fmt(e.elastic),
        _fmt(e.surface),
        _fmt(e.penalty),
        _fmt(e.total),
        _fmt(record.min_alpha),
        _fmt(record.max_alpha),
        str(record.stag_iters),
        str(record.tr_iters),
        _fmt(record.crack_tip[0]),
        _fmt(record.crack_tip[1]),
    )
    return ",".join(fields)


def write_history(stream: TextIO, records) -> None:
    stream.write(HISTORY_COLUMNS + "\n")
    for record in records:
        stream.write(history_row(record) + "\n")

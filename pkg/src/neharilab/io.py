"""CSV and JSON serialization with round-trip-exact floats.

Every float is printed with 17 significant digits so re-running a
command with the same inputs reproduces byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .domain import Grid

__all__ = [
    "fmt",
    "field_to_csv",
    "grid_to_csv",
    "spectrum_to_csv",
    "trajectory_to_csv",
    "basin_to_csv",
    "write_json",
]


def fmt(x) -> str:
    return format(float(x), ".17g")


def _coord_header(grid: Grid) -> list:
    return ["x", "y"][: grid.dim]


def field_to_csv(path, grid: Grid, u: np.ndarray) -> None:
    """One node per row: coordinates, Omega0 flag, value."""
    lines = [",".join(_coord_header(grid) + ["omega0", "value"])]
    for xy, flag, v in zip(grid.coords, grid.omega0_mask, u):
        lines.append(",".join([fmt(c) for c in xy] + [str(int(flag)), fmt(v)]))
    Path(path).write_text("\n".join(lines) + "\n")


def grid_to_csv(path, grid: Grid) -> None:
    """One node per row: coordinates, Omega0 flag, quadrature weight."""
    lines = [",".join(_coord_header(grid) + ["omega0", "weight"])]
    for xy, flag, w in zip(grid.coords, grid.omega0_mask, grid.weights):
        lines.append(",".join([fmt(c) for c in xy] + [str(int(flag)), fmt(w)]))
    Path(path).write_text("\n".join(lines) + "\n")


def spectrum_to_csv(path, spectrum) -> None:
    lines = ["index,eigenvalue,residual"]
    for i, (ev, r) in enumerate(zip(spectrum.eigenvalues, spectrum.residuals),
                                start=1):
        lines.append(f"{i},{fmt(ev)},{fmt(r)}")
    Path(path).write_text("\n".join(lines) + "\n")


def trajectory_to_csv(path, record) -> None:
    lines = ["t,energy,l2_norm,h1_norm,ut_norm,nehari_side"]
    for t, e, l2, h1, ut, side in zip(record.times, record.energies,
                                      record.l2_norms, record.h1_norms,
                                      record.ut_norms, record.nehari_sides):
        lines.append(f"{fmt(t)},{fmt(e)},{fmt(l2)},{fmt(h1)},{fmt(ut)},{side}")
    Path(path).write_text("\n".join(lines) + "\n")


def basin_to_csv(path, rows) -> None:
    lines = ["seed,nehari_side,l_class,b_class,classification,"
             "equilibrium,final_energy"]
    for r in rows:
        eq = r.equilibrium if r.equilibrium is not None else ""
        lines.append(f"{r.seed_id},{r.nehari_side},{r.l_class},{r.b_class},"
                     f"{r.classification},{eq},{fmt(r.final_energy)}")
    Path(path).write_text("\n".join(lines) + "\n")


class _FloatEncoder(json.JSONEncoder):
    def default(self, obj):
        if isinstance(obj, (np.floating,)):
            return float(obj)
        if isinstance(obj, (np.integer,)):
            return int(obj)
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        return super().default(obj)


def write_json(path, payload: dict) -> None:
    Path(path).write_text(
        json.dumps(payload, indent=2, sort_keys=True, cls=_FloatEncoder)
        + "\n")

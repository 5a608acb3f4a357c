"""Deterministic run artifacts: JSON reports, CSV series and snapshots.

Everything except ``manifest.json`` is a pure function of the config and the
build, so repeated runs give byte-identical files.
"""
import json
import math
import os
import platform
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .kernels import BACKEND

FLOAT_FMT = "%.17g"


def clean(obj):
    """Make ``obj`` strict-JSON safe: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    return obj


def write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(clean(obj), fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")


def write_table(path, columns, rows):
    with open(path, "w") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(FLOAT_FMT % float(v) for v in row) + "\n")


def write_series(path, series):
    write_table(path, series.columns(), series.rows())


def read_table(path):
    with open(path) as fh:
        header = fh.readline().strip().split(",")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return {name: data[:, i] for i, name in enumerate(header)}


def write_snapshots(directory, snapshots):
    os.makedirs(directory, exist_ok=True)
    index = []
    for i, s in enumerate(snapshots):
        name = f"snap_{i:05d}.csv"
        write_table(os.path.join(directory, name), ["x", "eta", "u", "v"],
                    np.column_stack([s.grid.x, s.eta, s.u, s.v]))
        index.append({"file": name, "t": float(s.t)})
    write_json(os.path.join(directory, "index.json"), index)


def read_snapshot(path, grid, t=0.0):
    from .state import FieldState

    cols = read_table(path)
    return FieldState(t=t, eta=cols["eta"], u=cols["u"], v=cols["v"], grid=grid)


def write_manifest(path, command, cfg, grid, extra=None):
    manifest = {
        "command": command,
        "created": datetime.now(timezone.utc).isoformat(),
        "version": __version__,
        "backend": BACKEND,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "config": cfg,
        "grid": {"L": grid.L, "n_points": grid.n_points, "dx": grid.dx, "k_nyquist": grid.k_nyquist},
        "scheme": {
            "space": "Fourier pseudospectral on a periodic box, 2/3-rule dealiasing of products",
            "time": "classical RK4, CFL-limited step",
            "form": cfg["model"]["form"],
        },
    }
    if extra:
        manifest.update(extra)
    write_json(path, manifest)

"""CSV and manifest I/O used by the command line front end.

Conventions: numeric CSVs are headerless and comma-separated; floats are
written with 17 significant digits so a write/read round trip reproduces
the exact double.  Label files hold one integer per line.  Overlap curves
are the one deliberate exception — they carry a ``k,score`` header row
because they are meant for plotting tools, not for feeding back in.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .evaluation import NosCurve

__all__ = [
    "read_labels",
    "read_matrix",
    "write_curve",
    "write_labels",
    "write_manifest",
    "write_matrix",
]

FLOAT_FORMAT = "%.17g"


def read_matrix(path) -> np.ndarray:
    """Read a headerless numeric CSV as a float64 2-D array."""
    try:
        m = np.loadtxt(path, delimiter=",", dtype=float, ndmin=2)
    except ValueError as exc:
        raise ValueError(f"malformed numeric CSV {path}: {exc}") from exc
    if m.size == 0:
        raise ValueError(f"empty CSV {path}")
    return m


def write_matrix(path, matrix) -> None:
    m = np.atleast_2d(np.asarray(matrix, dtype=float))
    np.savetxt(path, m, fmt=FLOAT_FORMAT, delimiter=",")


def read_labels(path) -> np.ndarray:
    """Read one integer label per line."""
    try:
        labels = np.loadtxt(path, dtype=int, ndmin=1)
    except ValueError as exc:
        raise ValueError(f"malformed label file {path}: {exc}") from exc
    if labels.ndim != 1:
        raise ValueError(f"label file {path} must hold one integer per line")
    return labels


def write_labels(path, labels) -> None:
    np.savetxt(path, np.asarray(labels, dtype=int), fmt="%d")


def write_curve(path, curve: NosCurve) -> None:
    """Write an overlap curve as ``k,score`` rows under a header."""
    rows = np.column_stack([curve.ks.astype(float), curve.scores])
    np.savetxt(
        path,
        rows,
        fmt=["%d", FLOAT_FORMAT],
        delimiter=",",
        header="k,score",
        comments="",
    )


def write_manifest(path, manifest: dict) -> None:
    Path(path).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")

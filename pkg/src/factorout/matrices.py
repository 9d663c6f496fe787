"""Dense symmetric distance matrices: construction, normalization, validation.

Every distance matrix in this package is a plain float64 ndarray of shape
(n, n) that is exactly symmetric, has an exactly zero diagonal, and contains
only finite, non-negative entries.  ``check_distance_matrix`` enforces those
invariants and is called at the boundary of every operation that consumes a
distance matrix, so the numerical code behind it never has to re-check.

Two relaxations show up in practice and are handled explicitly:

* label-derived matrices (``labels_to_distance``) put distance 0 between
  distinct same-class points, which breaks the identity-of-indiscernibles
  axiom; consumers in this package accept that, and ``validate_metric``
  reports it rather than hiding it;
* metrics computed in floating point can violate the triangle inequality by
  a few ulps, so ``validate_metric`` allows a tiny slack proportional to the
  largest entry.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

__all__ = [
    "ValidationReport",
    "check_data_matrix",
    "check_distance_matrix",
    "check_labels",
    "labels_to_distance",
    "normalize_max",
    "pairwise_euclidean",
    "pairwise_sq_euclidean",
    "validate_metric",
]

#: Relative slack (scaled by the largest entry) granted to triangle checks.
TRIANGLE_RTOL = 1e-12

#: Number of (i, j, k) triples sampled by validate_metric above the
#: exhaustive-size cutoff.
DEFAULT_SAMPLE_TRIPLES = 20_000

#: Largest n for which validate_metric checks every ordered triple.
EXHAUSTIVE_MAX_N = 50


def check_data_matrix(data) -> np.ndarray:
    """Validate a raw (n, d) sample matrix and return it as float64.

    Requires n >= 2 rows, d >= 1 columns and all-finite entries; the error
    for a non-finite entry names its position.
    """
    x = np.asarray(data, dtype=float)
    if x.ndim != 2:
        raise ValueError(f"data must be a 2-D array, got shape {x.shape}")
    n, d = x.shape
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")
    if d < 1:
        raise ValueError("need at least 1 feature column")
    if not np.isfinite(x).all():
        i, j = np.argwhere(~np.isfinite(x))[0]
        raise ValueError(f"non-finite value {x[i, j]} at row {i}, column {j}")
    return x


def check_distance_matrix(d) -> np.ndarray:
    """Validate a square distance matrix and return it as float64.

    Enforces exact symmetry, an exactly zero diagonal, finiteness and
    non-negativity.  Returns the validated array (a float64 view or copy).
    """
    m = np.asarray(d, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"distance matrix must be square, got shape {m.shape}")
    if m.shape[0] < 2:
        raise ValueError(f"distance matrix must be at least 2x2, got n={m.shape[0]}")
    if not np.isfinite(m).all():
        i, j = np.argwhere(~np.isfinite(m))[0]
        raise ValueError(f"non-finite distance {m[i, j]} at ({i}, {j})")
    if (m < 0).any():
        i, j = np.argwhere(m < 0)[0]
        raise ValueError(f"negative distance {m[i, j]} at ({i}, {j})")
    diag = np.diagonal(m)
    if (diag != 0).any():
        i = int(np.flatnonzero(diag != 0)[0])
        raise ValueError(f"nonzero diagonal entry {m[i, i]} at index {i}")
    if (m != m.T).any():
        i, j = np.argwhere(m != m.T)[0]
        raise ValueError(
            f"asymmetric entries at ({i}, {j}): {m[i, j]} != {m[j, i]}"
        )
    return m


def check_labels(labels, n: int | None = None) -> np.ndarray:
    """Validate an integer label vector, optionally against a sample count."""
    lab = np.asarray(labels)
    if lab.ndim != 1:
        raise ValueError(f"labels must be a 1-D vector, got shape {lab.shape}")
    if not np.issubdtype(lab.dtype, np.integer):
        as_int = lab.astype(int)
        if not np.array_equal(as_int, lab):
            raise ValueError("labels must be integers")
        lab = as_int
    if n is not None and lab.shape[0] != n:
        raise ValueError(f"expected {n} labels, got {lab.shape[0]}")
    return lab


def _mirror_upper(m: np.ndarray) -> np.ndarray:
    """Copy the strict upper triangle onto the lower one.

    Guarantees bitwise symmetry and an exactly zero diagonal regardless of
    rounding asymmetries in the producing kernel.
    """
    upper = np.triu(m, 1)
    return upper + upper.T


def pairwise_euclidean(data) -> np.ndarray:
    """Euclidean distance matrix of an (n, d) sample matrix.

    Distances are computed coordinate-difference-first (no gram shortcut),
    which keeps them accurate even for near-coincident rows; the result is
    mirrored so symmetry is exact.
    """
    x = check_data_matrix(data)
    return _mirror_upper(cdist(x, x))


def pairwise_sq_euclidean(points) -> np.ndarray:
    """Squared Euclidean distances via the gram identity, exactly symmetric.

    Fast path for low-dimensional coordinate arrays (embeddings), where the
    cancellation error of ``|a|^2 + |b|^2 - 2ab`` is negligible next to the
    kernel widths it feeds.  Clipped at zero, diagonal exactly zero.
    """
    y = np.asarray(points, dtype=float)
    if y.ndim != 2:
        raise ValueError(f"points must be a 2-D array, got shape {y.shape}")
    sq = np.einsum("ij,ij->i", y, y)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (y @ y.T)
    np.clip(d2, 0.0, None, out=d2)
    return _mirror_upper(d2)


def normalize_max(d) -> np.ndarray:
    """Scale a distance matrix so its largest entry is exactly 1.

    Raises on an all-zero matrix.  Idempotent up to float division, and
    order-preserving: the argsort of every row is unchanged.
    """
    m = check_distance_matrix(d)
    peak = m.max()
    if peak == 0.0:
        raise ValueError("cannot normalize an all-zero distance matrix")
    return m / peak


def labels_to_distance(labels) -> np.ndarray:
    """Binary distance matrix from class labels: 0 within a class, 1 across.

    The result is a pseudometric (distinct same-class points sit at distance
    zero); every consumer in this package accepts that relaxation.
    """
    lab = check_labels(labels)
    if lab.shape[0] < 2:
        raise ValueError("need at least 2 labels")
    d = (lab[:, None] != lab[None, :]).astype(float)
    return d


@dataclass
class ValidationReport:
    """Axiom-by-axiom account of how close a matrix is to a metric.

    Index lists hold the offending positions (possibly truncated views of
    very large violation sets are never produced here; sizes are bounded by
    the triple budget).  ``zero_offdiagonal`` records the identity-axiom
    relaxation used by label-derived matrices.
    """

    n: int
    exhaustive: bool
    triples_checked: int
    negative_entries: list[tuple[int, int]] = field(default_factory=list)
    asymmetric_pairs: list[tuple[int, int]] = field(default_factory=list)
    nonzero_diagonal: list[int] = field(default_factory=list)
    zero_offdiagonal: list[tuple[int, int]] = field(default_factory=list)
    triangle_violations: list[tuple[int, int, int]] = field(default_factory=list)

    @property
    def total_violations(self) -> int:
        return (
            len(self.negative_entries)
            + len(self.asymmetric_pairs)
            + len(self.nonzero_diagonal)
            + len(self.zero_offdiagonal)
            + len(self.triangle_violations)
        )

    @property
    def is_metric(self) -> bool:
        return self.total_violations == 0


def validate_metric(
    d,
    *,
    sample_triples: int = DEFAULT_SAMPLE_TRIPLES,
    seed: int = 0,
    tol: float = TRIANGLE_RTOL,
) -> ValidationReport:
    """Check the four metric axioms on a square matrix.

    Non-negativity, symmetry and the two directions of the identity axiom
    are checked exactly on every entry.  The triangle inequality
    ``d_ij <= d_ik + d_kj`` is checked on every ordered triple when
    n <= EXHAUSTIVE_MAX_N and on ``sample_triples`` seeded uniform triples
    otherwise, with absolute slack ``tol * max(d)``.

    Unlike :func:`check_distance_matrix` this never raises on bad geometry;
    it reports.  Input must still be a square float array.
    """
    m = np.asarray(d, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    n = m.shape[0]

    negative = [tuple(ij) for ij in np.argwhere(m < 0)]
    asym = [tuple(ij) for ij in np.argwhere(np.triu(m != m.T, 1))]
    nonzero_diag = [int(i) for i in np.flatnonzero(np.diagonal(m) != 0)]
    off = np.triu(m == 0, 1)
    zero_off = [tuple(ij) for ij in np.argwhere(off)]

    slack = tol * float(np.abs(m).max()) if m.size else 0.0
    if n <= EXHAUSTIVE_MAX_N:
        # Ordered-triple tensor: entry (i, j, k) tests d_ij > d_ik + d_kj.
        lhs = m[:, :, None]
        rhs = m[:, None, :] + m.T[None, :, :]
        bad = lhs > rhs + slack
        triangles = [tuple(t) for t in np.argwhere(bad)]
        checked = n * n * n
        exhaustive = True
    else:
        rng = np.random.default_rng(seed)
        i = rng.integers(0, n, size=sample_triples)
        j = rng.integers(0, n, size=sample_triples)
        k = rng.integers(0, n, size=sample_triples)
        bad = m[i, j] > m[i, k] + m[k, j] + slack
        triangles = [
            (int(a), int(b), int(c))
            for a, b, c in zip(i[bad], j[bad], k[bad])
        ]
        checked = sample_triples
        exhaustive = False

    return ValidationReport(
        n=n,
        exhaustive=exhaustive,
        triples_checked=checked,
        negative_entries=negative,
        asymmetric_pairs=asym,
        nonzero_diagonal=nonzero_diag,
        zero_offdiagonal=zero_off,
        triangle_violations=triangles,
    )

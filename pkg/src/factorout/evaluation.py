"""Neighborhood-overlap scoring: how much structure two views share.

For every point the k nearest neighbors are read off a distance matrix
(ties broken by ascending index, self excluded).  Sweeping k from 1 to
n - 1 and averaging the per-point overlap with a reference yields a curve
over neighborhood sizes:

* distance vs distance —  score(k) = mean_i |N_k^A(i) ∩ N_k^B(i)| / k;
* distance vs labels  —  score(k) = mean_i |N_k(i) ∩ L_i| / |L_i|,
  where L_i is the set of other points sharing i's label (points whose
  class has no other member contribute 0).

Both normalizations are chosen so that *unrelated* views trace the identity
line k / (n - 1) in expectation: for random neighborhoods the chance that a
specific other point lands in N_k(i) is k / (n - 1), which is also the
expected overlap fraction under either normalization.  The single summary
number is the signed area between the curve and that line — positive means
shared structure, near zero means none, and the distance-vs-distance curve
of a matrix against itself is the constant 1.

Everything is computed from rank matrices in O(n^2) total: the overlap
counts for all k at once are cumulative histograms of (element-wise maxima
of) neighbor ranks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrices import check_distance_matrix, check_labels

__all__ = [
    "NosCurve",
    "area_between",
    "knn_sets",
    "nos_distance",
    "nos_label",
]

#: Curves longer than this get strided down by default to bound CSV sizes.
DEFAULT_MAX_CURVE_POINTS = 2000


@dataclass
class NosCurve:
    """Overlap scores over neighborhood sizes, plus the area summary.

    ``ks`` holds the evaluated neighborhood sizes (a strided subgrid of
    1..n-1 for large n), ``scores`` the matching overlap means, and ``area``
    the mean signed excess over the identity line k / (n - 1).
    """

    ks: np.ndarray
    scores: np.ndarray
    n: int
    stride: int = 1
    area: float = 0.0


def area_between(curve: NosCurve) -> float:
    """Mean signed excess of a curve over the identity line k / (n - 1)."""
    identity = curve.ks / (curve.n - 1)
    return float(np.mean(curve.scores - identity))


def _rank_matrix(d: np.ndarray) -> np.ndarray:
    """rank[i, j] = position of j in i's ascending-distance order.

    Self-distances are lifted to +inf first, so each point's own rank is
    n - 1 (past every usable neighborhood) and all other ranks fill 0..n-2.
    Ties break by ascending index via stable sort.
    """
    n = d.shape[0]
    lifted = d.copy()
    np.fill_diagonal(lifted, np.inf)
    order = np.argsort(lifted, axis=1, kind="stable")
    rank = np.empty((n, n), dtype=np.int64)
    np.put_along_axis(rank, order, np.arange(n)[None, :], axis=1)
    return rank


def knn_sets(d, k: int) -> np.ndarray:
    """Index array (n, k) of each point's k nearest neighbors, self excluded."""
    m = check_distance_matrix(d)
    n = m.shape[0]
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must lie in [1, n-1] = [1, {n - 1}], got {k}")
    lifted = m.copy()
    np.fill_diagonal(lifted, np.inf)
    return np.argsort(lifted, axis=1, kind="stable")[:, :k]


def _pick_stride(n: int, stride: int | None) -> int:
    if stride is not None:
        if stride < 1:
            raise ValueError(f"stride must be >= 1, got {stride}")
        return stride
    return max(1, -(-(n - 1) // DEFAULT_MAX_CURVE_POINTS))


def _curve_from_counts(
    counts: np.ndarray, denom: np.ndarray, n: int, stride: int
) -> NosCurve:
    """Assemble a NosCurve from per-row cumulative overlap counts.

    ``counts[i, k-1]`` is |N_k(i) ∩ reference set|, ``denom`` the per-row
    (distance case: per-k, broadcast) normalizer.
    """
    ks = np.arange(1, n, stride)
    scores = (counts[:, ks - 1] / denom).mean(axis=0)
    curve = NosCurve(ks=ks, scores=scores, n=n, stride=stride)
    curve.area = area_between(curve)
    return curve


def nos_distance(d_a, d_b, stride: int | None = None) -> NosCurve:
    """Neighborhood overlap of two distance matrices over the same points.

    Symmetric in its arguments.  A matrix against itself scores 1 at every
    k; the curve always ends at 1 because the full neighborhood is everyone.
    """
    a = check_distance_matrix(d_a)
    b = check_distance_matrix(d_b)
    if a.shape != b.shape:
        raise ValueError(f"matrices disagree in size: {a.shape} vs {b.shape}")
    n = a.shape[0]
    stride = _pick_stride(n, stride)

    # j sits in both k-neighborhoods iff max(rank_a, rank_b) <= k - 1, so a
    # cumulative histogram of the rank maxima yields every k at once.
    worse = np.maximum(_rank_matrix(a), _rank_matrix(b))
    rows = np.repeat(np.arange(n), n)
    hist = np.zeros((n, n), dtype=np.int64)
    np.add.at(hist, (rows, worse.ravel()), 1)
    counts = np.cumsum(hist[:, : n - 1], axis=1)

    ks = np.arange(1, n, stride)
    return _curve_from_counts(counts, ks[None, :].astype(float), n, stride)


def nos_label(d, labels, stride: int | None = None) -> NosCurve:
    """Neighborhood recall of a label partition from a distance matrix.

    score(k) averages |N_k(i) ∩ L_i| / |L_i| over points; singleton-class
    points contribute 0.  High areas mean neighborhoods collect same-class
    points early — i.e. the labels are visible in the geometry.
    """
    m = check_distance_matrix(d)
    lab = check_labels(labels, m.shape[0])
    n = m.shape[0]
    stride = _pick_stride(n, stride)

    rank = _rank_matrix(m)
    same = lab[:, None] == lab[None, :]
    np.fill_diagonal(same, False)
    class_sizes = same.sum(axis=1)

    rows, cols = np.nonzero(same)
    hist = np.zeros((n, n), dtype=np.int64)
    np.add.at(hist, (rows, rank[rows, cols]), 1)
    counts = np.cumsum(hist[:, : n - 1], axis=1)

    denom = np.where(class_sizes > 0, class_sizes, 1)[:, None].astype(float)
    return _curve_from_counts(counts, denom, n, stride)

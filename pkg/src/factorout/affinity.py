"""Neighborhood affinities: Gaussian calibration and the Student-t kernel.

High-dimensional structure enters the embedding objectives as a joint
probability distribution P over ordered point pairs.  Each row i first gets
a Gaussian conditional

    p_{j|i} = exp(-d_ij^2 / (2 sigma_i^2)) / sum_{k != i} exp(-d_ik^2 / (2 sigma_i^2))

whose bandwidth sigma_i is found by binary search so that the row's
perplexity 2^H(P_i) — with H the Shannon entropy in bits — matches a target.
Conditionals are then symmetrized, p_ij = (p_{j|i} + p_{i|j}) / (2n).

Low-dimensional affinities use the heavy-tailed Student-t kernel with one
degree of freedom, q_ij = (1 + |y_i - y_j|^2)^-1 / Z, normalized over all
ordered pairs.

Both joint distributions are floored at EPS off the diagonal (without
re-normalizing) so that downstream logarithms and ratios stay finite; the
diagonal is exactly zero everywhere.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .matrices import check_distance_matrix, pairwise_sq_euclidean

__all__ = [
    "EPS",
    "CalibrationWarning",
    "ConditionalAffinity",
    "LowDimAffinity",
    "calibrate_conditional",
    "clamp_probabilities",
    "lowdim_affinity",
    "symmetrize",
]

#: Probability floor applied off-diagonal after normalization.
EPS = 1e-12

#: Bandwidth search bracket; rows that cannot reach the target inside this
#: range (or inside the iteration budget) are flagged, not failed.
SIGMA_MIN = 1e-20
SIGMA_MAX = 1e20

DEFAULT_TOL = 1e-5
DEFAULT_MAX_ITER = 200

_LN2 = float(np.log(2.0))


class CalibrationWarning(UserWarning):
    """Raised as a warning when a bandwidth search exhausts its budget."""


@dataclass
class ConditionalAffinity:
    """Row-stochastic conditional affinities with their fitted bandwidths.

    ``p`` has zero diagonal and rows summing to 1; ``unreached`` marks rows
    whose perplexity target could not be met within the search budget (their
    sigma is the last bisection midpoint).
    """

    p: np.ndarray
    sigmas: np.ndarray
    unreached: np.ndarray


@dataclass
class LowDimAffinity:
    """Joint Student-t affinities ``q`` and their normalizer ``z``.

    ``z`` is the sum of the unnormalized kernel over ordered pairs; it is
    exposed because gradient expressions reuse it.
    """

    q: np.ndarray
    z: float


def clamp_probabilities(p: np.ndarray) -> np.ndarray:
    """Floor off-diagonal entries at EPS, keep the diagonal exactly zero.

    Deliberately does not re-normalize: the floor exists to keep logs and
    ratios finite, and the mass it adds (< n^2 * EPS) is far below every
    tolerance in this package.
    """
    out = np.maximum(p, EPS)
    np.fill_diagonal(out, 0.0)
    return out


def _conditional_rows(
    d2: np.ndarray, sigmas: np.ndarray, rows: np.ndarray | None = None
) -> np.ndarray:
    """Row-normalized Gaussian affinities for given per-row bandwidths.

    ``rows`` selects a subset of rows to evaluate (sigmas indexed the same
    way); the bisection loop uses this to stop paying for converged rows.
    Logits are shifted by their row maximum before exponentiation, so rows
    whose distances are large relative to sigma do not underflow to 0/0.
    """
    if rows is None:
        rows = np.arange(d2.shape[0])
    logits = -d2[rows] / (2.0 * sigmas[:, None] ** 2)
    local = np.arange(rows.size)
    logits[local, rows] = -np.inf
    shift = logits.max(axis=1, keepdims=True)
    w = np.exp(logits - shift)
    w[local, rows] = 0.0
    return w / w.sum(axis=1, keepdims=True)


def _row_perplexity(p: np.ndarray) -> np.ndarray:
    """Perplexity 2^H of each row, H in bits; zero entries contribute zero."""
    with np.errstate(divide="ignore", invalid="ignore"):
        plogp = np.where(p > 0.0, p * np.log(np.where(p > 0.0, p, 1.0)), 0.0)
    h_bits = -plogp.sum(axis=1) / _LN2
    return np.exp2(h_bits)


def calibrate_conditional(
    d,
    perplexity: float,
    *,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> ConditionalAffinity:
    """Fit per-row Gaussian bandwidths to a common perplexity target.

    Parameters
    ----------
    d : array_like
        Validated-shape distance matrix (checked here).
    perplexity : float
        Target in (1, n).  Perplexity is monotone in sigma, so each row is
        solved by bracket-growing from sigma = 1 followed by bisection.
    tol : float
        Relative tolerance on the achieved perplexity.
    max_iter : int
        Per-row iteration budget (bracketing and bisection combined).

    A row whose off-diagonal distances are all zero has no usable geometry
    and raises; a row that merely fails to converge is flagged in
    ``unreached`` and triggers a CalibrationWarning.
    """
    m = check_distance_matrix(d)
    n = m.shape[0]
    if not (1.0 < perplexity < n):
        raise ValueError(
            f"perplexity must lie in (1, n) = (1, {n}), got {perplexity}"
        )

    d2 = m * m
    degenerate = ((d2 == 0.0) | np.eye(n, dtype=bool)).all(axis=1)
    if degenerate.any():
        row = int(np.flatnonzero(degenerate)[0])
        raise ValueError(
            f"row {row} has all-zero distances to every other point; "
            "cannot calibrate a bandwidth for it"
        )

    sig = np.ones(n)
    lo = np.zeros(n)  # largest sigma known to undershoot (0 = none yet)
    hi = np.full(n, np.inf)  # smallest sigma known to overshoot (inf = none)
    active = np.arange(n)

    for _ in range(max_iter):
        perp = _row_perplexity(_conditional_rows(d2, sig[active], active))
        hit = np.abs(perp - perplexity) <= tol * perplexity
        active = active[~hit]
        if active.size == 0:
            break
        perp = perp[~hit]
        under = perp < perplexity  # need a wider kernel
        lo[active[under]] = sig[active[under]]
        hi[active[~under]] = sig[active[~under]]
        bracketed = (lo[active] > 0.0) & np.isfinite(hi[active])
        mid = active[bracketed]
        grow = active[under & ~bracketed]
        shrink = active[~under & ~bracketed]
        sig[mid] = 0.5 * (lo[mid] + hi[mid])
        sig[grow] = np.minimum(sig[grow] * 2.0, SIGMA_MAX)
        sig[shrink] = np.maximum(sig[shrink] * 0.5, SIGMA_MIN)

    unreached = np.zeros(n, dtype=bool)
    unreached[active] = True
    if unreached.any():
        rows = np.flatnonzero(unreached)
        shown = ", ".join(map(str, rows[:8]))
        more = "" if rows.size <= 8 else f" (+{rows.size - 8} more)"
        warnings.warn(
            f"perplexity {perplexity} not reached within tolerance for "
            f"{rows.size} row(s): {shown}{more}; keeping last bandwidth",
            CalibrationWarning,
            stacklevel=2,
        )

    p = _conditional_rows(d2, sig)
    return ConditionalAffinity(p=p, sigmas=sig, unreached=unreached)


def symmetrize(cond: ConditionalAffinity | np.ndarray) -> np.ndarray:
    """Joint distribution p_ij = (p_{j|i} + p_{i|j}) / (2n), floored at EPS.

    Accepts either a ConditionalAffinity or its bare row-stochastic matrix.
    The result sums to 1 (plus the negligible floor mass), is symmetric,
    and has an exactly zero diagonal.
    """
    p_cond = cond.p if isinstance(cond, ConditionalAffinity) else np.asarray(cond, dtype=float)
    n = p_cond.shape[0]
    joint = (p_cond + p_cond.T) / (2.0 * n)
    return clamp_probabilities(joint)


def lowdim_affinity(y) -> LowDimAffinity:
    """Student-t joint affinities of a coordinate array.

    q_ij = (1 + |y_i - y_j|^2)^-1 / Z with Z summed over ordered pairs
    k != l, then floored at EPS off-diagonal.
    """
    d2 = pairwise_sq_euclidean(y)
    w = 1.0 / (1.0 + d2)
    np.fill_diagonal(w, 0.0)
    z = float(w.sum())
    q = clamp_probabilities(w / z)
    return LowDimAffinity(q=q, z=z)

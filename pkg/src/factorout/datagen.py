"""Synthetic benchmark data with two independent cluster structures.

Both generators emit samples carrying *two* labelings over disjoint feature
blocks, plus pure-noise tail dimensions.  Because the labelings are drawn
independently, either one can serve as the "prior" to factor out while the
other acts as the signal that should survive — which is exactly the
situation the embedding and distance operators in this package target.

``gen_main`` (d = 14) draws 4 + 4 cluster centers from N(0, 2) — the A
centers live in dimensions 0-7, the B centers in dimensions 8-11 — assigns
each sample one A and one B cluster with probabilities (0.1, 0.2, 0.3, 0.4),
and adds isotropic Gaussian noise whose standard deviation depends on the
cluster index (0.1, 0.2, 0.3, 0.4).  Dimensions 12-13 are N(0, 1) noise.

``gen_tuning`` (d = 10) is smaller and fully deterministic in its geometry:
A clusters at the four unit vectors of dimensions 0-3, B clusters at
(1/3, 0) and (0, 1/3) in dimensions 4-5, uniform assignment, noise stddev
0.1 everywhere, dimensions 6-9 N(0, 1) noise.  The much weaker B separation
is what makes this set useful for tuning: a method must actively remove the
A structure before B becomes visible.

All randomness flows through one ``numpy.random.default_rng`` seeded by the
caller, with a fixed draw order (centers, then labels, then noise blocks),
so a (n, seed) pair pins every byte of the output on any platform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SynthDataset",
    "gen_main",
    "gen_tuning",
]

#: Cluster pick probabilities shared by both labelings of the main set.
MAIN_CLUSTER_PROBS = (0.1, 0.2, 0.3, 0.4)

#: Per-cluster isotropic noise standard deviations of the main set.
MAIN_CLUSTER_STDDEVS = (0.1, 0.2, 0.3, 0.4)

#: Standard deviation of the main set's cluster-center coordinates (N(0, 2)).
MAIN_CENTER_STDDEV = float(np.sqrt(2.0))

TUNING_NOISE_STDDEV = 0.1


@dataclass
class SynthDataset:
    """Samples plus the two independent ground-truth labelings."""

    data: np.ndarray
    labels_a: np.ndarray
    labels_b: np.ndarray


def gen_main(n: int = 2000, seed: int = 0) -> SynthDataset:
    """Main benchmark set: d = 14, two 4-cluster structures plus noise."""
    if n < 2:
        raise ValueError(f"need n >= 2 samples, got {n}")
    rng = np.random.default_rng(seed)
    probs = np.asarray(MAIN_CLUSTER_PROBS)
    stds = np.asarray(MAIN_CLUSTER_STDDEVS)

    centers_a = rng.normal(0.0, MAIN_CENTER_STDDEV, size=(4, 8))
    centers_b = rng.normal(0.0, MAIN_CENTER_STDDEV, size=(4, 4))
    labels_a = rng.choice(4, size=n, p=probs)
    labels_b = rng.choice(4, size=n, p=probs)

    data = np.empty((n, 14))
    data[:, 0:8] = centers_a[labels_a] + stds[labels_a, None] * rng.standard_normal((n, 8))
    data[:, 8:12] = centers_b[labels_b] + stds[labels_b, None] * rng.standard_normal((n, 4))
    data[:, 12:14] = rng.standard_normal((n, 2))
    return SynthDataset(data=data, labels_a=labels_a, labels_b=labels_b)


def gen_tuning(n: int = 1000, seed: int = 0) -> SynthDataset:
    """Tuning set: d = 10, strong 4-cluster A vs weak 2-cluster B."""
    if n < 2:
        raise ValueError(f"need n >= 2 samples, got {n}")
    rng = np.random.default_rng(seed)

    centers_a = np.eye(4)
    centers_b = np.array([[1.0 / 3.0, 0.0], [0.0, 1.0 / 3.0]])
    labels_a = rng.integers(0, 4, size=n)
    labels_b = rng.integers(0, 2, size=n)

    data = np.empty((n, 10))
    data[:, 0:4] = centers_a[labels_a] + TUNING_NOISE_STDDEV * rng.standard_normal((n, 4))
    data[:, 4:6] = centers_b[labels_b] + TUNING_NOISE_STDDEV * rng.standard_normal((n, 2))
    data[:, 6:10] = rng.standard_normal((n, 4))
    return SynthDataset(data=data, labels_a=labels_a, labels_b=labels_b)

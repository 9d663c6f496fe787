"""Reading neighborhood-overlap curves.

For every neighborhood size k, the overlap score is the average fraction
of shared k-nearest neighbors between two views of the same samples.
Plotted against k it gives a curve; the area between that curve and the
chance line k/(n-1) is the headline number used throughout this package:

    area > 0   the views agree on neighborhoods (shared structure)
    area ~ 0   unrelated views
    area < 0   systematic avoidance (structure factored out *too* hard)

This script prints small curves for the canonical situations.
"""

import numpy as np

import factorout as fo


def show(name, curve, points=6):
    idx = np.linspace(0, len(curve.ks) - 1, points).astype(int)
    pairs = "  ".join(f"k={curve.ks[i]}:{curve.scores[i]:.2f}" for i in idx)
    print(f"{name:>18}:  area={curve.area:+.3f}   {pairs}")


def main():
    rng = np.random.default_rng(3)
    n = 200
    blobs = np.concatenate(
        [rng.normal(c, 0.4, size=(n // 4, 3)) for c in (0.0, 3.0, 6.0, 9.0)]
    )
    labels = np.repeat(np.arange(4), n // 4)
    d = fo.pairwise_euclidean(blobs)

    show("view vs itself", fo.nos_distance(d, d))

    noisy = fo.pairwise_euclidean(blobs + rng.normal(0.0, 0.2, size=blobs.shape))
    show("noisy copy", fo.nos_distance(d, noisy))

    unrelated = fo.pairwise_euclidean(rng.normal(size=(n, 3)))
    show("unrelated view", fo.nos_distance(d, unrelated))

    show("distances vs labels", fo.nos_label(d, labels))

    shuffled = rng.permutation(labels)
    show("shuffled labels", fo.nos_label(d, shuffled))

    print("\nCoarse grids for large n: stride subsamples k (areas stay close).")
    full = fo.nos_distance(d, noisy)
    coarse = fo.nos_distance(d, noisy, stride=20)
    print(f"  full grid: {len(full.ks)} points, area {full.area:+.4f}")
    print(f"  stride 20: {len(coarse.ks)} points, area {coarse.area:+.4f}")


if __name__ == "__main__":
    main()

"""Walk through the core use case: hide known structure, reveal the rest.

The synthetic benchmark set plants two independent cluster structures in
one data matrix: an A clustering over dims 0-7 (strong, dominates plain
t-SNE) and a B clustering over dims 8-11 (weaker).  We pretend the A
structure is already known, hand it to the embedders as a prior, and
check — by neighborhood-overlap areas — that the embeddings stop showing
A and start showing B.

Runs in roughly a minute at the default size below.
"""

import numpy as np

import factorout as fo
from factorout.confetti import ConfettiParams
from factorout.divergence import JediParams
from factorout.optimizer import OptimizerConfig

N = 300
SEED = 0


def report(name, embedding, d_nonprior, labels_a, labels_b):
    d_e = fo.pairwise_euclidean(embedding)
    area_prior = fo.nos_label(d_e, labels_a).area
    area_b = fo.nos_label(d_e, labels_b).area
    area_nonprior = fo.nos_distance(d_e, d_nonprior).area
    print(
        f"{name:>12}:  vs prior labels {area_prior:+.3f}   "
        f"vs hidden labels {area_b:+.3f}   vs non-prior dims {area_nonprior:+.3f}"
    )


def main():
    ds = fo.gen_main(N, seed=SEED)
    d_x = fo.pairwise_euclidean(ds.data)
    # The prior: what we already know — distances over the dominant block.
    d_prior = fo.pairwise_euclidean(ds.data[:, 0:8])
    # The payoff: structure the prior does not explain.
    d_nonprior = fo.pairwise_euclidean(ds.data[:, 8:12])
    cfg = OptimizerConfig(iterations=800, seed=SEED)

    print(f"n = {N}; areas are between the overlap curve and the chance line.")
    print("Positive = structure present in the embedding; ~0 = factored out.\n")

    y_plain, _ = fo.run_tsne(d_x, 50.0, cfg)
    report("plain t-SNE", y_plain, d_nonprior, ds.labels_a, ds.labels_b)

    y_jedi, _ = fo.run_jedi(d_x, d_prior, JediParams(), cfg)
    report("divergence", y_jedi, d_nonprior, ds.labels_a, ds.labels_b)

    adj = fo.confetti_apply(d_x, d_prior, ConfettiParams(1.0))
    y_blend, _ = fo.run_tsne(adj, 50.0, cfg)
    report("blended", y_blend, d_nonprior, ds.labels_a, ds.labels_b)

    print(
        "\nPlain t-SNE clings to the prior labels; both prior-aware routes"
        "\npush that area toward zero while keeping the non-prior area high."
    )


if __name__ == "__main__":
    main()

"""Momentum gradient descent for the embedding objectives.

Deliberately plain: fixed learning rate, a two-stage momentum schedule and
early exaggeration, with none of the adaptive per-coordinate gain schemes
some implementations add.  Runs are reproducible bit for bit for a fixed
seed and BLAS thread count — initial coordinates come from
``numpy.random.default_rng`` and every update is a dense vectorized
expression with a fixed evaluation order.

Early exaggeration multiplies the *data* affinities P for the first phase
(classic trick to let clusters form before fine-tuning); the prior
affinities P' are never exaggerated, and the recorded objective trace is
always the true, un-exaggerated objective.  A non-finite objective aborts
the run immediately with the iteration index — silently continuing from a
NaN would still produce an embedding, just a meaningless one.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .affinity import calibrate_conditional, lowdim_affinity, symmetrize
from .divergence import (
    JediParams,
    jedi_objective_and_gradient,
    kl_divergence,
    pjsd,
    pjsd_gradient,
    tsne_gradient,
)
from .errors import OptimizerDivergedError
from .matrices import check_distance_matrix

__all__ = [
    "OptimizerConfig",
    "RunTrace",
    "init_embedding",
    "run_jedi",
    "run_tsne",
]


@dataclass(frozen=True)
class OptimizerConfig:
    """Descent schedule; defaults follow the classic recipe."""

    iterations: int = 2000
    learning_rate: float = 200.0
    momentum_early: float = 0.5
    momentum_late: float = 0.8
    momentum_switch_iter: int = 250
    exaggeration_factor: float = 4.0
    exaggeration_iters: int = 100
    seed: int = 0
    init_stddev: float = 1e-2

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")
        if not self.learning_rate > 0.0:
            raise ValueError(f"learning_rate must be > 0, got {self.learning_rate}")
        for name in ("momentum_early", "momentum_late"):
            m = getattr(self, name)
            if not 0.0 <= m < 1.0:
                raise ValueError(f"{name} must lie in [0, 1), got {m}")
        if self.exaggeration_factor < 1.0:
            raise ValueError(
                f"exaggeration_factor must be >= 1, got {self.exaggeration_factor}"
            )
        if not self.init_stddev > 0.0:
            raise ValueError(f"init_stddev must be > 0, got {self.init_stddev}")


@dataclass
class RunTrace:
    """Per-iteration true objective plus run bookkeeping."""

    objectives: np.ndarray
    duration_seconds: float
    final_gradient_norm: float


def init_embedding(n: int, seed: int, stddev: float = 1e-2) -> np.ndarray:
    """Tight isotropic Gaussian start, (n, 2)."""
    if n < 2:
        raise ValueError(f"need at least 2 points, got {n}")
    if not stddev > 0.0:
        raise ValueError(f"stddev must be > 0, got {stddev}")
    rng = np.random.default_rng(seed)
    return stddev * rng.standard_normal((n, 2))


def _descend(
    p: np.ndarray,
    p_prior: np.ndarray | None,
    params: JediParams | None,
    config: OptimizerConfig,
) -> tuple[np.ndarray, RunTrace]:
    """Shared loop; p_prior None selects the plain KL objective."""
    start = time.perf_counter()
    n = p.shape[0]
    y = init_embedding(n, config.seed, config.init_stddev)
    velocity = np.zeros_like(y)
    objectives = np.empty(config.iterations)

    # Overflow inside the loop is an expected failure mode (a runaway step
    # sends coordinates past float range); it surfaces as a non-finite
    # objective and a clean abort, so the raw FP warnings are noise — the
    # finiteness check below is the real guard.
    with np.errstate(over="ignore", invalid="ignore"):
        for it in range(config.iterations):
            exaggerated = it < config.exaggeration_iters
            p_step = p * config.exaggeration_factor if exaggerated else p
            q = lowdim_affinity(y).q

            if p_prior is None:
                value = kl_divergence(p, q)
                grad = tsne_gradient(p_step, q, y)
            elif exaggerated:
                # Split evaluation: the gradient sees exaggerated P, the
                # trace must not.  P' enters both un-exaggerated.
                value = kl_divergence(p, q) - pjsd(
                    p_prior, q, params.alpha, params.beta
                )
                grad = tsne_gradient(p_step, q, y) - pjsd_gradient(
                    p_prior, q, y, params.alpha, params.beta
                )
            else:
                value, grad = jedi_objective_and_gradient(p, p_prior, q, y, params)

            if not np.isfinite(value):
                raise OptimizerDivergedError(it, value)
            objectives[it] = value

            momentum = (
                config.momentum_early
                if it < config.momentum_switch_iter
                else config.momentum_late
            )
            velocity = momentum * velocity - config.learning_rate * grad
            y = y + velocity

    # The loop's last gradient belongs to the pre-update coordinates;
    # report the norm at the returned embedding instead.
    q = lowdim_affinity(y).q
    if p_prior is None:
        final_grad = tsne_gradient(p, q, y)
    else:
        _, final_grad = jedi_objective_and_gradient(p, p_prior, q, y, params)
    trace = RunTrace(
        objectives=objectives,
        duration_seconds=time.perf_counter() - start,
        final_gradient_norm=float(np.linalg.norm(final_grad)),
    )
    return y, trace


def run_tsne(
    d,
    perplexity: float,
    config: OptimizerConfig = OptimizerConfig(),
) -> tuple[np.ndarray, RunTrace]:
    """Plain KL embedding of one distance matrix."""
    m = check_distance_matrix(d)
    p = symmetrize(calibrate_conditional(m, perplexity))
    return _descend(p, None, None, config)


def run_jedi(
    d_x,
    d_z,
    params: JediParams = JediParams(),
    config: OptimizerConfig = OptimizerConfig(),
) -> tuple[np.ndarray, RunTrace]:
    """Embedding of d_x with the d_z-derived structure factored out.

    Both matrices are calibrated with the same machinery; the prior gets its
    own (typically smaller) perplexity so the subtracted term reflects
    coarser neighborhoods.
    """
    mx = check_distance_matrix(d_x)
    mz = check_distance_matrix(d_z)
    if mx.shape != mz.shape:
        raise ValueError(
            f"data and prior matrices disagree in size: {mx.shape} vs {mz.shape}"
        )
    perp, prior_perp = params.resolve_perplexities(mx.shape[0])
    p = symmetrize(calibrate_conditional(mx, perp))
    p_prior = symmetrize(calibrate_conditional(mz, prior_perp))
    return _descend(p, p_prior, params, config)

"""Objectives and gradients: KL, a parameterized JS divergence, and their sum.

The embedding objective extends Kullback-Leibler-based neighborhood matching
with a *subtracted* similarity term against a prior distribution P', so that
structure already explained by the prior is pushed out of the embedding:

    C(Y) = KL(P || Q) - JS^alpha_beta(P' || Q)

The similarity term is a two-parameter Jensen-Shannon-type divergence

    JS^alpha_beta(P' || Q) = alpha * KL(P' || beta*Q + (1-beta)*P')
                           + (1-alpha) * KL(Q || beta*P' + (1-beta)*Q)

with alpha in [0, 1] weighting the two directions and beta in (0, 1)
controlling how far each argument is mixed toward the other.  Unlike raw KL
it is bounded: 0 <= JS^alpha_beta <= -ln(1 - beta), which keeps the
subtracted term from dominating the objective.

Gradients with respect to the embedding coordinates are closed-form.  The
KL part is the familiar Student-t expression

    dKL/dy_i = 4 * sum_j (p_ij - q_ij) * (1 + |y_i - y_j|^2)^-1 * (y_i - y_j)

and the JS part has the same 4 * sum_j (y_i - y_j) * w_ij * q_ij * [...]
shape, where the bracket couples the pair (i, j) to two global sums that are
hoisted out and computed once, keeping every gradient evaluation O(n^2).
Central finite differences in the test suite are the correctness authority
for both.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrices import pairwise_sq_euclidean

__all__ = [
    "JediParams",
    "jedi_objective_and_gradient",
    "kl_divergence",
    "pjsd",
    "pjsd_bound",
    "pjsd_gradient",
    "tsne_gradient",
]


@dataclass(frozen=True)
class JediParams:
    """Weights of the subtracted divergence and the affinity targets.

    ``perplexity`` / ``prior_perplexity`` of None resolve to n/5 and n/10
    at run time (they depend on the sample count), via
    :meth:`resolve_perplexities`.
    """

    alpha: float = 0.0
    beta: float = 0.99
    perplexity: float | None = None
    prior_perplexity: float | None = None

    def __post_init__(self):
        _check_alpha_beta(self.alpha, self.beta)
        for name in ("perplexity", "prior_perplexity"):
            value = getattr(self, name)
            if value is not None and not value > 1.0:
                raise ValueError(f"{name} must exceed 1, got {value}")

    def resolve_perplexities(self, n: int) -> tuple[float, float]:
        """Concrete (perplexity, prior_perplexity) for an n-point problem."""
        perp = self.perplexity if self.perplexity is not None else n / 5.0
        prior = (
            self.prior_perplexity
            if self.prior_perplexity is not None
            else n / 10.0
        )
        return perp, prior


def _check_alpha_beta(alpha: float, beta: float) -> None:
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    if not 0.0 < beta < 1.0:
        raise ValueError(f"beta must lie in the open interval (0, 1), got {beta}")


def _masked_log(x: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """log(x) where mask holds, 0 elsewhere (keeps 0 * log 0 terms silent)."""
    return np.log(np.where(mask, x, 1.0))


def kl_divergence(p, q) -> float:
    """KL(P || Q) = sum p * ln(p / q) over the support of p.

    Accepts any pair of same-shaped non-negative arrays; entries with
    p = 0 contribute zero regardless of q, and a q = 0 entry inside the
    support of p yields +inf, as it should.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError(f"shape mismatch: {p.shape} vs {q.shape}")
    support = p > 0.0
    with np.errstate(divide="ignore"):
        log_ratio = _masked_log(p, support) - np.where(
            support, np.log(q, where=support, out=np.zeros_like(q)), 0.0
        )
    return float(np.sum(p * np.where(support, log_ratio, 0.0)))


def pjsd(p_prior, q, alpha: float, beta: float) -> float:
    """Parameterized JS divergence JS^alpha_beta(P' || Q).

    Mixture denominators are strictly positive on each KL's support for any
    beta in (0, 1), so the value is always finite — that is the point of the
    construction.
    """
    _check_alpha_beta(alpha, beta)
    pp = np.asarray(p_prior, dtype=float)
    q = np.asarray(q, dtype=float)
    if pp.shape != q.shape:
        raise ValueError(f"shape mismatch: {pp.shape} vs {q.shape}")

    total = 0.0
    if alpha > 0.0:
        m1 = beta * q + (1.0 - beta) * pp
        sup = pp > 0.0
        total += alpha * float(
            np.sum(pp * np.where(sup, _masked_log(pp, sup) - _masked_log(m1, sup), 0.0))
        )
    if alpha < 1.0:
        m2 = beta * pp + (1.0 - beta) * q
        sup = q > 0.0
        total += (1.0 - alpha) * float(
            np.sum(q * np.where(sup, _masked_log(q, sup) - _masked_log(m2, sup), 0.0))
        )
    return total


def pjsd_bound(beta: float) -> float:
    """Upper bound -ln(1 - beta) of JS^alpha_beta for any alpha."""
    if not 0.0 < beta < 1.0:
        raise ValueError(f"beta must lie in the open interval (0, 1), got {beta}")
    return float(-np.log1p(-beta))


def _student_t_weights(y: np.ndarray) -> np.ndarray:
    """Unnormalized Student-t kernel (1 + |y_i - y_j|^2)^-1 with zero diagonal."""
    w = 1.0 / (1.0 + pairwise_sq_euclidean(y))
    np.fill_diagonal(w, 0.0)
    return w


def _pair_gradient(coupling: np.ndarray, y: np.ndarray) -> np.ndarray:
    """4 * sum_j coupling_ij * (y_i - y_j), vectorized over rows."""
    return 4.0 * (coupling.sum(axis=1)[:, None] * y - coupling @ y)


def tsne_gradient(p, q, y) -> np.ndarray:
    """Gradient of KL(P || Q(Y)) with respect to the coordinates Y."""
    y = np.asarray(y, dtype=float)
    coupling = (np.asarray(p, dtype=float) - np.asarray(q, dtype=float)) * _student_t_weights(y)
    return _pair_gradient(coupling, y)


def _pjsd_bracket(
    pp: np.ndarray,
    q: np.ndarray,
    offdiag: np.ndarray,
    log_q: np.ndarray,
    alpha: float,
    beta: float,
) -> np.ndarray:
    """Per-pair factor of the JS gradient, global sums included.

    All inputs are (n, n); diagonal entries of the result are meaningless
    (they are annihilated by q's zero diagonal downstream).
    """
    m2 = beta * pp + (1.0 - beta) * q
    log_m2 = _masked_log(m2, offdiag)
    ratio2 = np.where(offdiag, (1.0 - beta) * q / np.where(offdiag, m2, 1.0), 0.0)

    bracket = np.zeros_like(q)
    if alpha > 0.0:
        m1 = beta * q + (1.0 - beta) * pp
        ratio1 = np.where(offdiag, beta * pp / np.where(offdiag, m1, 1.0), 0.0)
        s1 = float(np.sum(ratio1 * q))
        bracket += alpha * (ratio1 - s1)
    if alpha < 1.0:
        local = -(1.0 + log_q) + ratio2 + log_m2
        s2 = float(np.sum(q * (1.0 + log_q - ratio2 - log_m2)))
        bracket += (1.0 - alpha) * (local + s2)
    return bracket


def pjsd_gradient(p_prior, q, y, alpha: float, beta: float) -> np.ndarray:
    """Gradient of JS^alpha_beta(P' || Q(Y)) with respect to Y.

    Q must be the Student-t affinity matrix of y (same floor policy as
    ``lowdim_affinity``); P' any joint with zero diagonal.
    """
    _check_alpha_beta(alpha, beta)
    pp = np.asarray(p_prior, dtype=float)
    q = np.asarray(q, dtype=float)
    y = np.asarray(y, dtype=float)
    n = q.shape[0]
    offdiag = ~np.eye(n, dtype=bool)
    log_q = _masked_log(q, offdiag)
    bracket = _pjsd_bracket(pp, q, offdiag, log_q, alpha, beta)
    coupling = q * _student_t_weights(y) * bracket
    return _pair_gradient(coupling, y)


def jedi_objective_and_gradient(
    p, p_prior, q, y, params: JediParams
) -> tuple[float, np.ndarray]:
    """Value and gradient of C(Y) = KL(P || Q) - JS^alpha_beta(P' || Q).

    Shares the kernel, logs and mixture terms between the value and the
    gradient so one call costs a single O(n^2) pass.
    """
    p = np.asarray(p, dtype=float)
    pp = np.asarray(p_prior, dtype=float)
    q = np.asarray(q, dtype=float)
    y = np.asarray(y, dtype=float)
    alpha, beta = params.alpha, params.beta
    n = q.shape[0]
    offdiag = ~np.eye(n, dtype=bool)

    log_q = _masked_log(q, offdiag)

    kl = float(np.sum(p * (_masked_log(p, offdiag & (p > 0.0)) - log_q)))

    js = 0.0
    if alpha > 0.0:
        m1 = beta * q + (1.0 - beta) * pp
        sup = pp > 0.0
        js += alpha * float(
            np.sum(pp * np.where(sup, _masked_log(pp, sup) - _masked_log(m1, sup), 0.0))
        )
    if alpha < 1.0:
        m2 = beta * pp + (1.0 - beta) * q
        js += (1.0 - alpha) * float(
            np.sum(q * (log_q - _masked_log(m2, offdiag)))
        )

    bracket = _pjsd_bracket(pp, q, offdiag, log_q, alpha, beta)
    coupling = ((p - q) - q * bracket) * _student_t_weights(y)
    grad = _pair_gradient(coupling, y)
    return kl - js, grad

"""Embeddings and distance adjustments that factor out prior knowledge.

Given high-dimensional data and a *prior* — anything expressible as a
distance matrix over the same points: class labels, a previous embedding,
known covariates — this package produces 2-D views of what the prior does
*not* already explain, two ways:

* an embedding objective that subtracts a bounded Jensen-Shannon-type
  similarity against the prior from the usual KL neighborhood matching
  (:func:`run_jedi`), and
* a direct distance-matrix blend that discounts pairs the prior already
  places together (:func:`confetti_apply`), feeding any downstream
  embedding (:func:`run_tsne`).

:func:`nos_distance` / :func:`nos_label` quantify how much of a given
structure survives in a view, and :func:`gen_main` / :func:`gen_tuning`
provide synthetic benchmarks with two independent planted structures.

Submodules are loaded lazily: importing :mod:`factorout` itself pulls in
no numerical dependencies, so the command line can pin BLAS thread counts
before numpy initializes.
"""

from __future__ import annotations

from importlib import import_module
from typing import TYPE_CHECKING

__version__ = "0.1.0"

_EXPORTS = {
    # matrices
    "ValidationReport": ".matrices",
    "check_data_matrix": ".matrices",
    "check_distance_matrix": ".matrices",
    "check_labels": ".matrices",
    "labels_to_distance": ".matrices",
    "normalize_max": ".matrices",
    "pairwise_euclidean": ".matrices",
    "pairwise_sq_euclidean": ".matrices",
    "validate_metric": ".matrices",
    # affinity
    "EPS": ".affinity",
    "CalibrationWarning": ".affinity",
    "ConditionalAffinity": ".affinity",
    "LowDimAffinity": ".affinity",
    "calibrate_conditional": ".affinity",
    "clamp_probabilities": ".affinity",
    "lowdim_affinity": ".affinity",
    "symmetrize": ".affinity",
    # divergence
    "JediParams": ".divergence",
    "jedi_objective_and_gradient": ".divergence",
    "kl_divergence": ".divergence",
    "pjsd": ".divergence",
    "pjsd_bound": ".divergence",
    "pjsd_gradient": ".divergence",
    "tsne_gradient": ".divergence",
    # optimizer
    "OptimizerConfig": ".optimizer",
    "RunTrace": ".optimizer",
    "init_embedding": ".optimizer",
    "run_jedi": ".optimizer",
    "run_tsne": ".optimizer",
    # errors
    "OptimizerDivergedError": ".errors",
    # confetti
    "ConfettiParams": ".confetti",
    "SlleParams": ".confetti",
    "UninformativeReport": ".confetti",
    "confetti_apply": ".confetti",
    "confetti_uninformative_check": ".confetti",
    "slle_inverse_adjust": ".confetti",
    # evaluation
    "NosCurve": ".evaluation",
    "area_between": ".evaluation",
    "knn_sets": ".evaluation",
    "nos_distance": ".evaluation",
    "nos_label": ".evaluation",
    # datagen
    "SynthDataset": ".datagen",
    "gen_main": ".datagen",
    "gen_tuning": ".datagen",
    # fileio
    "read_labels": ".fileio",
    "read_matrix": ".fileio",
    "write_curve": ".fileio",
    "write_labels": ".fileio",
    "write_manifest": ".fileio",
    "write_matrix": ".fileio",
}

__all__ = ["__version__", *sorted(_EXPORTS)]


def __getattr__(name: str):
    try:
        module = _EXPORTS[name]
    except KeyError:
        raise AttributeError(f"module {__name__!r} has no attribute {name!r}") from None
    value = getattr(import_module(module, __name__), name)
    globals()[name] = value
    return value


def __dir__():
    return sorted(set(globals()) | set(_EXPORTS))


if TYPE_CHECKING:  # pragma: no cover - static analysis only
    from .affinity import (
        EPS,
        CalibrationWarning,
        ConditionalAffinity,
        LowDimAffinity,
        calibrate_conditional,
        clamp_probabilities,
        lowdim_affinity,
        symmetrize,
    )
    from .confetti import (
        ConfettiParams,
        SlleParams,
        UninformativeReport,
        confetti_apply,
        confetti_uninformative_check,
        slle_inverse_adjust,
    )
    from .datagen import SynthDataset, gen_main, gen_tuning
    from .divergence import (
        JediParams,
        jedi_objective_and_gradient,
        kl_divergence,
        pjsd,
        pjsd_bound,
        pjsd_gradient,
        tsne_gradient,
    )
    from .errors import OptimizerDivergedError
    from .evaluation import NosCurve, area_between, knn_sets, nos_distance, nos_label
    from .fileio import (
        read_labels,
        read_matrix,
        write_curve,
        write_labels,
        write_manifest,
        write_matrix,
    )
    from .matrices import (
        ValidationReport,
        check_data_matrix,
        check_distance_matrix,
        check_labels,
        labels_to_distance,
        normalize_max,
        pairwise_euclidean,
        pairwise_sq_euclidean,
        validate_metric,
    )
    from .optimizer import (
        OptimizerConfig,
        RunTrace,
        init_embedding,
        run_jedi,
        run_tsne,
    )

"""Command-line front end.

Subcommands mirror the library: ``tsne`` and ``jedi`` produce embeddings,
``confetti`` and ``slle-adjust`` produce adjusted distance matrices,
``nos`` scores neighborhood overlap, ``datagen`` writes the synthetic
benchmark sets.  Every run writes a ``<out>.manifest.json`` next to its
primary output recording the command, all parameter values, input/output
paths, the seed and the wall-clock duration, and prints the same record as
one JSON line on stdout.

Exit codes: 0 on success, 1 for bad inputs (malformed CSV, size mismatch,
out-of-range parameter), 2 when a descent aborts on a non-finite objective.

Thread pinning: ``--threads`` (default 1) is applied by exporting the BLAS
thread-count environment variables *before* numpy is first imported, which
is why every handler imports the numeric modules lazily.  With
``--threads 1`` repeated runs are bitwise identical.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .errors import OptimizerDivergedError

__all__ = ["main"]

_THREAD_ENV_VARS = (
    "OMP_NUM_THREADS",
    "OPENBLAS_NUM_THREADS",
    "MKL_NUM_THREADS",
    "NUMEXPR_NUM_THREADS",
    "VECLIB_MAXIMUM_THREADS",
)


def _set_threads(count: int) -> None:
    if count < 1:
        raise ValueError(f"--threads must be >= 1, got {count}")
    import os

    for var in _THREAD_ENV_VARS:
        os.environ[var] = str(count)


def _finish(args, inputs: dict, outputs: dict, started: float, extra: dict | None = None) -> int:
    from . import __version__
    from .fileio import write_manifest

    parameters = {
        key: value
        for key, value in vars(args).items()
        if key not in ("handler",)
    }
    manifest = {
        "command": args.command,
        "version": __version__,
        "parameters": parameters,
        "inputs": inputs,
        "outputs": outputs,
        "seed": getattr(args, "seed", None),
        "duration_seconds": time.perf_counter() - started,
    }
    if extra:
        manifest.update(extra)
    write_manifest(args.out + ".manifest.json", manifest)
    print(json.dumps(manifest, sort_keys=True))
    return 0


def _load_distances(path: str, precomputed: bool):
    """Read a CSV as distances, deriving them from coordinates by default."""
    from .fileio import read_matrix
    from .matrices import check_distance_matrix, pairwise_euclidean

    raw = read_matrix(path)
    if precomputed:
        return check_distance_matrix(raw)
    return pairwise_euclidean(raw)


def _optimizer_config(args):
    from .optimizer import OptimizerConfig

    return OptimizerConfig(
        iterations=args.iters,
        learning_rate=args.learning_rate,
        exaggeration_iters=args.exaggeration_iters,
        seed=args.seed,
    )


def _cmd_tsne(args) -> int:
    from .fileio import write_matrix
    from .optimizer import run_tsne

    started = time.perf_counter()
    d = _load_distances(args.input, args.precomputed)
    y, trace = run_tsne(d, args.perplexity, _optimizer_config(args))
    write_matrix(args.out, y)
    return _finish(
        args,
        inputs={"input": args.input},
        outputs={"embedding": args.out},
        started=started,
        extra={"final_objective": float(trace.objectives[-1])},
    )


def _prior_distances(args):
    """Prior from either a matrix/coordinate CSV or a label file."""
    from .fileio import read_labels
    from .matrices import labels_to_distance

    if args.prior_labels is not None:
        return labels_to_distance(read_labels(args.prior_labels))
    return _load_distances(args.prior, args.prior_precomputed)


def _cmd_jedi(args) -> int:
    from .divergence import JediParams
    from .fileio import write_matrix
    from .optimizer import run_jedi

    started = time.perf_counter()
    d_x = _load_distances(args.input, args.precomputed)
    d_z = _prior_distances(args)
    params = JediParams(
        alpha=args.alpha,
        beta=args.beta,
        perplexity=args.perplexity,
        prior_perplexity=args.prior_perplexity,
    )
    y, trace = run_jedi(d_x, d_z, params, _optimizer_config(args))
    write_matrix(args.out, y)
    return _finish(
        args,
        inputs={"input": args.input, "prior": args.prior or args.prior_labels},
        outputs={"embedding": args.out},
        started=started,
        extra={"final_objective": float(trace.objectives[-1])},
    )


def _cmd_confetti(args) -> int:
    from .confetti import ConfettiParams, confetti_apply
    from .fileio import write_matrix

    started = time.perf_counter()
    d_x = _load_distances(args.input, args.precomputed)
    d_z = _prior_distances(args)
    adjusted = confetti_apply(d_x, d_z, ConfettiParams(args.lam))
    write_matrix(args.out, adjusted)
    return _finish(
        args,
        inputs={"input": args.input, "prior": args.prior or args.prior_labels},
        outputs={"distances": args.out},
        started=started,
    )


def _cmd_slle_adjust(args) -> int:
    from .confetti import SlleParams, slle_inverse_adjust
    from .fileio import read_labels, write_matrix

    started = time.perf_counter()
    d_x = _load_distances(args.input, args.precomputed)
    labels = read_labels(args.labels)
    adjusted = slle_inverse_adjust(d_x, labels, SlleParams(args.alpha))
    write_matrix(args.out, adjusted)
    return _finish(
        args,
        inputs={"input": args.input, "labels": args.labels},
        outputs={"distances": args.out},
        started=started,
    )


def _cmd_nos(args) -> int:
    from .evaluation import nos_distance, nos_label
    from .fileio import read_labels, write_curve

    started = time.perf_counter()
    d_a = _load_distances(args.a, args.a_precomputed)
    if args.b_labels is not None:
        curve = nos_label(d_a, read_labels(args.b_labels), stride=args.stride)
        second = args.b_labels
    else:
        d_b = _load_distances(args.b, args.b_precomputed)
        curve = nos_distance(d_a, d_b, stride=args.stride)
        second = args.b
    write_curve(args.out, curve)
    return _finish(
        args,
        inputs={"a": args.a, "b": second},
        outputs={"curve": args.out},
        started=started,
        extra={"area": curve.area},
    )


def _cmd_datagen(args) -> int:
    from .datagen import gen_main, gen_tuning
    from .fileio import write_labels, write_matrix

    started = time.perf_counter()
    if args.set == "main":
        n = args.n if args.n is not None else 2000
        dataset = gen_main(n=n, seed=args.seed)
    else:
        n = args.n if args.n is not None else 1000
        dataset = gen_tuning(n=n, seed=args.seed)
    write_matrix(args.out, dataset.data)
    write_labels(args.labels_a, dataset.labels_a)
    write_labels(args.labels_b, dataset.labels_b)
    return _finish(
        args,
        inputs={},
        outputs={
            "data": args.out,
            "labels_a": args.labels_a,
            "labels_b": args.labels_b,
        },
        started=started,
        extra={"n": n},
    )


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--threads",
        type=int,
        default=1,
        help="BLAS thread count (default 1; required for bitwise reproducibility)",
    )
    parser.add_argument("--out", required=True, help="primary output path")


def _add_optimizer_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--iters", type=int, default=2000, help="descent iterations")
    parser.add_argument("--seed", type=int, default=0, help="embedding init seed")
    parser.add_argument(
        "--learning-rate", type=float, default=200.0, help="descent step size"
    )
    parser.add_argument(
        "--exaggeration-iters",
        type=int,
        default=100,
        help="iterations with the data affinities multiplied by 4",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="factorout",
        description="2-D embeddings and distance adjustments that factor out prior knowledge",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tsne", help="plain KL embedding of one input")
    p.add_argument("--input", required=True, help="coordinate CSV (or distances with --precomputed)")
    p.add_argument("--precomputed", action="store_true", help="input is a distance matrix")
    p.add_argument("--perplexity", type=float, default=30.0)
    _add_optimizer_flags(p)
    _add_common(p)
    p.set_defaults(handler=_cmd_tsne)

    p = sub.add_parser("jedi", help="embedding with a prior factored out")
    p.add_argument("--input", required=True)
    p.add_argument("--precomputed", action="store_true", help="input is a distance matrix")
    prior = p.add_mutually_exclusive_group(required=True)
    prior.add_argument("--prior", help="prior coordinate/distance CSV")
    prior.add_argument("--prior-labels", help="prior as one integer label per line")
    p.add_argument(
        "--prior-precomputed", action="store_true", help="--prior is a distance matrix"
    )
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=0.99)
    p.add_argument("--perplexity", type=float, default=None, help="default n/5")
    p.add_argument("--prior-perplexity", type=float, default=None, help="default n/10")
    _add_optimizer_flags(p)
    _add_common(p)
    p.set_defaults(handler=_cmd_jedi)

    p = sub.add_parser("confetti", help="blend a prior out of a distance matrix")
    p.add_argument("--input", required=True)
    p.add_argument("--precomputed", action="store_true", help="input is a distance matrix")
    prior = p.add_mutually_exclusive_group(required=True)
    prior.add_argument("--prior", help="prior coordinate/distance CSV")
    prior.add_argument("--prior-labels", help="prior as one integer label per line")
    p.add_argument(
        "--prior-precomputed", action="store_true", help="--prior is a distance matrix"
    )
    p.add_argument("--lambda", dest="lam", type=float, default=2.0)
    _add_common(p)
    p.set_defaults(handler=_cmd_confetti)

    p = sub.add_parser("slle-adjust", help="push same-class pairs apart")
    p.add_argument("--input", required=True)
    p.add_argument("--precomputed", action="store_true", help="input is a distance matrix")
    p.add_argument("--labels", required=True, help="one integer label per line")
    p.add_argument("--alpha", type=float, default=0.5)
    _add_common(p)
    p.set_defaults(handler=_cmd_slle_adjust)

    p = sub.add_parser("nos", help="neighborhood-overlap curve of two views")
    p.add_argument("--a", required=True, help="first view (coordinates by default)")
    p.add_argument("--a-precomputed", action="store_true", help="--a is a distance matrix")
    second = p.add_mutually_exclusive_group(required=True)
    second.add_argument("--b", help="second view (coordinates by default)")
    second.add_argument("--b-labels", help="second view as labels, one per line")
    p.add_argument("--b-precomputed", action="store_true", help="--b is a distance matrix")
    p.add_argument("--stride", type=int, default=None, help="subsample the k grid")
    _add_common(p)
    p.set_defaults(handler=_cmd_nos)

    p = sub.add_parser("datagen", help="write a synthetic benchmark set")
    p.add_argument("--set", choices=("main", "tuning"), required=True)
    p.add_argument("--n", type=int, default=None, help="samples (default 2000 main / 1000 tuning)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--labels-a", required=True, help="output path for the A labels")
    p.add_argument("--labels-b", required=True, help="output path for the B labels")
    _add_common(p)
    p.set_defaults(handler=_cmd_datagen)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        _set_threads(args.threads)
        return args.handler(args)
    except OptimizerDivergedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())

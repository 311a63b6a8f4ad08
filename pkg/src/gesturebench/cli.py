"""Command-line interface.

Subcommands: evaluate (error rate of one layout), compare (table over many
layouts), train (fit the neural scorer), optimize (swap-schedule search).
All results are CSV on stdout or in --out files; every command is
deterministic for a fixed --seed.  Exit codes: 0 success, 1 runtime/IO
failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import classifier, evaluation, geometry, lexicon, optimizer, recognition, trajectory
from .errors import ParseError, UnknownLayoutError

INTERP_CHOICES = trajectory.ALL_METHODS


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("GESTUREBENCH_THREADS", "1")))
    except ValueError:
        return 1


def _add_model_flags(p: argparse.ArgumentParser, default_interp: str) -> None:
    p.add_argument("--lexicon", required=True, help="lexicon file (`word count` lines)")
    p.add_argument("--top", type=int, default=None, help="truncate to the top K words")
    p.add_argument(
        "--sigma-mode",
        choices=("area", "extent"),
        default="area",
        help="noise width: 0.25*sqrt(key area), or per-key extents",
    )
    p.add_argument(
        "--interp",
        default=default_interp,
        help=f"comma-separated interpolation methods ({', '.join(INTERP_CHOICES)})",
    )
    p.add_argument("--points", type=int, default=50, help="samples per input vector")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--threads", type=int, default=_default_threads())


def _add_eval_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--trials", type=int, default=5000, help="Monte Carlo trials")
    p.add_argument("--mode", choices=("brute", "radix"), default="radix")
    p.add_argument("--radix-vectors", type=int, default=20, help="pruning vectors per trial")
    p.add_argument("--scorer", choices=("euclidean", "network"), default="euclidean")
    p.add_argument("--model", default=None, help="model file (required for --scorer network)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gesturebench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("evaluate", help="error rate of one layout")
    p_eval.add_argument("--layout", required=True, help="layout file or built-in name")
    _add_model_flags(p_eval, default_interp="linear")
    _add_eval_flags(p_eval)
    p_eval.set_defaults(func=cmd_evaluate)

    p_cmp = sub.add_parser("compare", help="error-rate table over several layouts")
    p_cmp.add_argument(
        "--layouts",
        nargs="+",
        required=True,
        help="layout files, built-in names, or directories of .txt layouts",
    )
    p_cmp.add_argument(
        "--target-area", type=float, default=26.0, help="common total key area before evaluation"
    )
    _add_model_flags(p_cmp, default_interp="linear")
    _add_eval_flags(p_cmp)
    p_cmp.set_defaults(func=cmd_compare)

    p_train = sub.add_parser("train", help="train the neural scorer")
    p_train.add_argument("--layout", required=True, help="layout file or built-in name")
    _add_model_flags(p_train, default_interp=",".join(INTERP_CHOICES))
    p_train.add_argument("--pairs", type=int, required=True, help="training pairs (>= 10)")
    p_train.add_argument("--epochs", type=int, required=True)
    p_train.add_argument("--out", required=True, help="model file to write")
    p_train.set_defaults(func=cmd_train)

    p_opt = sub.add_parser("optimize", help="search key permutations for low error")
    p_opt.add_argument("--layout", required=True, help="base layout file or built-in name")
    _add_model_flags(p_opt, default_interp="linear")
    _add_eval_flags(p_opt)
    p_opt.add_argument("--iterations", type=int, default=200)
    p_opt.add_argument("--n-start", type=int, default=6)
    p_opt.add_argument("--restarts", type=int, default=1)
    p_opt.add_argument("--direction", choices=("min", "max"), default="min")
    p_opt.add_argument("--out", required=True, help="output directory")
    p_opt.set_defaults(func=cmd_optimize)
    return parser


def _load_layout_arg(name: str) -> geometry.KeyboardLayout:
    if name in geometry.builtin_names():
        return geometry.builtin_layout(name)
    path = Path(name)
    return geometry.load_layout(path.read_text(), name=path.stem)


def _load_lexicon_arg(args) -> lexicon.Lexicon:
    lex = lexicon.load_lexicon(Path(args.lexicon).read_text())
    if args.top is not None:
        if args.top < 1:
            raise _Usage("--top must be >= 1")
        lex, _ = lexicon.truncate_top(lex, args.top)
    return lex


class _Usage(Exception):
    pass


def _input_configs(args, layout) -> tuple[trajectory.InputModelConfig, ...]:
    methods = [m.strip() for m in args.interp.split(",") if m.strip()]
    if not methods:
        raise _Usage("--interp must name at least one method")
    for m in methods:
        if m not in INTERP_CHOICES:
            raise _Usage(f"unknown interpolation {m!r}")
    if args.points < 2:
        raise _Usage("--points must be >= 2")
    out = []
    for m in methods:
        if args.sigma_mode == "extent":
            out.append(
                trajectory.InputModelConfig(
                    sigma_x=0.0,
                    sigma_y=0.0,
                    interpolation=m,
                    n_points=args.points,
                    sigma_mode=trajectory.SIGMA_EXTENT,
                )
            )
        else:
            out.append(
                trajectory.area_scaled_config(layout, interpolation=m, n_points=args.points)
            )
    return tuple(out)


def _scorer(args) -> recognition.Scorer:
    if args.scorer == "network":
        if not args.model:
            raise _Usage("--scorer network requires --model")
        net = classifier.load_network(Path(args.model).read_text())
        return recognition.network_scorer(net)
    return recognition.euclidean_scorer()


def _eval_config(args, layout) -> evaluation.EvalConfig:
    if args.trials < 1:
        raise _Usage("--trials must be >= 1")
    if args.mode == "radix" and args.radix_vectors < 1:
        raise _Usage("--radix-vectors must be >= 1")
    return evaluation.EvalConfig(
        trials=args.trials,
        input_configs=_input_configs(args, layout),
        scorer=_scorer(args),
        mode=args.mode,
        radix_vectors=args.radix_vectors,
        seed=args.seed,
        threads=max(1, args.threads),
    )


def cmd_evaluate(args) -> int:
    layout = _load_layout_arg(args.layout)
    lex = _load_lexicon_arg(args)
    cfg = _eval_config(args, layout)
    est = evaluation.error_rate_mc(layout, lex, cfg)
    print(evaluation.CSV_HEADER)
    print(evaluation.csv_row(layout.name, cfg.mode, cfg.scorer.kind, est))
    return 0


def _expand_layout_args(names) -> list[str]:
    out = []
    for name in names:
        path = Path(name)
        if path.is_dir():
            out.extend(str(p) for p in sorted(path.glob("*.txt")))
        else:
            out.append(name)
    return out


def cmd_compare(args) -> int:
    names = _expand_layout_args(args.layouts)
    if not names:
        raise _Usage("no layouts given")
    if args.target_area <= 0:
        raise _Usage("--target-area must be positive")
    lex = _load_lexicon_arg(args)
    rows = []
    for name in names:
        layout = geometry.normalize_area(_load_layout_arg(name), args.target_area)
        cfg = _eval_config(args, layout)
        est = evaluation.error_rate_mc(layout, lex, cfg)
        rows.append((layout.name, est))
    rows.sort(key=lambda r: (r[1].rate, r[0]))
    print("layout,e,sigma")
    for name, est in rows:
        print(f"{name},{est.rate:.6f},{est.sigma:.6f}")
    return 0


def cmd_train(args) -> int:
    if args.pairs < 10:
        raise _Usage("--pairs must be >= 10")
    if args.epochs < 0:
        raise _Usage("--epochs must be >= 0")
    layout = _load_layout_arg(args.layout)
    lex = _load_lexicon_arg(args)
    cfgs = list(_input_configs(args, layout))
    rng = np.random.default_rng((args.seed, 0))
    tset = classifier.build_training_set(lex, layout, cfgs, args.pairs, rng)
    net = classifier.new_network(np.random.default_rng((args.seed, 1)))
    net, losses = classifier.train_rprop(net, tset.pairs, args.epochs)
    Path(args.out).write_text(classifier.save_network(net))
    print("epoch,mse")
    for i, loss in enumerate(losses):
        print(f"{i},{loss:.8f}")
    final = losses[-1] if losses else classifier.mse_loss(net, tset.pairs)
    print(
        f"final mse {final:.8f} ({tset.fallback_count} similar-pair fallbacks)",
        file=sys.stderr,
    )
    return 0


def cmd_optimize(args) -> int:
    if args.iterations < 1:
        raise _Usage("--iterations must be >= 1")
    if args.n_start < 1:
        raise _Usage("--n-start must be >= 1")
    if args.restarts < 1:
        raise _Usage("--restarts must be >= 1")
    layout = _load_layout_arg(args.layout)
    lex = _load_lexicon_arg(args)
    cfg = _eval_config(args, layout)
    schedule = optimizer.Schedule(
        iterations=args.iterations,
        n_start=args.n_start,
        direction=optimizer.MINIMIZE if args.direction == "min" else optimizer.MAXIMIZE,
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    result = optimizer.multi_start(args.restarts, layout, lex, cfg, schedule)

    trace_lines = ["restart,iteration,n_swaps,accepted,e,sigma"]
    for r, run in enumerate(result.runs):
        for rec in run.trace:
            trace_lines.append(
                f"{r},{rec.iteration},{rec.n_swaps},{int(rec.accepted)},"
                f"{rec.error:.6f},{rec.sigma:.6f}"
            )
    (out_dir / "trace.csv").write_text("\n".join(trace_lines) + "\n")

    summary_lines = ["iteration,min_e,mean_e,max_e"]
    for it, lo, mean, hi in result.summary():
        summary_lines.append(f"{it},{lo:.6f},{mean:.6f},{hi:.6f}")
    (out_dir / "summary.csv").write_text("\n".join(summary_lines) + "\n")

    finals = [run.incumbent_errors[-1] for run in result.runs]
    starts = [run.incumbent_errors[0] for run in result.runs]
    pick = int(np.argmin(finals) if schedule.direction == optimizer.MINIMIZE else np.argmax(finals))
    best = result.runs[pick].best_layout
    (out_dir / "best_layout.txt").write_text(geometry.dump_layout(best))
    print(
        f"restarts={args.restarts} iterations={args.iterations} "
        f"mean_start={float(np.mean(starts)):.6f} mean_final={float(np.mean(finals)):.6f} "
        f"best_final={finals[pick]:.6f} direction={args.direction}"
    )
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _Usage as e:
        parser.error(str(e))  # exits 2
    except (FileNotFoundError, IsADirectoryError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (ParseError, UnknownLayoutError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

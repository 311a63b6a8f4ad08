"""Stochastic search over key permutations to minimize (or maximize) the
Monte Carlo error rate.

Each iteration swaps n disjoint key pairs, re-measures the error rate with a
fresh per-iteration seed, and keeps the new layout only on strict
improvement.  The swap count starts high and decrements at fixed intervals,
so late iterations differ by single swaps.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field, replace

import numpy as np

from .evaluation import ErrorEstimate, EvalConfig, error_rate_mc
from .geometry import Key, KeyboardLayout
from .lexicon import Lexicon
from .pruning import RadixTree, build_radix_tree

MINIMIZE = "minimize"
MAXIMIZE = "maximize"


@dataclass(frozen=True)
class Schedule:
    iterations: int = 200
    n_start: int = 6
    decrement_interval: int | None = None  # default: floor(iterations / n_start)
    direction: str = MINIMIZE

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.n_start < 1:
            raise ValueError("n_start must be >= 1")
        if self.decrement_interval is not None and self.decrement_interval < 1:
            raise ValueError("decrement_interval must be >= 1")
        if self.direction not in (MINIMIZE, MAXIMIZE):
            raise ValueError(f"direction must be {MINIMIZE} or {MAXIMIZE}")

    @property
    def interval(self) -> int:
        if self.decrement_interval is not None:
            return self.decrement_interval
        return max(1, self.iterations // self.n_start)

    def swaps_at(self, iteration: int) -> int:
        return max(1, self.n_start - iteration // self.interval)


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    n_swaps: int
    accepted: bool
    error: float  # candidate layout's measured rate
    sigma: float


@dataclass
class OptRun:
    best_layout: KeyboardLayout
    start_estimate: ErrorEstimate
    trace: list[IterationRecord]
    seed: int

    @property
    def incumbent_errors(self) -> list[float]:
        """Error of the kept layout after each iteration, index 0 = start."""
        series = [self.start_estimate.rate]
        for rec in self.trace:
            series.append(rec.error if rec.accepted else series[-1])
        return series


def _child_seed(master: int, index: int) -> int:
    state = np.random.SeedSequence([master, index]).generate_state(2, np.uint32)
    return int(state.view(np.uint64)[0])


def random_permutation(layout: KeyboardLayout, rng: np.random.Generator) -> KeyboardLayout:
    """Random reassignment of the 26 letters to the layout's key positions."""
    perm = rng.permutation(26)
    keys = []
    for i, letter in enumerate(string.ascii_lowercase):
        src = layout.keys[perm[i]]
        keys.append(Key(letter, src.center_x, src.center_y, src.width, src.height, src.shape))
    return KeyboardLayout(f"{layout.name}-perm", tuple(keys))


def _draw_swap_pairs(rng: np.random.Generator, n: int) -> list[tuple[str, str]]:
    letters = rng.permutation(26)[: 2 * n]
    return [
        (chr(97 + int(letters[2 * i])), chr(97 + int(letters[2 * i + 1]))) for i in range(n)
    ]


def optimize(
    start: KeyboardLayout,
    lex: Lexicon,
    eval_cfg: EvalConfig,
    schedule: Schedule,
    rng: np.random.Generator,
    tree: RadixTree | None = None,
) -> OptRun:
    """Swap-schedule search from a start layout.

    Every candidate is measured with a fresh seed derived from
    (eval_cfg.seed, iteration); the incumbent's error is not re-measured, so
    accepted errors are non-increasing in minimize mode by construction.
    """
    from .geometry import swap_keys

    if tree is None and eval_cfg.mode == "radix":
        tree = build_radix_tree(lex)
    minimize = schedule.direction == MINIMIZE

    def measure(layout: KeyboardLayout, index: int) -> ErrorEstimate:
        cfg = replace(eval_cfg, seed=_child_seed(eval_cfg.seed, index))
        return error_rate_mc(layout, lex, cfg, tree)

    current = start
    start_estimate = measure(start, 0)
    current_rate = start_estimate.rate
    trace: list[IterationRecord] = []
    for it in range(schedule.iterations):
        n_swaps = schedule.swaps_at(it)
        candidate = swap_keys(current, _draw_swap_pairs(rng, n_swaps))
        est = measure(candidate, it + 1)
        better = est.rate < current_rate if minimize else est.rate > current_rate
        if better:
            current = candidate
            current_rate = est.rate
        trace.append(
            IterationRecord(
                iteration=it,
                n_swaps=n_swaps,
                accepted=better,
                error=est.rate,
                sigma=est.sigma,
            )
        )
    return OptRun(
        best_layout=current, start_estimate=start_estimate, trace=trace, seed=eval_cfg.seed
    )


@dataclass
class MultiStartResult:
    runs: list[OptRun]

    def summary(self) -> list[tuple[int, float, float, float]]:
        """(iteration, min, mean, max) of incumbent errors across runs."""
        series = np.array([run.incumbent_errors for run in self.runs])
        return [
            (i, float(col.min()), float(col.mean()), float(col.max()))
            for i, col in enumerate(series.T)
        ]


def multi_start(
    restarts: int,
    base_layout: KeyboardLayout,
    lex: Lexicon,
    eval_cfg: EvalConfig,
    schedule: Schedule,
    tree: RadixTree | None = None,
) -> MultiStartResult:
    """Independent seeded runs from random permutations of a base layout."""
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    if tree is None and eval_cfg.mode == "radix":
        tree = build_radix_tree(lex)
    runs = []
    for r in range(restarts):
        run_seed = _child_seed(eval_cfg.seed, 0x5EED + r)
        rng = np.random.default_rng((run_seed, 0))
        start = random_permutation(base_layout, rng)
        cfg = replace(eval_cfg, seed=run_seed)
        runs.append(optimize(start, lex, cfg, schedule, rng, tree))
    return MultiStartResult(runs=runs)

"""Monte Carlo estimation of a layout's gesture recognition error rate.

Each trial samples a word by frequency, generates a randomized gesture for
it, reconstructs the gesture against a candidate set (the whole lexicon in
brute mode, the radix-pruned set in radix mode), and counts mismatches.
Trials use independent substreams keyed by (master seed, trial index), so
results are identical for any worker count.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .geometry import KeyboardLayout
from .lexicon import Lexicon, sample_word, truncate_top
from .pruning import RadixTree, build_radix_tree, string_form_candidates
from .recognition import PerfectVectorCache, Scorer, recognize_cached
from .trajectory import InputModelConfig, random_vector

MODE_BRUTE = "brute"
MODE_RADIX = "radix"


def uncertainty(n: int, trials: int) -> float:
    """Binomial standard deviation of the rate estimate n/trials."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= n <= trials:
        raise ValueError("need 0 <= n <= trials")
    e = n / trials
    return math.sqrt(e * (1.0 - e) / trials)


@dataclass(frozen=True)
class ErrorEstimate:
    errors: int
    trials: int
    forced_inclusions: int = 0
    wall_time: float = 0.0

    def __post_init__(self):
        if not 0 <= self.errors <= self.trials:
            raise ValueError("need 0 <= errors <= trials")

    @property
    def rate(self) -> float:
        return self.errors / self.trials

    @property
    def sigma(self) -> float:
        return uncertainty(self.errors, self.trials)


CSV_HEADER = "layout,mode,scorer,N,n,e,sigma,seconds"


def csv_row(layout_name: str, mode: str, scorer_kind: str, est: ErrorEstimate) -> str:
    return (
        f"{layout_name},{mode},{scorer_kind},{est.trials},{est.errors},"
        f"{est.rate:.6f},{est.sigma:.6f},{est.wall_time:.3f}"
    )


def parse_csv_row(row: str) -> ErrorEstimate:
    parts = row.split(",")
    if len(parts) != 8:
        raise ValueError(f"expected 8 fields, got {len(parts)}")
    est = ErrorEstimate(errors=int(parts[4]), trials=int(parts[3]), wall_time=float(parts[7]))
    if abs(est.rate - float(parts[5])) > 5e-7 or abs(est.sigma - float(parts[6])) > 5e-7:
        raise ValueError("rate/sigma fields inconsistent with counts")
    return est


@dataclass(frozen=True)
class EvalConfig:
    """One error-rate measurement: trial count, candidate mode, scorer, model."""

    trials: int
    input_configs: tuple[InputModelConfig, ...]
    scorer: Scorer
    mode: str = MODE_RADIX
    radix_vectors: int = 20
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.mode not in (MODE_BRUTE, MODE_RADIX):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == MODE_RADIX and self.radix_vectors < 1:
            raise ValueError("radix_vectors must be >= 1")
        if not self.input_configs:
            raise ValueError("need at least one input config")
        n_points = self.input_configs[0].n_points
        if any(c.n_points != n_points for c in self.input_configs):
            raise ValueError("all input configs must share n_points")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")

    @property
    def n_points(self) -> int:
        return self.input_configs[0].n_points


def _run_trials(layout, lex, cfg, tree, cache, start, stop) -> tuple[int, int]:
    errors = 0
    forced = 0
    configs = cfg.input_configs
    m = len(configs)
    radix = cfg.mode == MODE_RADIX
    for t in range(start, stop):
        rng = np.random.default_rng((cfg.seed, t))
        model = configs[t % m]
        word = sample_word(lex, rng)
        v = random_vector(word, layout, model, rng)
        if radix:
            raw = string_form_candidates(word, layout, model, cfg.radix_vectors, tree, rng)
            if word not in raw:
                forced += 1
                raw = raw | {word}
            ranks = cache.ranks_for(raw)
        else:
            ranks = None
        best = recognize_cached(v, ranks, cfg.scorer, cache)
        if best != word:
            errors += 1
    return errors, forced


def error_rate_mc(
    layout: KeyboardLayout,
    lex: Lexicon,
    cfg: EvalConfig,
    tree: RadixTree | None = None,
    cache: PerfectVectorCache | None = None,
) -> ErrorEstimate:
    """Monte Carlo error rate of a layout under the configured model.

    Trials are split evenly across cfg.input_configs (method t % m) and the
    pooled rate is reported.  Deterministic for a fixed cfg.seed at any
    thread count.  Passing a prebuilt tree/cache keeps their construction out
    of the measured wall time.
    """
    if not len(lex):
        raise ValueError("lexicon must be non-empty")
    started = time.perf_counter()
    if cfg.mode == MODE_RADIX and tree is None:
        tree = build_radix_tree(lex)
    if cache is None:
        cache = PerfectVectorCache(layout, lex, cfg.n_points)
    n = cfg.trials
    if cfg.threads == 1:
        errors, forced = _run_trials(layout, lex, cfg, tree, cache, 0, n)
    else:
        chunk = max(1, -(-n // (cfg.threads * 4)))
        bounds = [(s, min(s + chunk, n)) for s in range(0, n, chunk)]
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            parts = list(
                pool.map(lambda b: _run_trials(layout, lex, cfg, tree, cache, *b), bounds)
            )
        errors = sum(p[0] for p in parts)
        forced = sum(p[1] for p in parts)
    return ErrorEstimate(
        errors=errors,
        trials=n,
        forced_inclusions=forced,
        wall_time=time.perf_counter() - started,
    )


@dataclass(frozen=True)
class BenchmarkRow:
    size: int
    mode: str
    estimate: ErrorEstimate

    @property
    def seconds(self) -> float:
        return self.estimate.wall_time


def benchmark_scaling(
    layout: KeyboardLayout, lex: Lexicon, sizes: list[int], cfg: EvalConfig
) -> list[BenchmarkRow]:
    """Wall-time table of brute vs radix runs over truncated lexicons."""
    rows = []
    for size in sizes:
        if size > len(lex):
            raise ValueError(f"size {size} exceeds lexicon size {len(lex)}")
        sub, _ = truncate_top(lex, size)
        tree = build_radix_tree(sub)
        cache = PerfectVectorCache(layout, sub, cfg.n_points)
        for mode in (MODE_BRUTE, MODE_RADIX):
            est = error_rate_mc(layout, sub, replace(cfg, mode=mode), tree, cache)
            rows.append(BenchmarkRow(size=size, mode=mode, estimate=est))
    return rows

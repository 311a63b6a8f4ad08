"""Matching an input vector to the best word from a candidate set.

Candidates are scored against their ideal linear traces, either by plain
Euclidean distance (smaller is better) or by the neural scorer (higher is
better).  Exact score ties go to the more frequent word, then alphabetically;
this is realized by ordering candidates in lexicon rank order and letting
argmin/argmax take the first extremum.
"""

from __future__ import annotations

import numpy as np

from . import classifier
from .classifier import Network
from .errors import NoCandidatesError
from .features import feature_block_pre
from .geometry import KeyboardLayout
from .lexicon import Lexicon
from .trajectory import perfect_vector

EUCLIDEAN = "euclidean"
NETWORK = "network"


class Scorer:
    """Either the Euclidean baseline or a trained network scorer."""

    def __init__(self, kind: str, network: Network | None = None):
        if kind not in (EUCLIDEAN, NETWORK):
            raise ValueError(f"unknown scorer kind {kind!r}")
        if kind == NETWORK and network is None:
            raise ValueError("network scorer requires a Network")
        self.kind = kind
        self.network = network

    def __repr__(self):
        return f"Scorer({self.kind})"


def euclidean_scorer() -> Scorer:
    return Scorer(EUCLIDEAN)


def network_scorer(net: Network) -> Scorer:
    return Scorer(NETWORK, net)


class PerfectVectorCache:
    """Ideal traces of every lexicon word on one layout, stacked for batch use.

    Rows are in lexicon rank order (descending frequency, then alphabetical),
    which makes a stable argmin/argmax implement the tie rule.  Instances are
    immutable after construction and safe to share across threads.
    """

    def __init__(self, layout: KeyboardLayout, lex: Lexicon, n_points: int):
        self.layout = layout
        self.lex = lex
        self.n_points = n_points
        self.vectors = np.stack([perfect_vector(w, layout, n_points) for w in lex.words])
        self.diffs = np.diff(self.vectors, axis=1)
        self.second_diffs = np.diff(self.diffs, axis=1)
        self.length_sq = np.linalg.norm(self.diffs, axis=2).sum(axis=1) ** 2
        for a in (self.vectors, self.diffs, self.second_diffs, self.length_sq):
            a.setflags(write=False)

    def ranks_for(self, candidates) -> np.ndarray:
        """Sorted lexicon ranks of a candidate word collection."""
        idx = self.lex.index
        try:
            ranks = sorted(idx[w] for w in candidates)
        except KeyError as e:
            raise ValueError(f"candidate {e.args[0]!r} not in lexicon") from None
        return np.asarray(ranks, dtype=np.intp)


def _euclidean_pick(v: np.ndarray, vectors: np.ndarray) -> int:
    d2 = ((vectors - v) ** 2).sum(axis=(1, 2))
    return int(np.argmin(d2))


def _network_pick(net, v, vectors, diffs, second_diffs, length_sq) -> int:
    feats = feature_block_pre(v, vectors, diffs, second_diffs, length_sq)
    scores = classifier.forward_block(net, feats)
    return int(np.argmax(scores))


def recognize_cached(v: np.ndarray, ranks: np.ndarray | None, scorer: Scorer,
                     cache: PerfectVectorCache) -> str:
    """Best word among the given lexicon ranks (None = whole lexicon)."""
    if ranks is None:
        vectors = cache.vectors
        if scorer.kind == EUCLIDEAN:
            pick = _euclidean_pick(v, vectors)
        else:
            pick = _network_pick(
                scorer.network, v, vectors, cache.diffs, cache.second_diffs, cache.length_sq
            )
        return cache.lex.words[pick]
    if len(ranks) == 0:
        raise NoCandidatesError("empty candidate set")
    if scorer.kind == EUCLIDEAN:
        pick = _euclidean_pick(v, cache.vectors[ranks])
    else:
        pick = _network_pick(
            scorer.network,
            v,
            cache.vectors[ranks],
            cache.diffs[ranks],
            cache.second_diffs[ranks],
            cache.length_sq[ranks],
        )
    return cache.lex.words[int(ranks[pick])]


def recognize(
    v: np.ndarray,
    candidates,
    layout: KeyboardLayout,
    scorer: Scorer,
    lex: Lexicon,
    n_points: int,
    cache: PerfectVectorCache | None = None,
) -> str:
    """Best-matching candidate for the input vector.

    With a cache (matching layout/lexicon/n_points) candidate traces are
    gathered from it; otherwise they are built on the fly.
    """
    v = np.asarray(v, dtype=float)
    words = sorted(candidates)
    if not words:
        raise NoCandidatesError("empty candidate set")
    if cache is not None:
        return recognize_cached(v, cache.ranks_for(words), scorer, cache)
    try:
        order = sorted(words, key=lambda w: lex.index[w])
    except KeyError as e:
        raise ValueError(f"candidate {e.args[0]!r} not in lexicon") from None
    stack = np.stack([perfect_vector(w, layout, n_points) for w in order])
    if scorer.kind == EUCLIDEAN:
        pick = _euclidean_pick(v, stack)
    else:
        diffs = np.diff(stack, axis=1)
        second = np.diff(diffs, axis=1)
        len_sq = np.linalg.norm(diffs, axis=2).sum(axis=1) ** 2
        pick = _network_pick(scorer.network, v, stack, diffs, second, len_sq)
    return order[pick]

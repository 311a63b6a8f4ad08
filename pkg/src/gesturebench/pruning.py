"""Candidate pruning for gesture recognition.

The string form of a gesture is the deduplicated sequence of keys its samples
traverse.  A word is a plausible candidate for a gesture when the word's
letters, with repeated-letter runs collapsed (a swipe cannot distinguish
"pol" from "pool"), appear in order within the string form.  The search runs
over a compressed radix tree keyed by collapsed letter sequences, with the
original words attached to their terminal nodes.
"""

from __future__ import annotations

import math

import numpy as np

from .geometry import KeyboardLayout, keys_at
from .lexicon import Lexicon
from .trajectory import InputModelConfig, random_vectors_batch


def collapse_runs(word: str) -> str:
    """Collapse runs of repeated letters: 'pool' -> 'pol'."""
    return "".join(c for i, c in enumerate(word) if i == 0 or c != word[i - 1])


class _Node:
    __slots__ = ("children", "words")

    def __init__(self):
        self.children: dict[int, tuple[tuple[int, ...], _Node]] = {}
        self.words: tuple[str, ...] = ()


class RadixTree:
    """Compressed prefix tree over the lexicon, keyed by collapsed words."""

    def __init__(self, lex: Lexicon):
        if not len(lex):
            raise ValueError("cannot build a radix tree from an empty lexicon")
        by_form: dict[str, list[str]] = {}
        for w in lex.words:
            by_form.setdefault(collapse_runs(w), []).append(w)
        root = _Node()
        for form in sorted(by_form):
            node = root
            for c in form:
                code = ord(c) - 97
                nxt = node.children.get(code)
                if nxt is None:
                    child = _Node()
                    node.children[code] = ((code,), child)
                    node = child
                else:
                    node = nxt[1]
            node.words = tuple(sorted(by_form[form]))
        _compress(root)
        self._root = root
        self._size = len(lex)
        self._memo: dict[str, frozenset[str]] = {}

    def __len__(self) -> int:
        return self._size

    def lookup(self, word: str) -> bool:
        """True iff the word is in the lexicon the tree was built from."""
        node = self._root
        codes = [ord(c) - 97 for c in collapse_runs(word)]
        i = 0
        while i < len(codes):
            edge = node.children.get(codes[i])
            if edge is None:
                return False
            label, child = edge
            if tuple(codes[i : i + len(label)]) != label:
                return False
            i += len(label)
            node = child
        return word in node.words


def _compress(node: _Node) -> None:
    for code, (label, child) in list(node.children.items()):
        _compress(child)
        if not child.words and len(child.children) == 1:
            (sub_label, sub_child) = next(iter(child.children.values()))
            node.children[code] = (label + sub_label, sub_child)


def build_radix_tree(lex: Lexicon) -> RadixTree:
    return RadixTree(lex)


def string_form(v: np.ndarray, layout: KeyboardLayout) -> str:
    """Deduplicated key sequence under a vector's samples; may be empty."""
    return string_forms(np.asarray(v, dtype=float)[None], layout)[0]


def string_forms(vectors: np.ndarray, layout: KeyboardLayout) -> list[str]:
    """string_form of each (n, 2) row of a (k, n, 2) batch."""
    idx = keys_at(layout, vectors)  # (k, n) ordinals, -1 off-key
    out = []
    for row in idx:
        hits = row[row >= 0]
        if len(hits) == 0:
            out.append("")
            continue
        keep = np.empty(len(hits), dtype=bool)
        keep[0] = True
        np.not_equal(hits[1:], hits[:-1], out=keep[1:])
        out.append((hits[keep].astype(np.uint8) + 97).tobytes().decode("ascii"))
    return out


def candidates_in_string_form(tree: RadixTree, sf: str) -> frozenset[str]:
    """Lexicon words whose collapsed form is an in-order subsequence of sf."""
    sf = collapse_runs(sf)
    cached = tree._memo.get(sf)
    if cached is not None:
        return cached
    result = _walk(tree._root, sf)
    tree._memo[sf] = result
    return result


def _walk(root: _Node, sf: str) -> frozenset[str]:
    if not sf:
        return frozenset()
    L = len(sf)
    codes = [ord(c) - 97 for c in sf]
    nxt: list[list[int]] = [[] for _ in range(L + 1)]
    cur = [L] * 26
    nxt[L] = cur
    for j in range(L - 1, -1, -1):
        cur = cur.copy()
        cur[codes[j]] = j
        nxt[j] = cur
    out: list[str] = []
    best: dict[int, int] = {}
    stack: list[tuple[_Node, int]] = [(root, -1)]
    while stack:
        node, j = stack.pop()
        for label, child in node.children.values():
            jj = j
            for cc in label:
                jj = nxt[jj + 1][cc]
                if jj == L:
                    break
            else:
                key = id(child)
                prev = best.get(key)
                if prev is not None and prev <= jj:
                    continue
                best[key] = jj
                if child.words:
                    out.extend(child.words)
                if child.children:
                    stack.append((child, jj))
    return frozenset(out)


def string_form_candidates(
    word: str,
    layout: KeyboardLayout,
    cfg: InputModelConfig,
    k: int,
    tree: RadixTree,
    rng: np.random.Generator,
) -> set[str]:
    """Union of candidates over the string forms of k random vectors."""
    if k < 1:
        raise ValueError("k must be >= 1")
    vectors = random_vectors_batch(word, layout, cfg, k, rng)
    out: set[str] = set()
    for sf in string_forms(vectors, layout):
        out |= candidates_in_string_form(tree, sf)
    return out


def prune_candidates(
    word: str,
    layout: KeyboardLayout,
    cfg: InputModelConfig,
    k: int,
    tree: RadixTree,
    rng: np.random.Generator,
) -> set[str]:
    """string_form_candidates plus the intended word when it is in the lexicon."""
    out = string_form_candidates(word, layout, cfg, k, tree, rng)
    if word not in out and tree.lookup(word):
        out.add(word)
    return out


def template_prune(
    lex: Lexicon, v: np.ndarray, layout: KeyboardLayout, threshold: float
) -> set[str]:
    """Words whose ideal trace starts and ends within threshold of v's endpoints.

    The ideal trace of a word starts and ends at its first/last key centers,
    so only those centers are compared.
    """
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    if math.isinf(threshold):
        return set(lex.words)
    v = np.asarray(v, dtype=float)
    first_idx = np.array([ord(w[0]) - 97 for w in lex.words], dtype=np.intp)
    last_idx = np.array([ord(w[-1]) - 97 for w in lex.words], dtype=np.intp)
    d_first = np.linalg.norm(layout.centers[first_idx] - v[0], axis=1)
    d_last = np.linalg.norm(layout.centers[last_idx] - v[-1], axis=1)
    mask = (d_first <= threshold) & (d_last <= threshold)
    return {w for w, m in zip(lex.words, mask) if m}

"""Frequency-weighted word lists: loading, filtering, truncation, sampling.

Entries are kept sorted by descending count (ties alphabetical) and sampling
uses exact integer prefix sums, so draws are reproducible and bias-free.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ParseError

_WORD_RE = re.compile(r"^[a-z]+$")


@dataclass(frozen=True)
class Lexicon:
    """Immutable word list with 64-bit counts, sorted by descending count."""

    words: tuple[str, ...]
    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.words) != len(self.counts):
            raise ValueError("words and counts must have equal length")
        if len(set(self.words)) != len(self.words):
            raise ValueError("duplicate words in lexicon")
        for w, c in zip(self.words, self.counts):
            if not _WORD_RE.match(w):
                raise ValueError(f"word {w!r} contains characters outside a-z")
            if c <= 0:
                raise ValueError(f"word {w!r} has non-positive count")
        order = sorted(range(len(self.words)), key=lambda i: (-self.counts[i], self.words[i]))
        object.__setattr__(self, "words", tuple(self.words[i] for i in order))
        object.__setattr__(self, "counts", tuple(self.counts[i] for i in order))

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.index

    @cached_property
    def index(self) -> dict[str, int]:
        """word -> rank (0 = most frequent)."""
        return {w: i for i, w in enumerate(self.words)}

    @cached_property
    def cumulative(self) -> np.ndarray:
        """Inclusive integer prefix sums of the counts."""
        c = np.cumsum(np.asarray(self.counts, dtype=np.int64))
        c.setflags(write=False)
        return c

    @property
    def total(self) -> int:
        return int(self.cumulative[-1]) if len(self.words) else 0

    def frequency(self, word: str) -> int:
        return self.counts[self.index[word]]


def load_lexicon(text: str) -> Lexicon:
    """Parse `word count` lines; '#' starts a comment."""
    words: list[str] = []
    counts: list[int] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected `word count`, got {line!r}", line=lineno)
        word, count_str = parts
        if not _WORD_RE.match(word):
            raise ParseError(f"word {word!r} contains characters outside a-z", line=lineno)
        if word in seen:
            raise ParseError(f"duplicate word {word!r}", line=lineno)
        try:
            count = int(count_str)
        except ValueError:
            raise ParseError(f"bad count {count_str!r}", line=lineno) from None
        if count <= 0:
            raise ParseError(f"non-positive count for {word!r}", line=lineno)
        seen.add(word)
        words.append(word)
        counts.append(count)
    if not words:
        raise ParseError("empty lexicon")
    return Lexicon(tuple(words), tuple(counts))


def dump_lexicon(lex: Lexicon) -> str:
    return "\n".join(f"{w} {c}" for w, c in zip(lex.words, lex.counts)) + "\n"


def load_wordlist(text: str) -> set[str]:
    """Allowlist file: one word per line, '#' comments."""
    out = set()
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            out.add(line)
    return out


def filter_by_wordlists(lex: Lexicon, allowlists) -> Lexicon:
    """Keep entries present in at least one allowlist; counts unchanged."""
    allowed = set().union(*allowlists) if allowlists else set()
    kept = [(w, c) for w, c in zip(lex.words, lex.counts) if w in allowed]
    if not kept:
        return Lexicon((), ())
    words, counts = zip(*kept)
    return Lexicon(words, counts)


def truncate_top(lex: Lexicon, k: int) -> tuple[Lexicon, float]:
    """Top-k entries by count, plus the retained fraction of total weight."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k >= len(lex):
        return lex, 1.0
    kept_weight = int(lex.cumulative[k - 1])
    out = Lexicon(lex.words[:k], lex.counts[:k])
    return out, kept_weight / lex.total


def sample_word(lex: Lexicon, rng: np.random.Generator) -> str:
    """Draw a word with probability count/total via the cumulative table."""
    if not len(lex):
        raise ValueError("cannot sample from an empty lexicon")
    u = int(rng.integers(1, lex.total, endpoint=True))
    i = int(np.searchsorted(lex.cumulative, u, side="left"))
    return lex.words[i]


def sample_indices(lex: Lexicon, rng: np.random.Generator, n: int) -> np.ndarray:
    """Batch draw of n word ranks, same distribution as sample_word."""
    u = rng.integers(1, lex.total, size=n, endpoint=True)
    return np.searchsorted(lex.cumulative, u, side="left")

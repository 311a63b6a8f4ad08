import numpy as np
import pytest

import gesturebench as gb

_CONSONANTS = "bcdfghjklmnpqrstvwxz"
_VOWELS = "aeiouy"


def pseudo_words(count: int, seed: int = 0) -> list[str]:
    """Deterministic pronounceable pseudo-words, unique, lowercase a-z."""
    rng = np.random.default_rng(seed)
    out: list[str] = []
    seen: set[str] = set()
    while len(out) < count:
        syllables = int(rng.integers(1, 5))
        parts = []
        for _ in range(syllables):
            parts.append(_CONSONANTS[rng.integers(len(_CONSONANTS))])
            parts.append(_VOWELS[rng.integers(len(_VOWELS))])
            if rng.random() < 0.3:
                parts.append(_CONSONANTS[rng.integers(len(_CONSONANTS))])
        w = "".join(parts)
        if w not in seen:
            seen.add(w)
            out.append(w)
    return out


def make_lexicon(size: int, seed: int = 0) -> gb.Lexicon:
    """English demo words first, padded with pseudo-words, Zipf counts."""
    demo = gb.demo_lexicon()
    words = list(demo.words[:size])
    if len(words) < size:
        extra = [w for w in pseudo_words(2 * size, seed) if w not in demo.index]
        words.extend(extra[: size - len(words)])
    counts = [max(1, round(2e9 / (i + 1) ** 1.05)) for i in range(len(words))]
    return gb.Lexicon(tuple(words), tuple(counts))


@pytest.fixture(scope="session")
def qwerty():
    return gb.builtin_layout("qwerty")


@pytest.fixture(scope="session")
def demo_lex():
    return gb.demo_lexicon()


@pytest.fixture(scope="session")
def small_lex():
    return gb.load_lexicon("pot 50\npit 40\nput 30\npout 20\npotato 10\npool 5\n")

from fractions import Fraction

import numpy as np
import pytest

import gesturebench as gb
from gesturebench.errors import ParseError
from gesturebench.lexicon import sample_indices


class TestLoad:
    def test_round_trip(self):
        lex = gb.load_lexicon("the 100\nof 60\n")
        assert len(lex) == 2
        assert lex.total == 160
        again = gb.load_lexicon(gb.dump_lexicon(lex))
        assert again == lex

    def test_apostrophe_rejected(self):
        with pytest.raises(ParseError, match="line 1"):
            gb.load_lexicon("don't 5")

    def test_empty_file(self):
        with pytest.raises(ParseError, match="empty lexicon"):
            gb.load_lexicon("# nothing here\n")

    def test_duplicate_word(self):
        with pytest.raises(ParseError, match="line 2"):
            gb.load_lexicon("the 10\nthe 5")

    def test_non_positive_count(self):
        with pytest.raises(ParseError, match="non-positive"):
            gb.load_lexicon("the 0")

    def test_sorted_by_count_then_alpha(self):
        lex = gb.load_lexicon("bbb 5\naaa 5\nccc 9")
        assert lex.words == ("ccc", "aaa", "bbb")


class TestFilter:
    def test_identity(self):
        lex = gb.load_lexicon("the 100\nteh 50")
        assert gb.filter_by_wordlists(lex, [{"the", "teh"}]) == lex

    def test_disjoint_gives_empty(self):
        lex = gb.load_lexicon("the 100")
        assert len(gb.filter_by_wordlists(lex, [{"of"}])) == 0

    def test_keeps_allowlisted_only(self):
        lex = gb.load_lexicon("the 100\nteh 50")
        out = gb.filter_by_wordlists(lex, [{"the"}])
        assert out.words == ("the",)
        assert out.counts == (100,)

    def test_union_of_allowlists(self):
        lex = gb.load_lexicon("a 3\nb 2\nc 1")
        out = gb.filter_by_wordlists(lex, [{"a"}, {"c"}])
        assert out.words == ("a", "c")

    def test_wordlist_parsing(self):
        assert gb.load_wordlist("# header\nfoo\nbar\n\n") == {"foo", "bar"}


class TestTruncate:
    def test_top_one(self):
        lex = gb.load_lexicon("a 3\nb 1")
        out, coverage = gb.truncate_top(lex, 1)
        assert out.words == ("a",)
        assert coverage == 0.75

    def test_k_at_size_is_identity(self):
        lex = gb.load_lexicon("a 3\nb 1")
        out, coverage = gb.truncate_top(lex, 2)
        assert out == lex
        assert coverage == 1.0

    def test_k_beyond_size(self):
        lex = gb.load_lexicon("a 3\nb 1")
        out, coverage = gb.truncate_top(lex, 99)
        assert out == lex and coverage == 1.0

    def test_coverage_exact(self, demo_lex):
        out, coverage = gb.truncate_top(demo_lex, 1000)
        kept = sum(out.counts)
        assert coverage == pytest.approx(float(Fraction(kept, demo_lex.total)), abs=0)

    def test_rejects_k_zero(self, demo_lex):
        with pytest.raises(ValueError):
            gb.truncate_top(demo_lex, 0)


class TestSampling:
    def test_single_word_always(self):
        lex = gb.load_lexicon("only 7")
        rng = np.random.default_rng(0)
        assert all(gb.sample_word(lex, rng) == "only" for _ in range(50))

    def test_fixed_seed_reproducible(self, demo_lex):
        a = [gb.sample_word(demo_lex, np.random.default_rng(42)) for _ in range(1)]
        draws1 = sample_indices(demo_lex, np.random.default_rng(42), 500)
        draws2 = sample_indices(demo_lex, np.random.default_rng(42), 500)
        np.testing.assert_array_equal(draws1, draws2)
        assert a == a

    def test_batch_matches_distribution_of_scalar(self):
        lex = gb.load_lexicon("a 3\nb 1")
        scalar = [gb.sample_word(lex, np.random.default_rng((9, i))) for i in range(200)]
        assert set(scalar) == {"a", "b"}

    @pytest.mark.parametrize(
        "entries",
        [
            {"a": 3, "b": 1},
            {"w": 1, "x": 1, "y": 1, "z": 1},
            {"q": 1000, "r": 10, "s": 1},
            {chr(97 + i): i + 1 for i in range(10)},
        ],
    )
    def test_empirical_frequencies_within_5_sigma(self, entries):
        lex = gb.Lexicon(tuple(entries), tuple(entries.values()))
        n = 100_000
        idx = sample_indices(lex, np.random.default_rng(1234), n)
        counts = np.bincount(idx, minlength=len(lex))
        for i, word in enumerate(lex.words):
            p = lex.counts[i] / lex.total
            sigma = np.sqrt(p * (1 - p) / n)
            assert abs(counts[i] / n - p) <= 5 * sigma, word

    def test_empty_lexicon_rejected(self):
        empty = gb.Lexicon((), ())
        with pytest.raises(ValueError):
            gb.sample_word(empty, np.random.default_rng(0))


class TestInvariants:
    def test_cumulative_strictly_increasing(self, demo_lex):
        assert (np.diff(demo_lex.cumulative) > 0).all()
        assert demo_lex.cumulative[-1] == sum(demo_lex.counts)

    def test_duplicate_words_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            gb.Lexicon(("a", "a"), (1, 2))

    def test_bad_characters_rejected(self):
        with pytest.raises(ValueError):
            gb.Lexicon(("Abc",), (1,))

import numpy as np
import pytest

import gesturebench as gb
from gesturebench.pruning import collapse_runs, string_form_candidates, string_forms


def is_subsequence(needle: str, hay: str) -> bool:
    it = iter(hay)
    return all(c in it for c in needle)


def oracle_candidates(words, sf: str) -> set[str]:
    """Brute force: word matches when its collapsed form is a subsequence."""
    sf = collapse_runs(sf)
    return {w for w in words if is_subsequence(collapse_runs(w), sf)}


def random_instance(rng, max_words=200, max_sf=12, alphabet="abcdef"):
    n_words = int(rng.integers(1, max_words + 1))
    words = set()
    while len(words) < n_words:
        length = int(rng.integers(1, 9))
        word = "".join(alphabet[i] for i in rng.integers(len(alphabet), size=length))
        words.add(word)
    sf_len = int(rng.integers(0, max_sf + 1))
    raw = "".join(alphabet[i] for i in rng.integers(len(alphabet), size=sf_len))
    return sorted(words), collapse_runs(raw)


class TestCollapse:
    @pytest.mark.parametrize(
        "word,expected",
        [("pool", "pol"), ("pot", "pot"), ("aaa", "a"), ("aabba", "aba"), ("x", "x")],
    )
    def test_examples(self, word, expected):
        assert collapse_runs(word) == expected


class TestRadixTree:
    def test_membership(self, small_lex):
        tree = gb.build_radix_tree(small_lex)
        for w in ("pot", "pit", "put", "pout", "potato", "pool"):
            assert tree.lookup(w)
        assert not tree.lookup("po")
        assert not tree.lookup("pots")
        assert not tree.lookup("pol")  # collapsed form of pool is not a word

    def test_single_word(self):
        lex = gb.load_lexicon("keyboard 1")
        tree = gb.build_radix_tree(lex)
        assert tree.lookup("keyboard") and not tree.lookup("key")

    def test_word_count(self, demo_lex):
        tree = gb.build_radix_tree(demo_lex)
        assert len(tree) == len(demo_lex)

    def test_empty_lexicon_rejected(self):
        with pytest.raises(ValueError):
            gb.build_radix_tree(gb.Lexicon((), ()))


class TestStringForm:
    def test_paper_example_pot(self, qwerty):
        v = gb.perfect_vector("pot", qwerty, 50)
        assert gb.string_form(v, qwerty) == "poiuyt"

    def test_all_samples_one_key(self, qwerty):
        v = np.tile(gb.key_center(qwerty, "k"), (20, 1))
        assert gb.string_form(v, qwerty) == "k"

    def test_off_key_samples_skipped(self, qwerty):
        kx, ky = gb.key_center(qwerty, "k")
        v = np.array([[kx, ky], [100.0, 100.0], [kx, ky], [200.0, 0.0]])
        assert gb.string_form(v, qwerty) == "k"

    def test_no_samples_on_keys(self, qwerty):
        v = np.tile([500.0, 500.0], (10, 1))
        assert gb.string_form(v, qwerty) == ""

    def test_batch_matches_scalar(self, qwerty):
        cfg = gb.area_scaled_config(qwerty)
        batch = np.stack(
            [
                gb.random_vector("stone", qwerty, cfg, np.random.default_rng(i))
                for i in range(8)
            ]
        )
        forms = string_forms(batch, qwerty)
        for i in range(8):
            assert forms[i] == gb.string_form(batch[i], qwerty)


class TestCandidates:
    def test_pot_family(self, small_lex):
        tree = gb.build_radix_tree(small_lex)
        got = gb.candidates_in_string_form(tree, "poiuyt")
        assert got == {"pot", "pit", "put", "pout"}

    def test_doubled_letter(self):
        tree = gb.build_radix_tree(gb.load_lexicon("pool 1"))
        assert gb.candidates_in_string_form(tree, "pol") == {"pool"}

    def test_empty_string_form(self, small_lex):
        tree = gb.build_radix_tree(small_lex)
        assert gb.candidates_in_string_form(tree, "") == frozenset()

    def test_oracle_equivalence_randomized(self):
        rng = np.random.default_rng(2024)
        for _ in range(120):
            words, sf = random_instance(rng)
            lex = gb.Lexicon(tuple(words), tuple([1] * len(words)))
            tree = gb.build_radix_tree(lex)
            got = gb.candidates_in_string_form(tree, sf)
            assert got == oracle_candidates(words, sf), (sf, sorted(words)[:10])

    def test_oracle_equivalence_with_triple_runs(self):
        words = ["aaa", "aa", "a", "aaab", "abbb", "abab", "bab"]
        lex = gb.Lexicon(tuple(words), tuple([1] * len(words)))
        tree = gb.build_radix_tree(lex)
        for sf in ("ab", "aba", "ba", "a", "bab"):
            assert gb.candidates_in_string_form(tree, sf) == oracle_candidates(words, sf)

    def test_memo_consistency(self, small_lex):
        tree = gb.build_radix_tree(small_lex)
        first = gb.candidates_in_string_form(tree, "poiuyt")
        second = gb.candidates_in_string_form(tree, "poiuyt")
        assert first == second


class TestPruneCandidates:
    def test_zero_noise_superset_of_word(self, small_lex, qwerty):
        tree = gb.build_radix_tree(small_lex)
        cfg = gb.InputModelConfig(sigma_x=0.0, sigma_y=0.0)
        got = gb.prune_candidates("pot", qwerty, cfg, 1, tree, np.random.default_rng(0))
        assert "pot" in got
        assert got <= oracle_candidates(small_lex.words, "poiuyt")

    def test_candidate_set_grows_with_k(self, small_lex, qwerty):
        tree = gb.build_radix_tree(small_lex)
        cfg = gb.area_scaled_config(qwerty)
        sizes = []
        for k in (1, 5, 20):
            got = gb.prune_candidates("pot", qwerty, cfg, k, tree, np.random.default_rng(3))
            sizes.append(len(got))
        assert sizes == sorted(sizes)

    def test_forced_inclusion_when_string_form_misses(self, qwerty):
        # huge noise: string forms rarely contain the short word, but the
        # intended word is still always present
        lex = gb.load_lexicon("it 5\nis 3\nif 2")
        tree = gb.build_radix_tree(lex)
        cfg = gb.InputModelConfig(sigma_x=5.0, sigma_y=5.0)
        for seed in range(5):
            got = gb.prune_candidates("it", qwerty, cfg, 1, tree, np.random.default_rng(seed))
            assert "it" in got

    def test_raw_candidates_can_miss_word(self, qwerty):
        lex = gb.load_lexicon("it 5")
        tree = gb.build_radix_tree(lex)
        cfg = gb.InputModelConfig(sigma_x=50.0, sigma_y=50.0)
        missed = any(
            "it" not in string_form_candidates("it", qwerty, cfg, 1, tree, np.random.default_rng(s))
            for s in range(10)
        )
        assert missed

    def test_k_must_be_positive(self, small_lex, qwerty):
        tree = gb.build_radix_tree(small_lex)
        cfg = gb.area_scaled_config(qwerty)
        with pytest.raises(ValueError):
            gb.prune_candidates("pot", qwerty, cfg, 0, tree, np.random.default_rng(0))


class TestTemplatePrune:
    def test_infinite_threshold_keeps_all(self, small_lex, qwerty):
        v = gb.perfect_vector("pot", qwerty)
        got = gb.template_prune(small_lex, v, qwerty, float("inf"))
        assert got == set(small_lex.words)

    def test_zero_threshold_keeps_same_endpoints(self, small_lex, qwerty):
        v = gb.perfect_vector("pot", qwerty)
        got = gb.template_prune(small_lex, v, qwerty, 0.0)
        # words starting at 'p' center and ending at 't' center
        assert got == {"pot", "pit", "put", "pout"}

    def test_monotone_in_threshold(self, small_lex, qwerty):
        v = gb.perfect_vector("pool", qwerty)
        prev: set = set()
        for thr in (0.0, 1.0, 3.0, 10.0, float("inf")):
            got = gb.template_prune(small_lex, v, qwerty, thr)
            assert prev <= got
            prev = got

    def test_negative_threshold_rejected(self, small_lex, qwerty):
        v = gb.perfect_vector("pot", qwerty)
        with pytest.raises(ValueError):
            gb.template_prune(small_lex, v, qwerty, -1.0)

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import wer_oracle

from talkeval import errors
from talkeval.content_metrics import acd, tokenize, wer, word_edit_distance
from talkeval.media import EmbeddingSeries


class TestAcd:
    def test_identical_embeddings_zero(self, rng):
        vec = rng.normal(size=16)
        frames = EmbeddingSeries(vectors=np.tile(vec, (5, 1)), dim=16)
        assert acd(vec, frames) == 0.0

    def test_hand_distances(self):
        still = np.zeros(4)
        frames = EmbeddingSeries(
            vectors=np.array([[1.0, 0, 0, 0], [3.0, 0, 0, 0]]), dim=4
        )
        assert acd(still, frames) == pytest.approx(2.0)

    def test_dim_mismatch(self, rng):
        frames = EmbeddingSeries(vectors=rng.normal(size=(3, 8)), dim=8)
        with pytest.raises(errors.DimensionMismatch):
            acd(np.zeros(4), frames)

    def test_empty_series(self):
        frames = EmbeddingSeries(vectors=np.empty((0, 4)), dim=4)
        with pytest.raises(errors.EmptySeries):
            acd(np.zeros(4), frames)

    def test_translation_invariant(self, rng):
        still = rng.normal(size=8)
        vectors = rng.normal(size=(6, 8))
        shift = rng.normal(size=8)
        base = acd(still, EmbeddingSeries(vectors=vectors, dim=8))
        moved = acd(still + shift, EmbeddingSeries(vectors=vectors + shift, dim=8))
        assert moved == pytest.approx(base, abs=1e-9)

    def test_scales_linearly(self, rng):
        still = rng.normal(size=8)
        vectors = rng.normal(size=(6, 8))
        base = acd(still, EmbeddingSeries(vectors=vectors, dim=8))
        scaled = acd(3.5 * still, EmbeddingSeries(vectors=3.5 * vectors, dim=8))
        assert scaled == pytest.approx(3.5 * base, rel=1e-12)


class TestTokenize:
    def test_lowercase_and_punctuation(self):
        assert tokenize("  The CAT, sat.  ") == ["the", "cat", "sat"]

    def test_unicode_whitespace(self):
        assert tokenize("bin blue\tat f two now") == [
            "bin", "blue", "at", "f", "two", "now",
        ]


class TestWer:
    def test_identical(self):
        assert wer("place red by g five please", "place red by g five please") == 0.0

    def test_single_deletion(self):
        assert wer("the cat sat", "the cat") == pytest.approx(1 / 3)

    def test_can_exceed_one(self):
        assert wer("a", "b c") == pytest.approx(2.0)

    def test_empty_hypothesis_is_one(self):
        assert wer("lay white with q zero again", "") == 1.0

    def test_empty_reference_rejected(self):
        with pytest.raises(errors.EmptyReference):
            wer("...", "anything")

    def test_case_and_whitespace_invariance(self):
        assert wer("Bin Blue  At", "bin\tblue at") == 0.0

    def test_exhaustive_short_sequences_match_oracle(self):
        words = ["bin", "blue", "at"]
        universe = [
            list(seq)
            for n in range(4)
            for seq in itertools.product(words, repeat=n)
        ]
        for ref in universe:
            if not ref:
                continue
            for hyp in universe:
                assert wer(ref, hyp) == wer_oracle(ref, hyp)

    @settings(max_examples=200, deadline=None)
    @given(
        ref=st.lists(st.sampled_from(["bin", "blue", "at"]), min_size=1, max_size=5),
        hyp=st.lists(st.sampled_from(["bin", "blue", "at"]), min_size=0, max_size=5),
    )
    def test_matches_oracle_up_to_five_words(self, ref, hyp):
        assert wer(ref, hyp) == wer_oracle(ref, hyp)

    def test_distance_symmetry_of_counts(self):
        # unit-cost Levenshtein is symmetric even though WER normalizes by N
        assert word_edit_distance(["a", "b"], ["b"]) == word_edit_distance(["b"], ["a", "b"])

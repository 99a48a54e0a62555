from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, strategies as st

from signpipe.errors import AlignmentError, UndefinedMetric
from signpipe.metrics import bleu_n, chrf, compare_translations, edit_distance, rouge_l, wer

from conftest import FIXTURE_DIR
from oracles import edit_distance_oracle, lcs_oracle


@pytest.fixture(scope="module")
def oracle_fixture():
    return json.loads((FIXTURE_DIR / "text_metric_oracle.json").read_text())


class TestPinnedOracle:
    """Expected values were computed by independent reference implementations
    before this module existed; see scripts/pin_text_metric_oracle.py."""

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_bleu(self, oracle_fixture, n):
        got = bleu_n(oracle_fixture["hyps"], oracle_fixture["refs"], n)
        assert got == pytest.approx(oracle_fixture[f"bleu_{n}"], abs=1e-9)

    def test_chrf(self, oracle_fixture):
        got = chrf(oracle_fixture["hyps"], oracle_fixture["refs"])
        assert got == pytest.approx(oracle_fixture["chrf"], abs=1e-9)

    def test_rouge_l(self, oracle_fixture):
        got = rouge_l(oracle_fixture["hyps"], oracle_fixture["refs"])
        assert got == pytest.approx(oracle_fixture["rouge_l_f1"], abs=1e-9)

    def test_wer(self, oracle_fixture):
        got = wer(oracle_fixture["hyps"], oracle_fixture["refs"])
        assert got == pytest.approx(oracle_fixture["wer"], abs=1e-9)


class TestIdentities:
    def test_identity_corpus_maxima(self):
        corpus = ["CHOP ADD STIR", "FOLD PAPER", "MIX WELL NOW"]
        assert bleu_n(corpus, corpus, 1) == 1.0
        assert rouge_l(corpus, corpus) == 1.0
        assert chrf(corpus, corpus) == pytest.approx(1.0)
        assert wer(corpus, corpus) == 0.0
        # with segments long enough to contain 4-grams, BLEU-4 is exact too
        long_corpus = ["CHOP ADD STIR FOLD PAPER", "MIX WELL NOW POUR SLOWLY"]
        assert bleu_n(long_corpus, long_corpus, 4) == pytest.approx(1.0)

    def test_disjoint_vocabulary_zero_bleu(self):
        assert bleu_n(["A B C"], ["X Y Z"], 1) == 0.0
        assert bleu_n(["A B C"], ["X Y Z"], 4) == 0.0

    def test_single_shared_token_kills_higher_orders(self):
        # one unigram overlaps, no bigram does; smoothing off zeroes BLEU-2..4
        assert bleu_n(["CHOP MIX"], ["CHOP STIR"], 1) > 0
        assert bleu_n(["CHOP MIX"], ["CHOP STIR"], 2) == 0.0
        assert bleu_n(["CHOP MIX"], ["CHOP STIR"], 4) == 0.0
        assert bleu_n(["CHOP MIX"], ["CHOP STIR"], 2, smoothing="add1") > 0

    def test_wer_hand_example(self):
        assert wer(["A B C D"], ["A X C D"]) == 0.25

    def test_wer_can_exceed_one(self):
        assert wer(["A B C D E F"], ["X"]) > 1.0


class TestAlignment:
    def test_length_mismatch(self):
        with pytest.raises(AlignmentError):
            wer(["A"], ["A", "B"])
        with pytest.raises(AlignmentError):
            bleu_n(["A"], [], 1)

    def test_empty_corpora_undefined(self):
        with pytest.raises(UndefinedMetric):
            bleu_n([], [], 4)


class TestEditDistance:
    @given(st.lists(st.sampled_from("ABCDE"), max_size=12),
           st.lists(st.sampled_from("ABCDE"), max_size=12))
    def test_matches_full_matrix_oracle(self, a, b):
        assert edit_distance(a, b) == edit_distance_oracle(a, b)

    @given(st.lists(st.sampled_from("ABCDE"), max_size=12),
           st.lists(st.sampled_from("ABCDE"), max_size=12))
    def test_unnormalized_distance_symmetric(self, a, b):
        assert edit_distance(a, b) == edit_distance(b, a)

    @given(st.lists(st.sampled_from("ABCDE"), max_size=12))
    def test_self_distance_zero(self, a):
        assert edit_distance(a, a) == 0

    def test_thousand_random_pairs(self):
        rng = random.Random(99)
        for _ in range(1000):
            a = [rng.choice("ABCDEFG") for _ in range(rng.randint(0, 15))]
            b = [rng.choice("ABCDEFG") for _ in range(rng.randint(0, 15))]
            assert edit_distance(a, b) == edit_distance_oracle(a, b)


class TestRougeAgainstLcsOracle:
    def test_random_pairs(self):
        rng = random.Random(7)
        for _ in range(300):
            a = [rng.choice("ABCDEF") for _ in range(rng.randint(1, 10))]
            b = [rng.choice("ABCDEF") for _ in range(rng.randint(1, 10))]
            lcs = lcs_oracle(a, b)
            got = rouge_l([" ".join(a)], [" ".join(b)])
            if lcs == 0:
                assert got == 0.0
            else:
                p, r = lcs / len(a), lcs / len(b)
                assert got == pytest.approx(2 * p * r / (p + r))


class TestCompareTranslations:
    def test_self_comparison_maxima(self):
        corpus = ["CHOP ADD", "STIR UNTIL SMOOTH"]
        report = compare_translations(corpus, corpus)
        assert report.bleu_1 == 1.0
        assert report.rouge_l_f1 == 1.0
        assert report.wer == 0.0
        assert report.n_pairs == 2

    def test_bundled_corpora_report(self, bundled_tasks):
        from signpipe.llm import LlmRequestConfig, LlmTranslator, TranslationCache
        from signpipe.ruletrans import rule_translate

        from conftest import DATA_DIR

        translator = LlmTranslator(LlmRequestConfig(), TranslationCache(DATA_DIR / "llm_cache"),
                                   offline=True)
        hyps, refs = [], []
        for task in bundled_tasks:
            for step, llm_seq in zip(task.steps, translator.translate_task(task)):
                hyps.append(llm_seq.text)
                refs.append(rule_translate(step.text, step_index=step.index).text)
        report = compare_translations(hyps, refs)
        assert 0 < report.bleu_1 < 1
        assert 0 < report.chrf < 1
        assert report.wer > 0  # may legitimately exceed 1 for diverse output
        assert set(report.to_dict()) >= {"bleu_1", "bleu_4", "rouge_l_f1", "chrf", "wer"}

    def test_extra_scores_folded(self):
        report = compare_translations(["A"], ["A"], extra_scores={"embedding_f1": [0.8]})
        assert report.extras["embedding_f1"] == 0.8
        with pytest.raises(AlignmentError):
            compare_translations(["A"], ["A"], extra_scores={"x": [0.8, 0.9]})

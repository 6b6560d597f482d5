"""Answer-quality metric behavior against frozen vectors and the oracles."""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from memengine.evaluation.metrics import bleu_scores, exact_match, token_f1

from oracles import oracle_bleu, oracle_token_f1
from vectors import BLEU_VECTORS, F1_VECTORS

texts = st.text(
    alphabet=st.sampled_from("abce rst,."),
    max_size=40,
)


@pytest.mark.parametrize("pred,gold,expected", F1_VECTORS)
def test_token_f1_vectors(pred, gold, expected):
    assert token_f1(pred, gold) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("pred,gold,expected_bleu,expected_b1,expected_b2",
                         BLEU_VECTORS)
def test_bleu_vectors(pred, gold, expected_bleu, expected_b1, expected_b2):
    scores = bleu_scores(pred, gold)
    assert scores["bleu"] == pytest.approx(expected_bleu, abs=1e-12)
    assert scores["bleu1"] == pytest.approx(expected_b1, abs=1e-12)
    assert scores["bleu2"] == pytest.approx(expected_b2, abs=1e-12)


def test_exact_match_ignores_case_and_punctuation():
    assert exact_match("The Cat!", "the cat") == 1.0
    assert exact_match("the cat", "the cats") == 0.0
    assert exact_match("", "") == 1.0
    assert exact_match("a", "") == 0.0


@given(texts, texts)
def test_token_f1_matches_oracle(pred, gold):
    assert token_f1(pred, gold) == pytest.approx(oracle_token_f1(pred, gold),
                                                 abs=1e-12)


@given(texts, texts)
def test_bleu_matches_oracle(pred, gold):
    got = bleu_scores(pred, gold)
    want = oracle_bleu(pred, gold)
    for key in ("bleu", "bleu1", "bleu2"):
        assert got[key] == pytest.approx(want[key], abs=1e-12)


@given(texts, texts)
def test_metric_ranges(pred, gold):
    assert 0.0 <= token_f1(pred, gold) <= 1.0
    scores = bleu_scores(pred, gold)
    assert all(0.0 <= scores[k] <= 1.0 for k in ("bleu", "bleu1", "bleu2"))
    assert exact_match(pred, gold) in (0.0, 1.0)


@given(texts)
def test_metrics_are_perfect_on_identity(text):
    assert token_f1(text, text) == 1.0
    assert bleu_scores(text, text)["bleu"] == 1.0
    assert exact_match(text, text) == 1.0


@given(texts, texts)
def test_token_f1_is_symmetric(pred, gold):
    assert token_f1(pred, gold) == pytest.approx(token_f1(gold, pred), abs=1e-12)

"""Tokenization, timestamps, record types, configuration, and stemming."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from memengine.core.config import (
    ConfigError,
    EngineConfig,
    config_from_dict,
    load_config,
    validate_config,
)
from memengine.core.porter import porter_stem
from memengine.core.tokens import approx_token_count, surface_tokens, tokenize
from memengine.core.types import Mau, ModalityKind, iso_to_ms, ms_to_iso
from memengine.knowledge.resolve import jaro, jaro_winkler

from oracles import oracle_jaro_winkler, oracle_porter, oracle_tokenize
from vectors import JW_VECTORS, PORTER_100

words = st.text(alphabet=st.sampled_from("abcdefghijklmnopqrstuvwxyz"),
                min_size=1, max_size=14)


# ---------------------------------------------------------------------------
# tokens
# ---------------------------------------------------------------------------

def test_token_count_basics():
    assert approx_token_count("") == 0
    assert approx_token_count("abcd") == 1
    assert approx_token_count("abcde") == 2
    assert approx_token_count("x" * 4000) == 1000


@given(st.text(max_size=200), st.text(max_size=50))
def test_token_count_monotone(base, extra):
    assert approx_token_count(base + extra) >= approx_token_count(base)


def test_tokenize_strips_surrounding_punctuation_only():
    assert tokenize("Hello, World!") == ["hello", "world"]
    assert tokenize("don't stop") == ["don't", "stop"]
    assert tokenize("...") == []
    assert tokenize("  spaced\tout \n") == ["spaced", "out"]


def test_surface_tokens_keep_case():
    assert surface_tokens("Dr. Chen spoke.") == ["Dr", "Chen", "spoke"]


@given(st.text(max_size=120))
def test_tokenize_matches_oracle(text):
    assert tokenize(text) == oracle_tokenize(text)


# ---------------------------------------------------------------------------
# timestamps
# ---------------------------------------------------------------------------

def test_iso_rendering():
    assert ms_to_iso(0) == "1970-01-01T00:00:00.000Z"
    assert ms_to_iso(1735689600123) == "2025-01-01T00:00:00.123Z"


def test_iso_parsing_variants():
    assert iso_to_ms("2025-01-01T00:00:00.123Z") == 1735689600123
    assert iso_to_ms("2025-01-01T00:00:00+00:00") == 1735689600000
    # a naive timestamp is taken as UTC
    assert iso_to_ms("2025-01-01T00:00:00") == 1735689600000
    with pytest.raises(ValueError):
        iso_to_ms("not a time")


@given(st.integers(min_value=0, max_value=4_102_444_800_000))
def test_timestamp_round_trip(ms):
    assert iso_to_ms(ms_to_iso(ms)) == ms


# ---------------------------------------------------------------------------
# record type
# ---------------------------------------------------------------------------

def _unit(dim: int = 4) -> np.ndarray:
    vec = np.zeros(dim)
    vec[0] = 1.0
    return vec


def test_mau_requires_unit_embedding():
    with pytest.raises(ValueError, match="norm"):
        Mau(id=0, summary="s", embedding=np.array([1.0, 1.0]), cold_ref=None,
            timestamp_ms=0, modality=ModalityKind.TEXT)


def test_mau_rejects_negative_id():
    with pytest.raises(ValueError, match="id"):
        Mau(id=-1, summary="s", embedding=_unit(), cold_ref=None,
            timestamp_ms=0, modality=ModalityKind.TEXT)


def test_mau_embedding_frozen_and_links_coerced():
    mau = Mau(id=3, summary="s", embedding=_unit(), cold_ref=None,
              timestamp_ms=5, modality=ModalityKind.VIDEO,
              links=[(1, "continuation")])
    assert mau.links == ((1, "continuation"),)
    with pytest.raises(ValueError):
        mau.embedding[0] = 0.5


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

def test_default_config_is_valid():
    assert validate_config(EngineConfig()) == []


def test_config_rejects_unknown_keys():
    with pytest.raises(ConfigError, match="unknown"):
        config_from_dict({"definitely_not_a_field": 1})


def test_config_rejects_wrong_types():
    with pytest.raises(ConfigError, match="wrong type"):
        config_from_dict({"theta": "0.4"})
    with pytest.raises(ConfigError, match="wrong type bool"):
        config_from_dict({"bm25_k1": True})
    with pytest.raises(ConfigError, match="wrong type"):
        config_from_dict({"disable_bm25": 1})


def test_config_range_violations():
    violations = validate_config(EngineConfig(theta=1.5, top_k=0,
                                              tau_low=0.9, tau_high=0.8))
    joined = " ".join(violations)
    assert "theta" in joined
    assert "top_k" in joined
    assert "tau_low > tau_high" in joined


def test_replace_validates():
    cfg = EngineConfig()
    assert cfg.replace(top_k=5).top_k == 5
    with pytest.raises(ConfigError, match="top_k"):
        cfg.replace(top_k=0)


def test_effective_top_k_override():
    assert EngineConfig().effective_top_k == 20
    assert EngineConfig(top_k_override=3).effective_top_k == 3


def test_config_dict_round_trip(tmp_path):
    cfg = EngineConfig(theta=0.2, top_k_by_category={"probe": 5})
    assert config_from_dict(cfg.to_dict()) == cfg
    path = tmp_path / "config.json"
    path.write_text('{"theta": 0.25, "top_k": 7}')
    loaded = load_config(path)
    assert loaded.theta == 0.25 and loaded.top_k == 7


# ---------------------------------------------------------------------------
# stemming
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("word,expected", PORTER_100)
def test_porter_published_vocabulary(word, expected):
    assert porter_stem(word) == expected


@given(words)
def test_porter_matches_independent_implementation(word):
    assert porter_stem(word) == oracle_porter(word)


def test_porter_short_words_untouched():
    assert porter_stem("as") == "as"
    assert porter_stem("I") == "i"


# ---------------------------------------------------------------------------
# string similarity
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("a,b,expected", JW_VECTORS)
def test_jaro_winkler_reference_values(a, b, expected):
    assert jaro_winkler(a, b) == pytest.approx(expected, abs=1e-4)


@given(words, words)
def test_jaro_winkler_matches_oracle(a, b):
    assert jaro_winkler(a, b) == pytest.approx(oracle_jaro_winkler(a, b),
                                               abs=1e-12)


@given(words, words)
def test_jaro_winkler_symmetric_and_bounded(a, b):
    forward = jaro_winkler(a, b)
    assert 0.0 <= forward <= 1.0
    assert forward == pytest.approx(jaro_winkler(b, a), abs=1e-12)


@given(words)
def test_jaro_identity(word):
    assert jaro(word, word) == 1.0
    assert jaro_winkler(word, word) == 1.0

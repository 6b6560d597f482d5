"""Dense and keyword retrieval, merging, and budgeted context expansion."""

from __future__ import annotations

import math
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from memengine.core.config import EngineConfig
from memengine.core.types import Mau, ModalityKind
from memengine.retrieval.dense import DenseIndex
from memengine.retrieval.merge import hybrid_search, merge_union
from memengine.retrieval.model import Candidate
from memengine.retrieval.pyramid import pyramid_expand, summaries_only
from memengine.retrieval.sparse import SparseIndex
from memengine.storage.cold import ColdStore

from oracles import oracle_bm25_rank, oracle_dense_rank, oracle_merge


def unit_rows(n: int, dim: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    rows = rng.standard_normal((n, dim))
    return rows / np.linalg.norm(rows, axis=1, keepdims=True)


# ---------------------------------------------------------------------------
# dense
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("seed", range(8))
def test_dense_matches_oracle(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 30)
    rows = unit_rows(n, 6, seed)
    query = unit_rows(1, 6, seed + 1000)[0]
    k = rng.randint(1, n + 3)
    hits = DenseIndex(rows).search(query, k)
    expected = oracle_dense_rank([list(r) for r in rows], list(query), k)
    assert [h.mau_id for h in hits] == [i for i, _ in expected]
    for hit, (_, sim) in zip(hits, expected):
        assert hit.sim == pytest.approx(sim, abs=1e-12)
        assert hit.origin == "dense"


def test_dense_ties_break_toward_lower_id():
    row = unit_rows(1, 4, 7)[0]
    index = DenseIndex(np.stack([row, row, row]))
    hits = index.search(row, 3)
    assert [h.mau_id for h in hits] == [0, 1, 2]


def test_dense_temporal_prefers_newer_on_ties():
    row = unit_rows(1, 4, 3)[0]
    index = DenseIndex(np.stack([row, row]), timestamps_ms=[100, 200])
    assert [h.mau_id for h in index.search(row, 2, temporal=True)] == [1, 0]
    assert [h.mau_id for h in index.search(row, 2)] == [0, 1]


def test_dense_temporal_matches_oracle():
    rows = unit_rows(12, 5, 42)
    quantized = np.round(rows, 1)
    timestamps = [int(i * 37 % 5) for i in range(12)]
    query = quantized[0]
    hits = DenseIndex(quantized, timestamps_ms=timestamps).search(query, 12, temporal=True)
    expected = oracle_dense_rank([list(r) for r in quantized], list(query), 12,
                                 timestamps=timestamps, temporal=True)
    assert [h.mau_id for h in hits] == [i for i, _ in expected]


def test_dense_k_validation_and_empty_index():
    index = DenseIndex(unit_rows(2, 4, 1))
    with pytest.raises(ValueError):
        index.search(unit_rows(1, 4, 2)[0], 0)
    empty = DenseIndex(np.zeros((0, 4)))
    assert empty.search(unit_rows(1, 4, 2)[0], 5) == []


# ---------------------------------------------------------------------------
# keyword
# ---------------------------------------------------------------------------

WORDS = ["terrier", "shelter", "garden", "tulip", "storm", "window", "fence"]


def random_corpus(rng: random.Random, n_docs: int) -> list[list[str]]:
    return [[rng.choice(WORDS) for _ in range(rng.randint(1, 12))]
            for _ in range(n_docs)]


@pytest.mark.parametrize("seed", range(8))
def test_bm25_matches_oracle(seed):
    rng = random.Random(seed + 50)
    docs = random_corpus(rng, rng.randint(1, 25))
    query = [rng.choice(WORDS) for _ in range(rng.randint(1, 4))]
    k = rng.randint(1, len(docs) + 2)
    got = SparseIndex(docs).search(query, k)
    expected = oracle_bm25_rank(docs, query, k)
    assert [doc_id for doc_id, _ in got] == [doc_id for doc_id, _ in expected]
    for (_, score), (_, want) in zip(got, expected):
        assert score == pytest.approx(want, abs=1e-12)


def test_bm25_idf_formula():
    index = SparseIndex([["storm"], ["storm"], ["fence"]])
    assert index.idf("storm") == pytest.approx(math.log(1 + (3 - 2 + 0.5) / 2.5))
    assert index.idf("missing") == pytest.approx(math.log(1 + 3.5 / 0.5))


def test_bm25_duplicate_query_terms_count_once():
    index = SparseIndex([["storm", "fence"], ["fence"]])
    single = index.search(["storm"], 2)
    doubled = index.search(["storm", "storm"], 2)
    assert doubled == single


def test_bm25_drops_nonpositive_scores():
    index = SparseIndex([["storm"], ["fence"]])
    assert index.search(["tulip"], 2) == []


def test_bm25_ties_break_toward_lower_id():
    index = SparseIndex([["storm"], ["storm"]])
    assert [doc_id for doc_id, _ in index.search(["storm"], 2)] == [0, 1]


def test_bm25_empty_corpus_and_k_validation():
    assert SparseIndex([]).search(["storm"], 3) == []
    with pytest.raises(ValueError):
        SparseIndex([["storm"]]).search(["storm"], 0)


# ---------------------------------------------------------------------------
# merge
# ---------------------------------------------------------------------------

def cand(mau_id: int, sim: float = 0.5, origin: str = "dense") -> Candidate:
    return Candidate(mau_id=mau_id, sim=sim, origin=origin)


def test_merge_keeps_dense_prefix_and_appends_new_sparse():
    dense = [cand(3), cand(1), cand(4)]
    sparse = [cand(1, origin="sparse"), cand(9, origin="sparse"),
              cand(3, origin="sparse"), cand(2, origin="sparse")]
    merged = merge_union(dense, sparse)
    assert [c.mau_id for c in merged] == [3, 1, 4, 9, 2]
    assert merged[:3] == dense


@given(st.lists(st.integers(0, 20), max_size=12, unique=True),
       st.lists(st.integers(0, 20), max_size=12, unique=True))
def test_merge_matches_oracle(dense_ids, sparse_ids):
    dense = [cand(i) for i in dense_ids]
    sparse = [cand(i, origin="sparse") for i in sparse_ids]
    merged = merge_union(dense, sparse)
    assert [c.mau_id for c in merged] == oracle_merge(dense_ids, sparse_ids)
    assert len({c.mau_id for c in merged}) == len(merged)
    assert {c.mau_id for c in merged} == set(dense_ids) | set(sparse_ids)


def test_hybrid_search_fills_sparse_similarity():
    rows = np.eye(4)
    dense_index = DenseIndex(rows)
    sparse_index = SparseIndex([["storm"], ["fence"], ["tulip"], ["storm"]])
    query = rows[1]
    dense, sparse, merged = hybrid_search(dense_index, sparse_index, query,
                                          ["storm"], k=2)
    assert [c.mau_id for c in dense] == [1, 0]
    assert [c.mau_id for c in sparse] == [0, 3]
    for c in sparse:
        assert c.origin == "sparse"
        assert c.bm25_score is not None and c.bm25_score > 0
        assert c.sim == pytest.approx(float(rows[c.mau_id] @ query))
    assert [c.mau_id for c in merged] == [1, 0, 3]


def test_hybrid_search_without_bm25():
    rows = np.eye(3)
    dense_index = DenseIndex(rows)
    sparse_index = SparseIndex([["storm"], ["storm"], ["storm"]])
    dense, sparse, merged = hybrid_search(dense_index, sparse_index, rows[0],
                                          ["storm"], k=2, use_bm25=False)
    assert sparse == []
    assert merged == dense


# ---------------------------------------------------------------------------
# pyramid
# ---------------------------------------------------------------------------

def basis(i: int, dim: int = 4) -> np.ndarray:
    vec = np.zeros(dim)
    vec[i % dim] = 1.0
    return vec


def make_mau(mau_id: int, summary: str, cold_ref: str | None = None,
             modality: ModalityKind = ModalityKind.TEXT) -> Mau:
    return Mau(id=mau_id, summary=summary, embedding=basis(mau_id),
               cold_ref=cold_ref, timestamp_ms=1735689600000 + mau_id,
               modality=modality,
               source={"conversation_id": "conv-0", "speaker": "Avery",
                       "timestamp": "2025-01-01T00:00:00.000Z"})


@pytest.fixture
def cold(tmp_path):
    return ColdStore(tmp_path / "cold")


def pyramid_cfg(**overrides) -> EngineConfig:
    base = dict(embedding_dim=4, theta=0.3, budget_B_tokens=64)
    base.update(overrides)
    return EngineConfig(**base)


def test_summaries_stay_level_one_without_cold_refs(cold):
    maus = {i: make_mau(i, f"short note {i}") for i in range(3)}
    candidates = [cand(0, 0.9), cand(1, 0.8), cand(2, 0.7)]
    bundle = pyramid_expand(candidates, maus, cold, pyramid_cfg())
    assert [b.mau_id for b in bundle.blocks] == [0, 1, 2]
    assert all(b.level == 1 and b.token_cost == 0 for b in bundle.blocks)
    assert [b.text for b in bundle.blocks] == [maus[i].summary for i in range(3)]
    assert bundle.total_expansion_tokens == 0


def test_gate_is_strict(cold):
    full = "a detailed record well beyond its summary"
    maus = {0: make_mau(0, "summary zero", cold.put_text(full)),
            1: make_mau(1, "summary one", cold.put_text(full + " indeed"))}
    cfg = pyramid_cfg(theta=0.5)
    bundle = pyramid_expand([cand(0, 0.5), cand(1, 0.5001)], maus, cold, cfg)
    by_id = {b.mau_id: b for b in bundle.blocks}
    assert by_id[0].level == 1
    assert by_id[1].level == 2


def test_full_text_swap_charges_its_token_count(cold):
    full = "x" * 41
    maus = {0: make_mau(0, "tiny", cold.put_text(full))}
    bundle = pyramid_expand([cand(0, 0.9)], maus, cold, pyramid_cfg())
    block = bundle.blocks[0]
    assert block.level == 2
    assert block.text == full
    assert block.token_cost == 11
    assert bundle.total_expansion_tokens == 11


def test_expansion_stops_at_first_overflow(cold):
    texts = {0: "a" * 40, 1: "b" * 400, 2: "c" * 20}
    maus = {i: make_mau(i, f"s{i}", cold.put_text(texts[i])) for i in range(3)}
    candidates = [cand(0, 0.9), cand(1, 0.8), cand(2, 0.7)]
    cfg = pyramid_cfg(budget_B_tokens=18)
    bundle = pyramid_expand(candidates, maus, cold, cfg)
    levels = {b.mau_id: b.level for b in bundle.blocks}
    # the cheaper third text is not picked up after the second overflows
    assert levels == {0: 2, 1: 1, 2: 1}
    assert bundle.total_expansion_tokens == 10


def test_cold_text_equal_to_summary_is_free(cold):
    same = "identical summary and full text"
    maus = {0: make_mau(0, same, cold.put_text(same)),
            1: make_mau(1, "s1", cold.put_text("y" * 32))}
    bundle = pyramid_expand([cand(0, 0.9), cand(1, 0.8)], maus, cold,
                            pyramid_cfg(budget_B_tokens=8))
    by_id = {b.mau_id: b for b in bundle.blocks}
    assert by_id[0].level == 1 and by_id[0].token_cost == 0
    assert by_id[1].level == 2
    assert bundle.total_expansion_tokens == 8


def test_missing_cold_object_keeps_summary_and_warns(cold):
    maus = {0: make_mau(0, "orphaned", "0" * 64)}
    bundle = pyramid_expand([cand(0, 0.9)], maus, cold, pyramid_cfg())
    assert bundle.blocks[0].level == 1
    assert len(bundle.warnings) == 1
    assert "mau 0" in bundle.warnings[0]


def test_binary_payload_attaches_at_level_three(cold):
    payload = b"\xff\xfe" * 20
    ref = cold.put(payload)
    maus = {0: make_mau(0, "a camera frame", ref, modality=ModalityKind.IMAGE)}
    bundle = pyramid_expand([cand(0, 0.9)], maus, cold, pyramid_cfg())
    block = bundle.blocks[0]
    assert block.level == 3
    assert block.media_ref == ref
    assert block.text == "a camera frame"
    assert block.token_cost == 10
    assert bundle.total_expansion_tokens == 10


def test_raw_attachment_skips_and_continues(cold):
    big = cold.put(b"\xff" * 45)
    small = cold.put(b"\xfe" * 29)
    maus = {0: make_mau(0, "big clip", big, modality=ModalityKind.VIDEO),
            1: make_mau(1, "small clip", small, modality=ModalityKind.VIDEO)}
    candidates = [cand(0, 0.9), cand(1, 0.5)]
    bundle = pyramid_expand(candidates, maus, cold, pyramid_cfg(budget_B_tokens=10))
    by_id = {b.mau_id: b for b in bundle.blocks}
    # the better ratio does not fit, the worse one does
    assert by_id[0].level == 1 and by_id[0].media_ref is None
    assert by_id[1].level == 3 and by_id[1].media_ref == small
    assert bundle.total_expansion_tokens == 8


def test_levels_two_and_three_share_one_budget(cold):
    text_ref = cold.put_text("t" * 32)
    media_ref = cold.put(b"\xff" * 32)
    maus = {0: make_mau(0, "s0", text_ref),
            1: make_mau(1, "s1", media_ref, modality=ModalityKind.AUDIO)}
    bundle = pyramid_expand([cand(0, 0.9), cand(1, 0.8)], maus, cold,
                            pyramid_cfg(budget_B_tokens=12))
    by_id = {b.mau_id: b for b in bundle.blocks}
    assert by_id[0].level == 2 and by_id[0].token_cost == 8
    assert by_id[1].level == 1
    assert bundle.total_expansion_tokens == 8


@pytest.mark.parametrize("seed", range(6))
def test_total_charge_never_exceeds_budget(cold, seed):
    rng = random.Random(seed)
    maus = {}
    candidates = []
    for i in range(rng.randint(1, 10)):
        kind = rng.choice(["plain", "text", "media"])
        if kind == "plain":
            ref = None
        elif kind == "text":
            ref = cold.put_text("w" * rng.randint(1, 120))
        else:
            ref = cold.put(bytes([255, rng.randrange(256)]) * rng.randint(1, 60))
        maus[i] = make_mau(i, f"s{i}", ref)
        candidates.append(cand(i, rng.uniform(-0.2, 1.0)))
    budget = rng.randint(0, 40)
    bundle = pyramid_expand(candidates, maus, cold,
                            pyramid_cfg(budget_B_tokens=budget))
    assert bundle.total_expansion_tokens <= budget
    assert bundle.total_expansion_tokens == sum(b.token_cost for b in bundle.blocks)
    assert [b.mau_id for b in bundle.blocks] == [c.mau_id for c in candidates]


def test_summaries_only_bundle(cold):
    maus = {i: make_mau(i, f"note {i}") for i in range(2)}
    bundle = summaries_only([cand(1, 0.9), cand(0, 0.1)], maus)
    assert [b.mau_id for b in bundle.blocks] == [1, 0]
    assert all(b.level == 1 for b in bundle.blocks)
    assert bundle.total_expansion_tokens == 0

"""Event decoding, novelty gates, and the ingestion pipeline."""

from __future__ import annotations

import math
from types import SimpleNamespace

import numpy as np
import pytest

from memengine.core.config import EngineConfig
from memengine.core.tokens import surface_tokens
from memengine.core.types import ModalityKind
from memengine.ingest.events import (
    EventError,
    event_from_dict,
    event_to_dict,
    events_from_jsonl,
    events_to_jsonl,
)
from memengine.ingest.novelty import (
    TextNoveltyFilter,
    VisualNoveltyFilter,
    audio_gate,
    jaccard,
)
from memengine.ingest.pipeline import IngestError, IngestStats, Ingestor, first_tokens
from memengine.knowledge.graph import KnowledgeGraph
from memengine.providers.mock import (
    MockChatProvider,
    MockEmbeddingProvider,
    MockEntityExtractor,
)
from memengine.storage.cold import ColdStore
from memengine.storage.hot import HotStore

from conftest import make_event

LONG_TEXT = " ".join(f"word{i}" for i in range(60))


# ---------------------------------------------------------------------------
# event records
# ---------------------------------------------------------------------------

def base_doc(**overrides):
    doc = {
        "conversation_id": "conv-0",
        "speaker": "Avery",
        "timestamp": "2025-01-01T00:00:00.000Z",
        "modality": "text",
        "text": "hello there",
    }
    doc.update(overrides)
    return doc


def test_event_from_dict_happy_path():
    event = event_from_dict(base_doc(session_id="s1"))
    assert event.modality is ModalityKind.TEXT
    assert event.timestamp_ms == 1735689600000
    assert event.extras == {"session_id": "s1"}


@pytest.mark.parametrize("doc", [
    "not an object",
    {},
    base_doc(conversation_id=""),
    base_doc(speaker=7),
    base_doc(modality="hologram"),
    base_doc(timestamp="yesterday"),
    base_doc(text=5),
    base_doc(frame_embedding=[]),
    base_doc(frame_embedding=["x"]),
    base_doc(speech_prob=True),
    base_doc(speech_prob="loud"),
])
def test_event_from_dict_rejects_bad_docs(doc):
    with pytest.raises(EventError):
        event_from_dict(doc)


def test_event_round_trip_keeps_extras_and_optionals():
    doc = base_doc(modality="video", caption="a hillside",
                   frame_embedding=[1.0, 0.0], session_id="s2")
    event = event_from_dict(doc)
    back = event_to_dict(event)
    assert back["caption"] == "a hillside"
    assert back["frame_embedding"] == [1.0, 0.0]
    assert back["session_id"] == "s2"
    assert "speech_prob" not in back


def test_speech_prob_serialized_only_for_audio():
    audio = event_from_dict(base_doc(modality="audio", speech_prob=0.7))
    assert event_to_dict(audio)["speech_prob"] == 0.7
    text = event_from_dict(base_doc(speech_prob=0.7))
    assert "speech_prob" not in event_to_dict(text)


def test_events_jsonl_round_trip(tmp_path):
    events = [event_from_dict(base_doc(text=f"line {i}")) for i in range(3)]
    path = tmp_path / "events.jsonl"
    events_to_jsonl(events, path)
    assert list(events_from_jsonl(path)) == events


def test_events_jsonl_reports_offending_line(tmp_path):
    path = tmp_path / "events.jsonl"
    path.write_text('{"conversation_id": "c"}\n')
    with pytest.raises(EventError, match=":1:"):
        list(events_from_jsonl(path))


# ---------------------------------------------------------------------------
# novelty gates
# ---------------------------------------------------------------------------

def test_jaccard_basics():
    assert jaccard(frozenset(), frozenset()) == 1.0
    assert jaccard(frozenset({"a"}), frozenset()) == 0.0
    assert jaccard(frozenset({"a", "b"}), frozenset({"b", "c"})) == pytest.approx(1 / 3)


def test_text_filter_blocks_near_duplicates():
    gate = TextNoveltyFilter(tau_dup=0.8)
    assert gate.admit("c", "the grey terrier slept by the door")
    assert not gate.admit("c", "the grey terrier slept by the door!")
    assert gate.admit("c", "tulip bulbs go in before the frost")


def test_text_filter_window_eviction():
    gate = TextNoveltyFilter(tau_dup=0.8, window=2)
    assert gate.admit("c", "alpha beta gamma")
    assert gate.admit("c", "delta epsilon zeta")
    assert gate.admit("c", "eta theta iota")
    # the first text has fallen out of the two-entry window
    assert gate.admit("c", "alpha beta gamma")


def test_text_filter_isolates_conversations():
    gate = TextNoveltyFilter(tau_dup=0.8)
    assert gate.admit("a", "same words here")
    assert gate.admit("b", "same words here")
    assert not gate.admit("a", "same words here")


def frame(angle: float) -> np.ndarray:
    return np.array([math.cos(angle), math.sin(angle)])


def test_visual_filter_bands():
    gate = VisualNoveltyFilter(tau_high=0.9, tau_low=0.7, frame_buffer=3)
    assert gate.classify("c", frame(0.0)).kind == "scene_change"
    gate.register("c", 0, frame(0.0))
    assert gate.classify("c", frame(0.0)) == \
        gate.classify("c", frame(0.0))
    verdict = gate.classify("c", frame(0.1))
    assert verdict.kind == "duplicate"
    assert verdict.linked_mau_id == 0
    verdict = gate.classify("c", frame(0.6))
    assert verdict.kind == "continuation"
    assert verdict.linked_mau_id == 0
    assert gate.classify("c", frame(1.4)).kind == "scene_change"


def test_visual_filter_links_closest_frame():
    gate = VisualNoveltyFilter(tau_high=0.9, tau_low=0.7, frame_buffer=3)
    gate.register("c", 0, frame(0.0))
    gate.register("c", 1, frame(0.5))
    assert gate.classify("c", frame(0.45)).linked_mau_id == 1


def test_visual_filter_buffer_eviction():
    gate = VisualNoveltyFilter(tau_high=0.9, tau_low=0.7, frame_buffer=3)
    angles = [0.0, 1.5, 3.0, 4.5]
    for i, angle in enumerate(angles):
        gate.register("c", i, frame(angle))
    # the first frame was evicted, so a repeat of it is a scene change again
    assert gate.classify("c", frame(0.0)).kind == "scene_change"
    assert gate.classify("c", frame(4.5)).kind == "duplicate"


def test_visual_filter_rejects_bad_embeddings():
    gate = VisualNoveltyFilter(tau_high=0.9, tau_low=0.7, frame_buffer=3)
    with pytest.raises(ValueError):
        gate.classify("c", np.zeros(2))
    with pytest.raises(ValueError):
        gate.register("c", 0, np.zeros((2, 2)))


def test_audio_gate_threshold_is_inclusive():
    assert audio_gate(0.5, 0.5)
    assert not audio_gate(0.49, 0.5)
    assert audio_gate(1.0, 0.5)


# ---------------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------------

@pytest.fixture
def rig(tmp_path):
    def build(cfg: EngineConfig | None = None) -> SimpleNamespace:
        cfg = cfg or EngineConfig(embedding_dim=16)
        store = HotStore.create(tmp_path / "store", cfg)
        cold = ColdStore(tmp_path / "store" / "cold")
        graph = KnowledgeGraph()
        embedder = MockEmbeddingProvider(dim=cfg.embedding_dim)
        ingestor = Ingestor(store, cold, graph, embedder, MockChatProvider(),
                            MockEntityExtractor(), cfg)
        built.append(store)
        return SimpleNamespace(ingestor=ingestor, store=store, cold=cold,
                               graph=graph, embedder=embedder, cfg=cfg)

    built: list[HotStore] = []
    yield build
    for store in built:
        store.close()


def test_short_text_keeps_itself_as_summary(rig):
    r = rig()
    result = r.ingestor.ingest(make_event(0, "Rosa adopted a grey terrier"))
    assert result.accepted
    mau = result.mau
    assert mau.id == 0
    assert mau.summary == "Rosa adopted a grey terrier"
    assert mau.cold_ref is None
    assert mau.modality is ModalityKind.TEXT
    assert np.allclose(mau.embedding, r.embedder.embed(mau.summary))
    assert r.store.count == 1


def test_long_text_summarizes_and_archives_full_text(rig):
    r = rig()
    result = r.ingestor.ingest(make_event(0, LONG_TEXT))
    mau = result.mau
    assert mau.summary == " ".join(surface_tokens(LONG_TEXT)[:40])
    assert mau.cold_ref is not None
    assert r.cold.get_text(mau.cold_ref) == LONG_TEXT


def test_disable_summarization_truncates_without_chat(rig):
    class ExplodingChat:
        def complete(self, req, grounding=None):
            raise AssertionError("summarizer must not be called")

    r = rig(EngineConfig(embedding_dim=16, disable_summarization=True))
    r.ingestor._chat = ExplodingChat()
    result = r.ingestor.ingest(make_event(0, LONG_TEXT))
    assert result.mau.summary == first_tokens(LONG_TEXT)
    assert r.cold.get_text(result.mau.cold_ref) == LONG_TEXT


def test_duplicate_text_is_filtered(rig):
    r = rig()
    assert r.ingestor.ingest(make_event(0, "the same sentence twice")).accepted
    repeat = r.ingestor.ingest(make_event(1, "the same sentence twice"))
    assert not repeat.accepted
    assert repeat.reason == "duplicate"
    assert repeat.mau is None
    assert r.store.count == 1


def test_silent_audio_is_filtered(rig):
    r = rig()
    result = r.ingestor.ingest(make_event(0, "barely audible", modality="audio",
                                          speech_prob=0.2))
    assert not result.accepted
    assert result.reason == "silence"
    loud = r.ingestor.ingest(make_event(1, "clear speech here", modality="audio",
                                        speech_prob=0.9))
    assert loud.accepted
    assert loud.mau.source["speech_prob"] == 0.9


def test_video_duplicate_and_continuation(rig):
    r = rig()
    first = r.ingestor.ingest(make_event(
        0, "waves", modality="video", caption="waves on a beach",
        frame_embedding=(1.0, 0.0)))
    assert first.accepted
    dup = r.ingestor.ingest(make_event(
        1, "waves", modality="video", caption="waves on a beach again",
        frame_embedding=(0.999, 0.01)))
    assert not dup.accepted and dup.reason == "duplicate"
    cont = r.ingestor.ingest(make_event(
        2, "gulls", modality="video", caption="gulls over the beach",
        frame_embedding=(0.8, 0.6)))
    assert cont.accepted
    assert cont.mau.links == ((first.mau.id, "continuation"),)
    cut = r.ingestor.ingest(make_event(
        3, "kitchen", modality="video", caption="a kitchen interior",
        frame_embedding=(0.0, 1.0)))
    assert cut.accepted
    assert cut.mau.links == ()


def test_video_summary_merges_caption_and_transcript(rig):
    r = rig()
    result = r.ingestor.ingest(make_event(
        0, "birds chirping", modality="video",
        caption="Rosa waters the tulip garden", frame_embedding=(1.0, 0.0)))
    assert result.mau.summary == "Rosa waters the tulip garden birds chirping"
    assert r.cold.get_text(result.mau.cold_ref) == "Rosa waters the tulip garden"


def test_image_uses_caption_and_archives_media(rig, tmp_path):
    media = tmp_path / "photo.bin"
    payload = b"\x89PNG fake bytes"
    media.write_bytes(payload)
    r = rig()
    result = r.ingestor.ingest(make_event(
        0, "", modality="image", caption="a terrier on a porch",
        media_path=str(media)))
    mau = result.mau
    assert mau.summary == "a terrier on a porch"
    assert r.cold.get(mau.cold_ref) == payload
    assert mau.source["media_path"] == str(media)
    assert mau.source["caption"] == "a terrier on a porch"


def test_unreadable_media_raises(rig, tmp_path):
    r = rig()
    with pytest.raises(IngestError):
        r.ingestor.ingest(make_event(0, "", modality="image", caption="x",
                                     media_path=str(tmp_path / "gone.bin")))


def test_accepted_units_feed_the_graph(rig):
    r = rig()
    r.ingestor.ingest(make_event(0, "Caroline painted the sunset"))
    names = {e.name for e in r.graph.entities.values()}
    assert names == {"Caroline", "sunset"}
    for entity in r.graph.entities.values():
        assert entity.mau_ids == {0}


def test_disable_graph_skips_extraction(rig):
    r = rig(EngineConfig(embedding_dim=16, disable_graph=True))
    r.ingestor.ingest(make_event(0, "Caroline painted the sunset"))
    assert r.graph.entities == {}


def test_ingest_all_stats(rig):
    r = rig()
    events = [
        make_event(0, "a first unique sentence"),
        make_event(1, "a first unique sentence"),
        make_event(2, "quiet", modality="audio", speech_prob=0.1),
        make_event(3, "a second unique sentence"),
    ]
    stats = r.ingestor.ingest_all(events)
    assert stats.accepted == 2
    assert stats.filtered == {"duplicate": 1, "silence": 1}
    assert stats.total == 4
    assert stats.to_dict() == {
        "accepted": 2,
        "filtered": {"duplicate": 1, "silence": 1},
        "total": 4,
    }


def test_stats_record_defaults_unknown_reason():
    stats = IngestStats()
    from memengine.ingest.pipeline import IngestResult
    stats.record(IngestResult(False))
    assert stats.filtered == {"unknown": 1}


def build_ingestor(root, cfg: EngineConfig):
    store = HotStore.open(root) if (root / "config.json").exists() \
        else HotStore.create(root, cfg)
    ingestor = Ingestor(store, ColdStore(root / "cold"), KnowledgeGraph(),
                        MockEmbeddingProvider(dim=cfg.embedding_dim),
                        MockChatProvider(), MockEntityExtractor(), cfg)
    return store, ingestor


def test_duplicate_window_survives_reopen(tmp_path):
    cfg = EngineConfig(embedding_dim=16)
    root = tmp_path / "store"
    store, ingestor = build_ingestor(root, cfg)
    assert ingestor.ingest(make_event(0, "the same sentence across runs")).accepted
    store.commit()
    store.close()

    store, ingestor = build_ingestor(root, cfg)
    try:
        repeat = ingestor.ingest(make_event(1, "the same sentence across runs"))
        assert not repeat.accepted
        assert repeat.reason == "duplicate"
    finally:
        store.close()


def test_long_duplicates_are_judged_on_summaries(rig):
    r = rig()
    assert r.ingestor.ingest(make_event(0, LONG_TEXT)).accepted
    same_head = LONG_TEXT + " trailing words beyond the summary horizon"
    repeat = r.ingestor.ingest(make_event(1, same_head))
    assert not repeat.accepted
    assert repeat.reason == "duplicate"

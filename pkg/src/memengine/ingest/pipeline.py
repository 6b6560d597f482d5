"""Event routing: novelty gates, summarization, and durable unit creation."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from ..core.config import EngineConfig
from ..core.tokens import surface_tokens
from ..core.types import Mau, ModalityKind
from ..knowledge.extract import extract_and_link
from ..knowledge.graph import KnowledgeGraph
from ..providers.base import ChatProvider, ChatRequest, EmbeddingProvider, EntityExtractor
from ..storage.cold import ColdStore
from ..storage.hot import HotStore
from .events import Event
from .novelty import TextNoveltyFilter, VisualNoveltyFilter, audio_gate

SUMMARY_TOKEN_LIMIT = 40


class IngestError(RuntimeError):
    """An event could not be turned into a memory unit."""


@dataclass(frozen=True)
class IngestResult:
    """Outcome for one event: either a stored unit or a filter reason."""

    accepted: bool
    mau: Mau | None = None
    reason: str | None = None


@dataclass
class IngestStats:
    """Running totals over a batch of events."""

    accepted: int = 0
    filtered: dict[str, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return self.accepted + sum(self.filtered.values())

    def record(self, result: IngestResult) -> None:
        if result.accepted:
            self.accepted += 1
        else:
            reason = result.reason or "unknown"
            self.filtered[reason] = self.filtered.get(reason, 0) + 1

    def to_dict(self) -> dict[str, Any]:
        return {
            "accepted": self.accepted,
            "filtered": dict(sorted(self.filtered.items())),
            "total": self.total,
        }


def first_tokens(text: str, limit: int = SUMMARY_TOKEN_LIMIT) -> str:
    return " ".join(surface_tokens(text)[:limit])


class Ingestor:
    """Turns raw events into committed-on-demand memory units.

    Filters run before any write, so rejected events leave no trace. Graph
    extraction runs on every accepted unit unless disabled.
    """

    def __init__(self, store: HotStore, cold: ColdStore, graph: KnowledgeGraph,
                 embedder: EmbeddingProvider, chat: ChatProvider,
                 extractor: EntityExtractor, cfg: EngineConfig) -> None:
        self._store = store
        self._cold = cold
        self._graph = graph
        self._embedder = embedder
        self._chat = chat
        self._extractor = extractor
        self._cfg = cfg
        self._text_filter = TextNoveltyFilter(cfg.tau_dup)
        self._visual_filter = VisualNoveltyFilter(cfg.tau_high, cfg.tau_low,
                                                  cfg.frame_buffer)
        # the duplicate window is defined over stored summaries, so it
        # survives a process restart by replaying the recovered records
        for mau in store.all_records():
            if mau.modality in (ModalityKind.TEXT, ModalityKind.AUDIO):
                self._text_filter.record(
                    str(mau.source.get("conversation_id", "")), mau.summary)

    def ingest(self, event: Event) -> IngestResult:
        cfg = self._cfg
        if event.modality is ModalityKind.AUDIO \
                and not audio_gate(event.speech_prob, cfg.vad_threshold):
            return IngestResult(False, reason="silence")
        links: list[tuple[int, str]] = []
        frame_vec: np.ndarray | None = None
        if event.frame_embedding is not None:
            frame_vec = np.asarray(event.frame_embedding, dtype=np.float64)
            verdict = self._visual_filter.classify(event.conversation_id, frame_vec)
            if verdict.kind == "duplicate":
                return IngestResult(False, reason="duplicate")
            if verdict.kind == "continuation" and verdict.linked_mau_id is not None:
                links.append((verdict.linked_mau_id, "continuation"))
        summary = self._summarize(event)
        if event.modality in (ModalityKind.TEXT, ModalityKind.AUDIO):
            # novelty is judged summary-against-summary, so re-ingesting an
            # already accepted event is always a duplicate
            if self._text_filter.is_duplicate(event.conversation_id, summary):
                return IngestResult(False, reason="duplicate")
        cold_ref = self._write_cold(event, summary)
        mau = Mau(
            id=self._store.next_id,
            summary=summary,
            embedding=self._embedder.embed(summary),
            cold_ref=cold_ref,
            timestamp_ms=event.timestamp_ms,
            modality=event.modality,
            links=tuple(links),
            source=self._source_of(event),
        )
        self._store.append(mau)
        if event.modality in (ModalityKind.TEXT, ModalityKind.AUDIO):
            self._text_filter.record(event.conversation_id, summary)
        if frame_vec is not None:
            self._visual_filter.register(event.conversation_id, mau.id, frame_vec)
        if not cfg.disable_graph:
            extract_and_link(self._graph, mau, self._extractor,
                             self._embedder, cfg)
        return IngestResult(True, mau=mau)

    def ingest_all(self, events: Iterable[Event]) -> IngestStats:
        stats = IngestStats()
        for event in events:
            stats.record(self.ingest(event))
        return stats

    def _base_text(self, event: Event) -> str:
        if event.modality in (ModalityKind.TEXT, ModalityKind.AUDIO):
            return event.text
        return event.caption or event.text

    def _summarize(self, event: Event) -> str:
        # Imported here: the orchestrator package imports this module at load
        # time, so a top-level import would be circular.
        from ..orchestrator.prompts import (
            TRANSCRIPT_CLIP_CHARS,
            render_prompt,
        )

        base = self._base_text(event)
        if self._cfg.disable_summarization \
                or event.modality is ModalityKind.IMAGE:
            return first_tokens(base)
        if event.modality is ModalityKind.VIDEO:
            rendered = render_prompt("video_summary", {
                "frame_descriptions": event.caption or "",
                "audio_transcript": event.text or "",
            })
        else:
            rendered = render_prompt("audio_summary", {
                "transcript": base[:TRANSCRIPT_CLIP_CHARS],
            })
        request = ChatRequest(system=rendered["system"], user=rendered["user"],
                              force_json=False)
        reply = self._chat.complete(request).strip()
        return reply if reply else first_tokens(base)

    def _write_cold(self, event: Event, summary: str) -> str | None:
        if event.media_path is not None:
            path = Path(event.media_path)
            try:
                payload = path.read_bytes()
            except OSError as exc:
                raise IngestError(f"cannot read media {event.media_path!r}: {exc}") from exc
            return self._cold.put(payload)
        if event.modality is ModalityKind.TEXT:
            if event.text == summary:
                return None
            return self._cold.put_text(event.text)
        return self._cold.put_text(self._base_text(event))

    def _source_of(self, event: Event) -> dict[str, Any]:
        source: dict[str, Any] = {
            "conversation_id": event.conversation_id,
            "speaker": event.speaker,
            "timestamp": event.timestamp_iso,
        }
        if event.media_path is not None:
            source["media_path"] = event.media_path
        if event.caption is not None:
            source["caption"] = event.caption
        if event.modality is ModalityKind.AUDIO:
            source["speech_prob"] = event.speech_prob
        source.update(event.extras)
        return source

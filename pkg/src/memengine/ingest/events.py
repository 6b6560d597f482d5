"""Incoming event records and their JSONL wire form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Iterator, Mapping

from ..core.types import ModalityKind, iso_to_ms

_KNOWN_FIELDS = frozenset({
    "conversation_id", "speaker", "timestamp", "modality", "text",
    "media_path", "caption", "frame_embedding", "speech_prob",
})


class EventError(ValueError):
    """Event record is structurally invalid."""


@dataclass(frozen=True)
class Event:
    """One observation offered to the ingestion pipeline.

    Audio events carry their transcript in ``text``; video frame events may
    carry a precomputed ``frame_embedding`` used only for novelty gating.
    Fields the schema does not know about ride along in ``extras``.
    """

    conversation_id: str
    speaker: str
    timestamp_iso: str
    modality: ModalityKind
    text: str = ""
    media_path: str | None = None
    caption: str | None = None
    frame_embedding: tuple[float, ...] | None = None
    speech_prob: float = 1.0
    extras: Mapping[str, Any] = field(default_factory=dict)

    @property
    def timestamp_ms(self) -> int:
        return iso_to_ms(self.timestamp_iso)


def event_from_dict(doc: Mapping[str, Any]) -> Event:
    """Build an Event from a decoded JSON object, validating as it goes."""
    if not isinstance(doc, Mapping):
        raise EventError(f"event must be an object, got {type(doc).__name__}")
    for key in ("conversation_id", "speaker", "timestamp", "modality"):
        if not isinstance(doc.get(key), str) or not doc[key]:
            raise EventError(f"event field {key!r} missing or not a string")
    try:
        modality = ModalityKind(doc["modality"])
    except ValueError as exc:
        raise EventError(f"unknown modality {doc['modality']!r}") from exc
    try:
        iso_to_ms(doc["timestamp"])
    except ValueError as exc:
        raise EventError(f"bad timestamp {doc['timestamp']!r}") from exc
    text = doc.get("text", "")
    if not isinstance(text, str):
        raise EventError("event field 'text' must be a string")
    frame_embedding = doc.get("frame_embedding")
    if frame_embedding is not None:
        if not isinstance(frame_embedding, (list, tuple)) or not frame_embedding:
            raise EventError("frame_embedding must be a non-empty number list")
        try:
            frame_embedding = tuple(float(x) for x in frame_embedding)
        except (TypeError, ValueError) as exc:
            raise EventError("frame_embedding must be a non-empty number list") from exc
    speech_prob = doc.get("speech_prob", 1.0)
    if isinstance(speech_prob, bool) or not isinstance(speech_prob, (int, float)):
        raise EventError("speech_prob must be a number")
    extras = {k: v for k, v in doc.items() if k not in _KNOWN_FIELDS}
    return Event(
        conversation_id=doc["conversation_id"],
        speaker=doc["speaker"],
        timestamp_iso=doc["timestamp"],
        modality=modality,
        text=text,
        media_path=doc.get("media_path"),
        caption=doc.get("caption"),
        frame_embedding=frame_embedding,
        speech_prob=float(speech_prob),
        extras=extras,
    )


def event_to_dict(event: Event) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "conversation_id": event.conversation_id,
        "speaker": event.speaker,
        "timestamp": event.timestamp_iso,
        "modality": event.modality.value,
        "text": event.text,
    }
    if event.media_path is not None:
        doc["media_path"] = event.media_path
    if event.caption is not None:
        doc["caption"] = event.caption
    if event.frame_embedding is not None:
        doc["frame_embedding"] = list(event.frame_embedding)
    if event.modality is ModalityKind.AUDIO:
        doc["speech_prob"] = event.speech_prob
    doc.update(event.extras)
    return doc


def events_to_jsonl(events: Iterable[Event], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for event in events:
            handle.write(json.dumps(event_to_dict(event), sort_keys=True) + "\n")


def events_from_jsonl(path: str | Path) -> Iterator[Event]:
    """Yield events from a JSONL file, reporting the offending line on error."""
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                doc = json.loads(line)
                yield event_from_dict(doc)
            except (json.JSONDecodeError, EventError) as exc:
                raise EventError(f"{path}:{lineno}: {exc}") from exc

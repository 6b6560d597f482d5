"""Selective ingestion: event schema, novelty gates, and the pipeline."""

from .events import (
    Event,
    EventError,
    event_from_dict,
    event_to_dict,
    events_from_jsonl,
    events_to_jsonl,
)
from .novelty import (
    TEXT_WINDOW,
    TextNoveltyFilter,
    VisualNoveltyFilter,
    VisualVerdict,
    audio_gate,
    jaccard,
)
from .pipeline import (
    SUMMARY_TOKEN_LIMIT,
    IngestError,
    IngestResult,
    IngestStats,
    Ingestor,
    first_tokens,
)

__all__ = [
    "Event",
    "EventError",
    "IngestError",
    "IngestResult",
    "IngestStats",
    "Ingestor",
    "SUMMARY_TOKEN_LIMIT",
    "TEXT_WINDOW",
    "TextNoveltyFilter",
    "VisualNoveltyFilter",
    "VisualVerdict",
    "audio_gate",
    "event_from_dict",
    "event_to_dict",
    "events_from_jsonl",
    "events_to_jsonl",
    "first_tokens",
    "jaccard",
]

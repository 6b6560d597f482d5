"""Core record types for the memory store."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Any

import numpy as np

UNIT_NORM_TOL = 1e-6


class ModalityKind(str, Enum):
    TEXT = "text"
    IMAGE = "image"
    AUDIO = "audio"
    VIDEO = "video"


@dataclass(frozen=True)
class Mau:
    """One atomic memory unit.

    Ids are dense integers assigned in ingestion order. The embedding is an
    L2-normalized vector over the unit's summary; raw or oversized content
    lives behind ``cold_ref`` in content-addressed storage.
    """

    id: int
    summary: str
    embedding: np.ndarray
    cold_ref: str | None
    timestamp_ms: int
    modality: ModalityKind
    links: tuple[tuple[int, str], ...] = ()
    source: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.id < 0:
            raise ValueError(f"mau id must be >= 0, got {self.id}")
        emb = np.asarray(self.embedding, dtype=np.float64)
        norm = float(np.linalg.norm(emb))
        if abs(norm - 1.0) > UNIT_NORM_TOL:
            raise ValueError(f"embedding norm {norm} not unit within {UNIT_NORM_TOL}")
        emb.flags.writeable = False
        object.__setattr__(self, "embedding", emb)
        object.__setattr__(self, "links", tuple((int(t), str(k)) for t, k in self.links))


def ms_to_iso(timestamp_ms: int) -> str:
    """Render epoch milliseconds as an ISO-8601 UTC string with ms precision."""
    dt = datetime.fromtimestamp(timestamp_ms / 1000.0, tz=timezone.utc)
    return dt.strftime("%Y-%m-%dT%H:%M:%S.") + f"{timestamp_ms % 1000:03d}Z"


def iso_to_ms(value: str) -> int:
    """Parse an ISO-8601 timestamp into epoch milliseconds (UTC assumed if naive)."""
    text = value.strip()
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    dt = datetime.fromisoformat(text)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return int(round(dt.timestamp() * 1000))

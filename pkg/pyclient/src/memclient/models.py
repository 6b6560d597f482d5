"""Typed wrappers over the service's wire objects.

Every wrapper is a frozen, wire-faithful mirror: ``from_dict`` consumes the
exact response body and ``to_dict`` reproduces it, so round-tripping through
the types never changes a payload.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping


@dataclass(frozen=True)
class QueryResponse:
    """An answer plus the grounding and timing the service reported."""

    answer: str
    reasoning: str
    candidates_used: tuple[tuple[int, int], ...]
    timing: Mapping[str, float]
    version: int

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "QueryResponse":
        return cls(
            answer=doc["answer"],
            reasoning=doc["reasoning"],
            candidates_used=tuple((pair[0], pair[1])
                                  for pair in doc["candidates_used"]),
            timing=dict(doc["timing"]),
            version=doc["version"],
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "answer": self.answer,
            "reasoning": self.reasoning,
            "candidates_used": [list(pair) for pair in self.candidates_used],
            "timing": dict(self.timing),
            "version": self.version,
        }


@dataclass(frozen=True)
class FilteredReason:
    """Why an event was not stored (duplicate, low novelty, and so on)."""

    reason: str


@dataclass(frozen=True)
class CommitReceipt:
    """Durable-state marker returned by a commit."""

    committed: int
    tag: str

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "CommitReceipt":
        return cls(committed=doc["committed"], tag=doc["tag"])

    def to_dict(self) -> dict[str, Any]:
        return {"committed": self.committed, "tag": self.tag}


@dataclass(frozen=True)
class StoreStats:
    """Counters describing the store behind the service."""

    committed: int
    uncommitted: int
    tag: str
    by_modality: Mapping[str, int]
    entities: int
    relations: int
    cold_objects: int

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "StoreStats":
        return cls(
            committed=doc["committed"],
            uncommitted=doc["uncommitted"],
            tag=doc["tag"],
            by_modality=dict(doc["by_modality"]),
            entities=doc["entities"],
            relations=doc["relations"],
            cold_objects=doc["cold_objects"],
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "committed": self.committed,
            "uncommitted": self.uncommitted,
            "tag": self.tag,
            "by_modality": dict(self.by_modality),
            "entities": self.entities,
            "relations": self.relations,
            "cold_objects": self.cold_objects,
        }


@dataclass(frozen=True)
class MemoryUnit:
    """One stored memory as the service reports it.

    ``embedding`` is None unless the lookup explicitly asked for it.
    """

    id: int
    summary: str
    cold_ref: str | None
    timestamp: str
    modality: str
    links: tuple[tuple[int, str], ...]
    source: Mapping[str, Any]
    embedding: tuple[float, ...] | None = None

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "MemoryUnit":
        embedding = doc.get("embedding")
        return cls(
            id=doc["id"],
            summary=doc["summary"],
            cold_ref=doc["cold_ref"],
            timestamp=doc["timestamp"],
            modality=doc["modality"],
            links=tuple((pair[0], pair[1]) for pair in doc["links"]),
            source=dict(doc["source"]),
            embedding=None if embedding is None else tuple(embedding),
        )

    def to_dict(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "id": self.id,
            "summary": self.summary,
            "cold_ref": self.cold_ref,
            "timestamp": self.timestamp,
            "modality": self.modality,
            "links": [list(pair) for pair in self.links],
            "source": dict(self.source),
        }
        if self.embedding is not None:
            doc["embedding"] = list(self.embedding)
        return doc

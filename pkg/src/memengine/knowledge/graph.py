"""Entity-relation graph built from extracted mentions.

Entities carry every merged surface form as an alias plus back-links to the
memory units they were mentioned in. Relations are directed, typed edges
deduplicated per (subject, object, type). The whole graph serializes to
graph.jsonl as tagged records.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterator

import numpy as np

ENTITY_TYPES = ("Person", "Location", "Object", "Event", "Concept", "Time", "Organization")
RELATION_TYPES = ("located_in", "part_of", "interacts_with", "owns", "attended",
                  "created_by", "related_to")

_ETYPE_BY_LOWER = {t.lower(): t for t in ENTITY_TYPES}


def coerce_entity_type(value: str) -> str:
    """Map a type string onto the closed entity-type set; unknown -> Concept."""
    return _ETYPE_BY_LOWER.get(str(value).strip().lower(), "Concept")


def coerce_relation_type(value: str) -> str:
    """Map a predicate onto the closed relation-type set; unknown -> related_to."""
    cleaned = str(value).strip().lower().replace(" ", "_")
    return cleaned if cleaned in RELATION_TYPES else "related_to"


@dataclass
class Entity:
    id: int
    name: str
    etype: str
    name_embedding: np.ndarray
    confidence: float = 1.0
    aliases: list[str] = field(default_factory=list)
    attributes: dict[str, Any] = field(default_factory=dict)
    mau_ids: set[int] = field(default_factory=set)


@dataclass(frozen=True)
class Relation:
    subject_id: int
    object_id: int
    rtype: str
    confidence: float = 1.0


class KnowledgeGraph:
    def __init__(self) -> None:
        self.entities: dict[int, Entity] = {}
        self._relations: dict[tuple[int, int, str], float] = {}
        self._next_id = 0

    # -- mutation ---------------------------------------------------------

    def add_entity(self, name: str, etype: str, name_embedding: np.ndarray,
                   confidence: float = 1.0,
                   attributes: dict[str, Any] | None = None) -> Entity:
        entity = Entity(
            id=self._next_id,
            name=name,
            etype=etype,
            name_embedding=np.asarray(name_embedding, dtype=np.float64),
            confidence=confidence,
            aliases=[name],
            attributes=dict(attributes or {}),
        )
        self.entities[entity.id] = entity
        self._next_id += 1
        return entity

    def merge_into(self, target: Entity, surface: str, confidence: float,
                   attributes: dict[str, Any] | None = None) -> Entity:
        """Fold a new mention into an existing entity.

        The canonical name and its embedding stay with the earliest record;
        existing attribute values win over incoming ones.
        """
        if surface not in target.aliases:
            target.aliases.append(surface)
        target.confidence = max(target.confidence, confidence)
        for key, value in (attributes or {}).items():
            target.attributes.setdefault(key, value)
        return target

    def add_relation(self, subject_id: int, object_id: int, rtype: str,
                     confidence: float = 1.0) -> None:
        if subject_id not in self.entities or object_id not in self.entities:
            raise KeyError(f"relation references unknown entity id "
                           f"({subject_id}, {object_id})")
        key = (subject_id, object_id, rtype)
        prior = self._relations.get(key)
        self._relations[key] = confidence if prior is None else max(prior, confidence)

    # -- access -----------------------------------------------------------

    @property
    def relations(self) -> list[Relation]:
        return [Relation(s, o, t, c) for (s, o, t), c in sorted(self._relations.items())]

    def entities_of_type(self, etype: str) -> Iterator[Entity]:
        for entity in self.entities.values():
            if entity.etype == etype:
                yield entity

    def neighbors(self) -> dict[int, set[int]]:
        """Undirected adjacency over relation endpoints."""
        adj: dict[int, set[int]] = {eid: set() for eid in self.entities}
        for (s, o, _t) in self._relations:
            adj[s].add(o)
            adj[o].add(s)
        return adj

    def snapshot(self) -> "KnowledgeGraph":
        return copy.deepcopy(self)

    def restricted_to(self, mau_ids: set[int]) -> "KnowledgeGraph":
        """The graph as if only the given memory units had been ingested.

        Back-links intersect the set, entities left without any back-link
        drop, and relations survive only between surviving entities.
        """
        sub = KnowledgeGraph()
        for eid in sorted(self.entities):
            entity = self.entities[eid]
            kept = entity.mau_ids & mau_ids
            if not kept:
                continue
            sub.entities[eid] = Entity(
                id=entity.id,
                name=entity.name,
                etype=entity.etype,
                name_embedding=entity.name_embedding.copy(),
                confidence=entity.confidence,
                aliases=list(entity.aliases),
                attributes=dict(entity.attributes),
                mau_ids=kept,
            )
        sub._next_id = self._next_id
        for (subject_id, object_id, rtype), conf in self._relations.items():
            if subject_id in sub.entities and object_id in sub.entities:
                sub._relations[(subject_id, object_id, rtype)] = conf
        return sub

    # -- persistence --------------------------------------------------------

    def save(self, path: str | Path) -> None:
        path = Path(path)
        tmp = path.with_suffix(path.suffix + ".tmp")
        with open(tmp, "w", encoding="utf-8") as fh:
            for eid in sorted(self.entities):
                e = self.entities[eid]
                fh.write(json.dumps({
                    "kind": "entity",
                    "id": e.id,
                    "name": e.name,
                    "type": e.etype,
                    "confidence": e.confidence,
                    "aliases": e.aliases,
                    "attributes": e.attributes,
                    "mau_ids": sorted(e.mau_ids),
                    "name_embedding": [float(x) for x in e.name_embedding],
                }, sort_keys=True) + "\n")
            for rel in self.relations:
                fh.write(json.dumps({
                    "kind": "relation",
                    "subject_id": rel.subject_id,
                    "object_id": rel.object_id,
                    "type": rel.rtype,
                    "confidence": rel.confidence,
                }, sort_keys=True) + "\n")
        tmp.replace(path)

    @classmethod
    def load(cls, path: str | Path) -> "KnowledgeGraph":
        graph = cls()
        path = Path(path)
        if not path.exists():
            return graph
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                doc = json.loads(line)
                if doc["kind"] == "entity":
                    entity = Entity(
                        id=int(doc["id"]),
                        name=doc["name"],
                        etype=doc["type"],
                        name_embedding=np.asarray(doc["name_embedding"], dtype=np.float64),
                        confidence=float(doc["confidence"]),
                        aliases=list(doc["aliases"]),
                        attributes=dict(doc["attributes"]),
                        mau_ids=set(doc["mau_ids"]),
                    )
                    graph.entities[entity.id] = entity
                    graph._next_id = max(graph._next_id, entity.id + 1)
                elif doc["kind"] == "relation":
                    graph._relations[(int(doc["subject_id"]), int(doc["object_id"]),
                                      doc["type"])] = float(doc["confidence"])
        return graph

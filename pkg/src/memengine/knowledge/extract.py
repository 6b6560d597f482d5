"""Schema validation for extractor output and graph population."""

from __future__ import annotations

from typing import Any

from ..core.config import EngineConfig
from ..core.types import Mau
from ..providers.base import EmbeddingProvider, EntityExtractor
from .graph import KnowledgeGraph, coerce_entity_type, coerce_relation_type
from .resolve import resolve_or_insert


class ExtractionError(ValueError):
    """Extractor output does not fit the expected schema."""


def _clamped_confidence(value: Any) -> float:
    try:
        conf = float(value)
    except (TypeError, ValueError) as exc:
        raise ExtractionError(f"confidence {value!r} is not a number") from exc
    return min(1.0, max(0.0, conf))


def coerce_extraction(doc: Any) -> dict[str, list[dict[str, Any]]]:
    """Validate raw extractor output against the extraction schema.

    Entity types and relation predicates outside the closed sets coerce to
    Concept and related_to; anything structurally wrong is an error.
    """
    if not isinstance(doc, dict):
        raise ExtractionError(f"extraction must be an object, got {type(doc).__name__}")
    entities_in = doc.get("entities")
    relations_in = doc.get("relations")
    if not isinstance(entities_in, list) or not isinstance(relations_in, list):
        raise ExtractionError("extraction needs 'entities' and 'relations' lists")
    entities: list[dict[str, Any]] = []
    for raw in entities_in:
        if not isinstance(raw, dict) or not isinstance(raw.get("name"), str) \
                or not raw["name"].strip():
            raise ExtractionError(f"bad entity entry: {raw!r}")
        attributes = raw.get("attributes", {})
        if not isinstance(attributes, dict):
            raise ExtractionError(f"entity attributes must be an object: {raw!r}")
        entities.append({
            "name": raw["name"].strip(),
            "type": coerce_entity_type(raw.get("type", "")),
            "attributes": attributes,
            "confidence": _clamped_confidence(raw.get("confidence", 1.0)),
        })
    relations: list[dict[str, Any]] = []
    for raw in relations_in:
        if not isinstance(raw, dict) or not isinstance(raw.get("subject"), str) \
                or not isinstance(raw.get("object"), str):
            raise ExtractionError(f"bad relation entry: {raw!r}")
        relations.append({
            "subject": raw["subject"].strip(),
            "object": raw["object"].strip(),
            "predicate": coerce_relation_type(raw.get("predicate", "")),
            "confidence": _clamped_confidence(raw.get("confidence", 1.0)),
        })
    return {"entities": entities, "relations": relations}


def extract_and_link(graph: KnowledgeGraph, mau: Mau, extractor: EntityExtractor,
                     embedder: EmbeddingProvider, cfg: EngineConfig) -> list[int]:
    """Extract from the unit's summary and fold the results into the graph.

    Every extracted entity resolves against the graph and back-links the
    unit; relations naming entities absent from this extraction are dropped,
    as are self-loops created by resolution. Returns the touched entity ids.
    """
    doc = coerce_extraction(extractor.extract(mau.summary))
    by_name: dict[str, int] = {}
    touched: list[int] = []
    for item in doc["entities"]:
        entity = resolve_or_insert(graph, item["name"], item["type"], embedder,
                                   cfg, item["confidence"], item["attributes"])
        entity.mau_ids.add(mau.id)
        key = item["name"].lower()
        by_name.setdefault(key, entity.id)
        touched.append(entity.id)
    for rel in doc["relations"]:
        subj = by_name.get(rel["subject"].lower())
        obj = by_name.get(rel["object"].lower())
        if subj is None or obj is None or subj == obj:
            continue
        graph.add_relation(subj, obj, rel["predicate"], rel["confidence"])
    return touched

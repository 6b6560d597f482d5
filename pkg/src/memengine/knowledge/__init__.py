"""Entity graph: typed entities, resolution, extraction, and expansion."""

from .expand import graph_candidates, graph_expand, identify_seeds
from .extract import ExtractionError, coerce_extraction, extract_and_link
from .graph import (
    ENTITY_TYPES,
    RELATION_TYPES,
    Entity,
    KnowledgeGraph,
    Relation,
    coerce_entity_type,
    coerce_relation_type,
)
from .resolve import hybrid_name_sim, jaro, jaro_winkler, resolve_or_insert

__all__ = [
    "ENTITY_TYPES",
    "RELATION_TYPES",
    "Entity",
    "ExtractionError",
    "KnowledgeGraph",
    "Relation",
    "coerce_entity_type",
    "coerce_extraction",
    "coerce_relation_type",
    "extract_and_link",
    "graph_candidates",
    "graph_expand",
    "hybrid_name_sim",
    "identify_seeds",
    "jaro",
    "jaro_winkler",
    "resolve_or_insert",
]

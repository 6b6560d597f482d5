"""Vendored JSON schemas for the service's version-1 wire format."""

from __future__ import annotations

from typing import Any

import jsonschema

from .errors import SchemaMismatch

_ID_LEVEL_PAIR = {
    "type": "array",
    "items": {"type": "integer"},
    "minItems": 2,
    "maxItems": 2,
}

QUERY_RESPONSE = {
    "type": "object",
    "required": ["answer", "reasoning", "candidates_used", "timing", "version"],
    "additionalProperties": False,
    "properties": {
        "answer": {"type": "string"},
        "reasoning": {"type": "string"},
        "candidates_used": {"type": "array", "items": _ID_LEVEL_PAIR},
        "timing": {
            "type": "object",
            "required": ["retrieval_ms", "generation_ms"],
            "additionalProperties": False,
            "properties": {
                "retrieval_ms": {"type": "number"},
                "generation_ms": {"type": "number"},
            },
        },
        "version": {"type": "integer"},
    },
}

INGEST_RESPONSE = {
    "oneOf": [
        {
            "type": "object",
            "required": ["accepted", "mau_id"],
            "additionalProperties": False,
            "properties": {
                "accepted": {"const": True},
                "mau_id": {"type": "integer", "minimum": 0},
            },
        },
        {
            "type": "object",
            "required": ["accepted", "reason"],
            "additionalProperties": False,
            "properties": {
                "accepted": {"const": False},
                "reason": {"type": "string"},
            },
        },
    ],
}

COMMIT_RESPONSE = {
    "type": "object",
    "required": ["committed", "tag"],
    "additionalProperties": False,
    "properties": {
        "committed": {"type": "integer", "minimum": 0},
        "tag": {"type": "string"},
    },
}

STATS_RESPONSE = {
    "type": "object",
    "required": ["committed", "uncommitted", "tag", "by_modality",
                 "entities", "relations", "cold_objects"],
    "additionalProperties": False,
    "properties": {
        "committed": {"type": "integer", "minimum": 0},
        "uncommitted": {"type": "integer", "minimum": 0},
        "tag": {"type": "string"},
        "by_modality": {
            "type": "object",
            "additionalProperties": {"type": "integer", "minimum": 0},
        },
        "entities": {"type": "integer", "minimum": 0},
        "relations": {"type": "integer", "minimum": 0},
        "cold_objects": {"type": "integer", "minimum": 0},
    },
}

MAU_RESPONSE = {
    "type": "object",
    "required": ["id", "summary", "cold_ref", "timestamp", "modality",
                 "links", "source"],
    "additionalProperties": False,
    "properties": {
        "id": {"type": "integer", "minimum": 0},
        "summary": {"type": "string"},
        "embedding": {"type": "array", "items": {"type": "number"}},
        "cold_ref": {"type": ["string", "null"]},
        "timestamp": {"type": "string"},
        "modality": {"type": "string"},
        "links": {
            "type": "array",
            "items": {"type": "array", "minItems": 2, "maxItems": 2},
        },
        "source": {"type": "object"},
    },
}

ERROR_RESPONSE = {
    "type": "object",
    "required": ["detail"],
    "properties": {
        "detail": {"type": ["string", "array"]},
    },
}


def check(payload: Any, schema: dict[str, Any], what: str) -> Any:
    """Validate a decoded response body; returns the payload unchanged."""
    try:
        jsonschema.validate(payload, schema)
    except jsonschema.ValidationError as exc:
        raise SchemaMismatch(f"{what} response off-schema: {exc.message}") from exc
    return payload

"""Entity resolution: string similarity and merge-or-insert."""

from __future__ import annotations

import numpy as np

from ..core.config import EngineConfig
from ..providers.base import EmbeddingProvider
from .graph import Entity, KnowledgeGraph

JW_PREFIX_SCALE = 0.1
JW_MAX_PREFIX = 4


def jaro(s1: str, s2: str) -> float:
    if s1 == s2:
        return 1.0
    if not s1 or not s2:
        return 0.0
    window = max(len(s1), len(s2)) // 2 - 1
    window = max(window, 0)
    matched1 = [False] * len(s1)
    matched2 = [False] * len(s2)
    matches = 0
    for i, ch in enumerate(s1):
        lo = max(0, i - window)
        hi = min(len(s2), i + window + 1)
        for j in range(lo, hi):
            if not matched2[j] and s2[j] == ch:
                matched1[i] = True
                matched2[j] = True
                matches += 1
                break
    if matches == 0:
        return 0.0
    transpositions = 0
    j = 0
    for i in range(len(s1)):
        if matched1[i]:
            while not matched2[j]:
                j += 1
            if s1[i] != s2[j]:
                transpositions += 1
            j += 1
    transpositions //= 2
    return (matches / len(s1) + matches / len(s2)
            + (matches - transpositions) / matches) / 3.0


def jaro_winkler(s1: str, s2: str) -> float:
    """Jaro similarity boosted by up to four characters of common prefix."""
    base = jaro(s1, s2)
    prefix = 0
    for a, b in zip(s1, s2):
        if a != b or prefix == JW_MAX_PREFIX:
            break
        prefix += 1
    return base + prefix * JW_PREFIX_SCALE * (1.0 - base)


def hybrid_name_sim(name_a: str, emb_a: np.ndarray, name_b: str,
                    emb_b: np.ndarray, alpha: float) -> float:
    """Blend embedding cosine with Jaro-Winkler over lowercased names.

    The cosine term is clamped to [0, 1] so the blend stays a similarity.
    """
    cos = float(np.dot(emb_a, emb_b))
    cos = min(1.0, max(0.0, cos))
    return alpha * cos + (1.0 - alpha) * jaro_winkler(name_a.lower(), name_b.lower())


def resolve_or_insert(graph: KnowledgeGraph, surface: str, etype: str,
                      embedder: EmbeddingProvider, cfg: EngineConfig,
                      confidence: float = 1.0,
                      attributes: dict | None = None) -> Entity:
    """Merge the mention into the best same-type match at or above tau_res,
    else insert a new entity. Candidates of other types never merge."""
    if not surface:
        raise ValueError("entity surface form must be non-empty")
    emb = embedder.embed(surface)
    best: Entity | None = None
    best_sim = -1.0
    for entity in graph.entities_of_type(etype):
        sim = hybrid_name_sim(surface, emb, entity.name, entity.name_embedding,
                              cfg.alpha)
        if sim > best_sim or (sim == best_sim and best is not None
                              and entity.id < best.id):
            best = entity
            best_sim = sim
    if best is not None and best_sim >= cfg.tau_res:
        return graph.merge_into(best, surface, confidence, attributes)
    return graph.add_entity(surface, etype, emb, confidence, attributes)

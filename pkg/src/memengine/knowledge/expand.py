"""Seed spotting in queries and bounded breadth-first graph expansion."""

from __future__ import annotations

import numpy as np

from ..core.config import EngineConfig
from ..core.tokens import tokenize
from ..providers.mock import lexicon
from ..retrieval.dense import DenseIndex
from ..retrieval.model import Candidate
from .graph import KnowledgeGraph


def graph_expand(graph: KnowledgeGraph, seeds: list[int], hops: int,
                 beta: float) -> dict[int, tuple[int, float]]:
    """Multi-source BFS over undirected relations, depth capped at ``hops``.

    Returns {entity_id: (depth, score)} where score decays as beta**depth
    scaled by the entity's own confidence. Unknown seed ids are an error.
    """
    for seed in seeds:
        if seed not in graph.entities:
            raise KeyError(f"unknown seed entity id {seed}")
    adjacency = graph.neighbors()
    depth: dict[int, int] = {seed: 0 for seed in seeds}
    frontier = sorted(depth)
    level = 0
    while frontier and level < hops:
        level += 1
        discovered: list[int] = []
        for eid in frontier:
            for neighbor in sorted(adjacency.get(eid, set())):
                if neighbor not in depth:
                    depth[neighbor] = level
                    discovered.append(neighbor)
        frontier = sorted(set(discovered))
    return {
        eid: (d, beta ** d * graph.entities[eid].confidence)
        for eid, d in depth.items()
    }


def _name_variants(name: str, titles: frozenset[str]) -> set[tuple[str, ...]]:
    toks = tuple(tokenize(name))
    variants = {toks} if toks else set()
    while toks and toks[0] in titles:
        toks = toks[1:]
    if toks:
        variants.add(toks)
    return variants


def identify_seeds(graph: KnowledgeGraph, question: str) -> list[int]:
    """Find entities mentioned in the question by token-sequence match.

    Canonical names, aliases, and title-stripped variants all count.
    Overlapping spans resolve longest-first; entities sharing an identical
    winning span are all accepted.
    """
    q_tokens = tokenize(question)
    if not q_tokens:
        return []
    titles = lexicon()["titles"]
    matches: list[tuple[int, int, int]] = []
    for eid in sorted(graph.entities):
        entity = graph.entities[eid]
        variants: set[tuple[str, ...]] = set()
        for surface in [entity.name, *entity.aliases]:
            variants |= _name_variants(surface, titles)
        for seq in variants:
            span = len(seq)
            for start in range(len(q_tokens) - span + 1):
                if tuple(q_tokens[start:start + span]) == seq:
                    matches.append((start, start + span, eid))
    matches.sort(key=lambda m: (m[0] - m[1], m[0], m[2]))
    accepted: list[tuple[int, int]] = []
    seeds: set[int] = set()
    for start, end, eid in matches:
        if (start, end) in accepted:
            seeds.add(eid)
        elif not any(start < e and s < end for s, e in accepted):
            accepted.append((start, end))
            seeds.add(eid)
    return sorted(seeds)


def graph_candidates(graph: KnowledgeGraph, question: str,
                     query_embedding: np.ndarray, dense_index: DenseIndex,
                     existing_ids: set[int], cfg: EngineConfig) -> list[Candidate]:
    """Expand from question seeds and score the memory units they reach.

    Entities scoring below the floor contribute nothing. Units already in
    the merged candidate list are excluded; survivors rank by embedding
    similarity and the list is capped like any other retrieval source.
    """
    seeds = identify_seeds(graph, question)
    if not seeds:
        return []
    scores = graph_expand(graph, seeds, cfg.hops_h, cfg.beta)
    mau_ids: set[int] = set()
    for eid, (_, score) in scores.items():
        if score >= cfg.graph_score_floor:
            mau_ids |= graph.entities[eid].mau_ids
    mau_ids -= existing_ids
    mau_ids = {i for i in mau_ids if 0 <= i < dense_index.matrix.shape[0]}
    candidates = [
        Candidate(mau_id=i, sim=float(dense_index.matrix[i] @ query_embedding),
                  origin="graph")
        for i in sorted(mau_ids)
    ]
    candidates.sort(key=lambda c: (-c.sim, c.mau_id))
    return candidates[:cfg.effective_top_k]

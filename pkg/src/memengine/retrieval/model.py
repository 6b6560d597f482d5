"""Value types passed between retrieval stages."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Candidate:
    """One retrieved memory unit with its query affinity.

    ``sim`` is always the cosine/inner-product similarity against the query
    embedding, whatever the origin; ``bm25_score`` is set only for
    keyword-matched candidates. ``origin`` records which retriever produced
    the candidate first: "dense", "sparse", or "graph".
    """

    mau_id: int
    sim: float
    origin: str
    bm25_score: float | None = None


@dataclass
class ContextBlock:
    mau_id: int
    level: int
    text: str
    token_cost: int = 0
    media_ref: str | None = None


@dataclass
class ContextBundle:
    blocks: list[ContextBlock] = field(default_factory=list)
    total_expansion_tokens: int = 0
    warnings: list[str] = field(default_factory=list)

"""The engine facade: one object that owns ingestion, retrieval, and answers."""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping

from ..core.config import EngineConfig
from ..core.tokens import tokenize
from ..core.types import Mau, ms_to_iso
from ..ingest.events import Event, events_from_jsonl
from ..ingest.pipeline import Ingestor, IngestResult, IngestStats
from ..knowledge.expand import graph_candidates
from ..knowledge.graph import KnowledgeGraph
from ..providers.base import (
    ChatProvider,
    ChatRequest,
    EmbeddingProvider,
    EntityExtractor,
    ProviderError,
)
from ..providers.mock import (
    MockChatProvider,
    MockEmbeddingProvider,
    MockEntityExtractor,
)
from ..retrieval.dense import DenseIndex
from ..retrieval.indexes import build_indexes, load_index_cache, write_index_cache
from ..retrieval.merge import hybrid_search
from ..retrieval.model import Candidate, ContextBundle
from ..retrieval.pyramid import pyramid_expand, summaries_only
from ..retrieval.sparse import SparseIndex
from ..storage.cold import ColdStore
from ..storage.hot import HotStore, StoreSnapshot
from .prompts import render_prompt

log = logging.getLogger(__name__)

GRAPH_FILE = "graph.jsonl"
INDEX_DIR = "indexes"
REPROMPT_SUFFIX = "Return your response in JSON format."

INTENT_TYPES = frozenset(
    {"factual", "temporal", "comparative", "exploratory", "verification"})


class AnswerError(RuntimeError):
    """The chat provider failed to produce a usable answer."""


@dataclass(frozen=True)
class Answer:
    """Final product of a query: the answer plus how it was grounded."""

    answer: str
    reasoning: str
    candidates_used: tuple[tuple[int, int], ...]
    timing: Mapping[str, float]

    def to_dict(self) -> dict[str, Any]:
        return {
            "answer": self.answer,
            "reasoning": self.reasoning,
            "candidates_used": [list(pair) for pair in self.candidates_used],
            "timing": dict(self.timing),
        }


@dataclass(frozen=True)
class EngineView:
    """Immutable query-side state; swapped wholesale on commit."""

    snapshot: StoreSnapshot
    maus: Mapping[int, Mau]
    dense: DenseIndex
    sparse: SparseIndex
    graph: KnowledgeGraph


class _PartitionDense:
    """Dense search confined to a subset of units.

    ``matrix`` keeps the full store's id-indexed rows because keyword and
    graph hits are similarity-scored through it by original id; only
    ``search`` is narrowed to the members.
    """

    def __init__(self, full: DenseIndex, member_ids: list[int]) -> None:
        self.matrix = full.matrix
        self.timestamps_ms = full.timestamps_ms
        self._ids = list(member_ids)
        self._sub = DenseIndex(
            full.matrix[self._ids] if self._ids
            else full.matrix[:0],
            [full.timestamps_ms[i] for i in self._ids])

    def __len__(self) -> int:
        return len(self._ids)

    def search(self, query: Any, k: int, temporal: bool = False) -> list[Candidate]:
        return [
            Candidate(mau_id=self._ids[hit.mau_id], sim=hit.sim, origin=hit.origin)
            for hit in self._sub.search(query, k, temporal=temporal)
        ]


class _PartitionSparse:
    """Keyword search over only a subset's summaries, reporting original ids.

    Document-frequency and length statistics are recomputed inside the
    subset, so term weights behave as if nothing else were stored.
    """

    def __init__(self, docs: list[list[str]], member_ids: list[int],
                 k1: float, b: float) -> None:
        self._inner = SparseIndex(docs, k1=k1, b=b)
        self._ids = list(member_ids)

    def search(self, query_tokens: list[str], k: int) -> list[tuple[int, float]]:
        return [(self._ids[doc_id], score)
                for doc_id, score in self._inner.search(query_tokens, k)]


@dataclass
class QueryTrace:
    """Per-query stage sizes, for ablation checks and debugging."""

    question: str
    dense: int = 0
    sparse: int = 0
    merged: int = 0
    graph_added: int = 0
    levels: dict[int, int] = field(default_factory=dict)
    expansion_tokens: int = 0
    warnings: tuple[str, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "question": self.question,
            "dense": self.dense,
            "sparse": self.sparse,
            "merged": self.merged,
            "graph_added": self.graph_added,
            "bundle": {
                "levels": {str(k): v for k, v in sorted(self.levels.items())},
                "expansion_tokens": self.expansion_tokens,
                "warnings": list(self.warnings),
            },
        }


def _block_prefix(mau: Mau) -> str:
    speaker = str(mau.source.get("speaker", "unknown"))
    return f"[{ms_to_iso(mau.timestamp_ms)}] {speaker}: "


class MemoryEngine:
    """Coordinates the stores, indexes, graph, and providers.

    Writes go through :meth:`ingest` and become queryable after
    :meth:`commit`. The query path reads a single immutable view, so any
    number of threads may call :meth:`answer_question` concurrently.
    """

    def __init__(self, store: HotStore, cfg: EngineConfig, *,
                 embedder: EmbeddingProvider | None = None,
                 chat: ChatProvider | None = None,
                 extractor: EntityExtractor | None = None,
                 trace_sink: Callable[[dict[str, Any]], None] | None = None) -> None:
        self._store = store
        self._cfg = cfg
        self._embedder = embedder or MockEmbeddingProvider(cfg.embedding_dim)
        self._chat = chat or MockChatProvider()
        self._extractor = extractor or MockEntityExtractor()
        self._trace_sink = trace_sink
        self._graph = KnowledgeGraph.load(self.root / GRAPH_FILE)
        self._ingestor = Ingestor(store, ColdStore(self.root / "cold"),
                                  self._graph, self._embedder, self._chat,
                                  self._extractor, cfg)
        self._view = self._build_view(use_cache=True)

    @classmethod
    def create(cls, root: str | Path, cfg: EngineConfig | None = None,
               **kwargs: Any) -> "MemoryEngine":
        cfg = cfg or EngineConfig()
        store = HotStore.create(root, cfg)
        return cls(store, cfg, **kwargs)

    @classmethod
    def open(cls, root: str | Path, *, writer: bool = True,
             overrides: Mapping[str, Any] | None = None,
             **kwargs: Any) -> "MemoryEngine":
        store = HotStore.open(root, writer=writer)
        cfg = store.config
        if overrides:
            cfg = cfg.replace(**dict(overrides))
        return cls(store, cfg, **kwargs)

    @property
    def root(self) -> Path:
        return self._store.root

    @property
    def cfg(self) -> EngineConfig:
        return self._cfg

    @property
    def graph(self) -> KnowledgeGraph:
        return self._graph

    def close(self) -> None:
        self._store.close()

    def __enter__(self) -> "MemoryEngine":
        return self

    def __exit__(self, *exc: Any) -> None:
        self.close()

    def ingest(self, event: Event) -> IngestResult:
        return self._ingestor.ingest(event)

    def ingest_jsonl(self, path: str | Path) -> IngestStats:
        return self._ingestor.ingest_all(events_from_jsonl(path))

    def ingest_all(self, events: Iterable[Event]) -> IngestStats:
        return self._ingestor.ingest_all(events)

    def commit(self) -> dict[str, Any]:
        """Make everything ingested so far durable and queryable."""
        tag = self._store.commit()
        self._graph.save(self.root / GRAPH_FILE)
        self._view = self._build_view(use_cache=False)
        write_index_cache(self.root / INDEX_DIR, self._view.snapshot,
                          self._view.dense, self._view.sparse)
        return {"committed": self._store.committed_count, "tag": tag}

    def refresh(self) -> None:
        """Re-read committed state; readers call this to see new commits."""
        self._store.reload()
        self._graph = KnowledgeGraph.load(self.root / GRAPH_FILE)
        self._view = self._build_view(use_cache=True)

    def _build_view(self, use_cache: bool) -> EngineView:
        snapshot = self._store.snapshot()
        cached = load_index_cache(self.root / INDEX_DIR, snapshot.tag) \
            if use_cache else None
        if cached is not None:
            dense, sparse = cached
        else:
            dense, sparse = build_indexes(snapshot, self._cfg)
        return EngineView(
            snapshot=snapshot,
            maus={mau.id: mau for mau in snapshot.maus},
            dense=dense,
            sparse=sparse,
            graph=self._graph.snapshot(),
        )

    def partition_view(self, key: str, value: str) -> EngineView:
        """A query view confined to units whose source ``key`` equals ``value``.

        Keyword statistics and graph reach are recomputed inside the
        partition, so answering against the view behaves as if only those
        units had ever been stored. Views are immutable and safe to share
        across threads.
        """
        view = self._view
        members = []
        for mau in view.snapshot.maus:
            raw = mau.source.get(key)
            if raw is not None and str(raw) == value:
                members.append(mau)
        member_ids = [mau.id for mau in members]
        return EngineView(
            snapshot=StoreSnapshot(maus=tuple(members),
                                   tag=f"{view.snapshot.tag}#{key}={value}"),
            maus={mau.id: mau for mau in members},
            dense=_PartitionDense(view.dense, member_ids),
            sparse=_PartitionSparse([tokenize(mau.summary) for mau in members],
                                    member_ids, self._cfg.bm25_k1,
                                    self._cfg.bm25_b),
            graph=view.graph.restricted_to(set(member_ids)),
        )

    def retrieve(self, question: str, *, temporal: bool = False,
                 trace: QueryTrace | None = None,
                 cfg: EngineConfig | None = None,
                 view: EngineView | None = None) -> tuple[list[Candidate], ContextBundle]:
        """Run the retrieval half of the pipeline and expand the context."""
        view = view if view is not None else self._view
        cfg = cfg or self._cfg
        query_embedding = self._embedder.embed(question)
        dense_hits, sparse_hits, merged = hybrid_search(
            view.dense, view.sparse, query_embedding, tokenize(question),
            cfg.effective_top_k, use_bm25=not cfg.disable_bm25,
            temporal=temporal)
        if not cfg.disable_graph:
            extra = graph_candidates(view.graph, question, query_embedding,
                                     view.dense,
                                     {c.mau_id for c in merged}, cfg)
            merged = merged + extra
        else:
            extra = []
        if cfg.disable_pyramid:
            bundle = summaries_only(merged, view.maus)
        else:
            bundle = pyramid_expand(merged, view.maus,
                                    ColdStore(self.root / "cold"), cfg)
        if trace is not None:
            trace.dense = len(dense_hits)
            trace.sparse = len(sparse_hits)
            trace.merged = len(merged)
            trace.graph_added = len(extra)
            for block in bundle.blocks:
                trace.levels[block.level] = trace.levels.get(block.level, 0) + 1
            trace.expansion_tokens = bundle.total_expansion_tokens
            trace.warnings = tuple(bundle.warnings)
        return merged, bundle

    def answer_question(self, question: str, *, analyze: bool = False,
                        cfg: EngineConfig | None = None,
                        view: EngineView | None = None) -> Answer:
        """Retrieve, build the grounded prompt, and parse the model's answer."""
        if not question or not question.strip():
            raise ValueError("question must be non-empty")
        started = time.perf_counter()
        temporal = False
        if analyze:
            analysis = self.analyze_query(question)
            temporal = bool(analysis) and analysis["intent_type"] == "temporal"
        trace = QueryTrace(question=question)
        view = view if view is not None else self._view
        _, bundle = self.retrieve(question, temporal=temporal, trace=trace,
                                  cfg=cfg, view=view)
        lines = []
        grounding = []
        used = []
        for block in bundle.blocks:
            mau = view.maus[block.mau_id]
            body = block.text if block.text else f"[media:{block.media_ref}]"
            lines.append(_block_prefix(mau) + body)
            grounding.append(block.text)
            used.append((block.mau_id, block.level))
        retrieval_ms = (time.perf_counter() - started) * 1000.0
        rendered = render_prompt("answer", {
            "context": "\n".join(lines),
            "question": question,
        })
        gen_started = time.perf_counter()
        reasoning, answer = self._complete_answer(rendered, grounding)
        generation_ms = (time.perf_counter() - gen_started) * 1000.0
        if self._trace_sink is not None:
            self._trace_sink(trace.to_dict())
        return Answer(
            answer=answer,
            reasoning=reasoning,
            candidates_used=tuple(used),
            timing={"retrieval_ms": retrieval_ms,
                    "generation_ms": generation_ms},
        )

    def _complete_answer(self, rendered: Mapping[str, str],
                         grounding: list[str]) -> tuple[str, str]:
        request = ChatRequest(system=rendered["system"], user=rendered["user"],
                              temperature=0.1, force_json=True)
        try:
            raw = self._chat.complete(request, grounding=grounding)
        except ProviderError as exc:
            raise AnswerError(f"chat provider failed: {exc}") from exc
        parsed = _parse_answer(raw)
        if parsed is not None:
            return parsed
        retry = ChatRequest(system=request.system,
                            user=request.user + "\n" + REPROMPT_SUFFIX,
                            temperature=0.1, force_json=True)
        try:
            raw = self._chat.complete(retry, grounding=grounding)
        except ProviderError as exc:
            raise AnswerError(f"chat provider failed: {exc}") from exc
        parsed = _parse_answer(raw)
        if parsed is None:
            raise AnswerError(f"unparseable answer after reprompt: {raw[:200]!r}")
        return parsed

    def analyze_query(self, question: str) -> dict[str, Any] | None:
        """Classify the query's intent; None when the provider's output is bad."""
        if not question or not question.strip():
            raise ValueError("question must be non-empty")
        rendered = render_prompt("query_analysis", {"query": question})
        request = ChatRequest(system=rendered["system"], user=rendered["user"],
                              temperature=0.1, force_json=True)
        try:
            raw = self._chat.complete(request)
            doc = json.loads(raw)
        except (ProviderError, json.JSONDecodeError) as exc:
            log.warning("query analysis skipped: %s", exc)
            return None
        if not isinstance(doc, dict) or doc.get("intent_type") not in INTENT_TYPES:
            log.warning("query analysis skipped: bad schema")
            return None
        return {
            "intent_type": doc["intent_type"],
            "entities": list(doc.get("entities", [])),
            "time_references": list(doc.get("time_references", [])),
            "modality_hints": list(doc.get("modality_hints", [])),
            "reformulated_query": str(doc.get("reformulated_query", question)),
        }

    def get_mau(self, mau_id: int) -> Mau | None:
        """Committed units only; the uncommitted tail stays invisible."""
        return self._view.maus.get(mau_id)

    def stats(self) -> dict[str, Any]:
        view = self._view
        by_modality: dict[str, int] = {}
        for mau in view.snapshot.maus:
            key = mau.modality.value
            by_modality[key] = by_modality.get(key, 0) + 1
        cold = ColdStore(self.root / "cold")
        return {
            "committed": len(view.snapshot),
            "uncommitted": self._store.count - self._store.committed_count,
            "tag": view.snapshot.tag,
            "by_modality": dict(sorted(by_modality.items())),
            "entities": len(view.graph.entities),
            "relations": len(view.graph.relations),
            "cold_objects": cold.object_count(),
        }


def _parse_answer(raw: str) -> tuple[str, str] | None:
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError:
        return None
    if not isinstance(doc, dict):
        return None
    answer = doc.get("answer")
    reasoning = doc.get("reasoning")
    if not isinstance(answer, str) or not answer:
        return None
    if not isinstance(reasoning, str):
        return None
    return reasoning, answer

"""Multi-worker question harness producing per-category metric reports."""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Sequence

from ..orchestrator.engine import MemoryEngine
from .metrics import bleu_scores, exact_match, token_f1

REPORT_VERSION = 1
METRIC_KEYS = ("f1", "em", "bleu", "bleu1", "bleu2")


@dataclass(frozen=True)
class QaItem:
    """One benchmark question with its reference answer."""

    question: str
    gold_answer: str
    category: str = "uncategorized"
    evidence: tuple[int, ...] = ()
    conversation_id: str | None = None


def qa_from_jsonl(path: str | Path) -> list[QaItem]:
    items: list[QaItem] = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            doc = json.loads(line)
            if "question" not in doc or "answer" not in doc:
                raise ValueError(f"{path}:{lineno}: needs question and answer")
            conversation = doc.get("conversation_id")
            items.append(QaItem(
                question=str(doc["question"]),
                gold_answer=str(doc["answer"]),
                category=str(doc.get("category", "uncategorized")),
                evidence=tuple(int(x) for x in doc.get("evidence", [])),
                conversation_id=None if conversation is None else str(conversation),
            ))
    return items


def qa_to_jsonl(items: Iterable[QaItem], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for item in items:
            doc: dict[str, Any] = {
                "question": item.question,
                "answer": item.gold_answer,
                "category": item.category,
            }
            if item.evidence:
                doc["evidence"] = list(item.evidence)
            if item.conversation_id is not None:
                doc["conversation_id"] = item.conversation_id
            handle.write(json.dumps(doc, sort_keys=True) + "\n")


def _evaluate_one(engine: MemoryEngine, item: QaItem,
                  view: Any = None, cfg: Any = None) -> dict[str, Any]:
    detail: dict[str, Any] = {
        "question": item.question,
        "gold": item.gold_answer,
        "category": item.category,
    }
    if item.conversation_id is not None:
        detail["conversation_id"] = item.conversation_id
    kwargs: dict[str, Any] = {}
    if view is not None:
        kwargs["view"] = view
    if cfg is not None:
        kwargs["cfg"] = cfg
    try:
        answer = engine.answer_question(item.question, **kwargs)
    except Exception as exc:
        detail.update({
            "answer": "", "error": f"{type(exc).__name__}: {exc}",
            "f1": 0.0, "em": 0.0, "bleu": 0.0, "bleu1": 0.0, "bleu2": 0.0,
            "hit": False if item.evidence else None,
            "retrieval_ms": None, "generation_ms": None,
        })
        return detail
    bleu = bleu_scores(answer.answer, item.gold_answer)
    used_ids = {mau_id for mau_id, _ in answer.candidates_used}
    detail.update({
        "answer": answer.answer,
        "f1": token_f1(answer.answer, item.gold_answer),
        "em": exact_match(answer.answer, item.gold_answer),
        "bleu": bleu["bleu"],
        "bleu1": bleu["bleu1"],
        "bleu2": bleu["bleu2"],
        "hit": all(ev in used_ids for ev in item.evidence)
            if item.evidence else None,
        "retrieval_ms": answer.timing["retrieval_ms"],
        "generation_ms": answer.timing["generation_ms"],
    })
    return detail


def _aggregate(details: Sequence[dict[str, Any]]) -> dict[str, float | int]:
    bucket: dict[str, float | int] = {key: 0.0 for key in METRIC_KEYS}
    for detail in details:
        for key in METRIC_KEYS:
            bucket[key] += detail[key]
    n = len(details)
    out = {key: (bucket[key] / n if n else 0.0) for key in METRIC_KEYS}
    out["n"] = n
    return out


def run_eval(engine: MemoryEngine, items: Sequence[QaItem], *,
             workers: int = 1,
             partition_by: str | None = None,
             report_path: str | Path | None = None) -> dict[str, Any]:
    """Answer every question with `workers` threads and score the results.

    A question that raises is recorded as a zero-score failure and the run
    continues. Metric aggregation follows input order, so the scores are
    identical for any worker count; only the throughput section varies.

    With ``partition_by="conversation_id"`` each question is answered
    against only the memories of its own conversation, and every item must
    carry a conversation id. When the engine's config maps an item's
    category to a retrieval depth, that depth overrides top-k for the item.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    views: dict[str, Any] = {}
    if partition_by is not None:
        if partition_by != "conversation_id":
            raise ValueError(f"unsupported partition key {partition_by!r}")
        untagged = sum(1 for item in items if item.conversation_id is None)
        if untagged:
            raise ValueError(
                f"partitioned runs need conversation_id on every item; "
                f"{untagged} item(s) lack one")
        views = {value: engine.partition_view("conversation_id", value)
                 for value in sorted({item.conversation_id for item in items})}
    base_cfg = getattr(engine, "cfg", None)
    k_by_category = dict(base_cfg.top_k_by_category) if base_cfg is not None else {}

    def evaluate(item: QaItem) -> dict[str, Any]:
        view = views[item.conversation_id] if views else None
        k = k_by_category.get(item.category)
        cfg = base_cfg.replace(top_k_override=k) if k is not None else None
        return _evaluate_one(engine, item, view=view, cfg=cfg)

    started = time.perf_counter()
    if workers == 1:
        details = [evaluate(item) for item in items]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            details = list(pool.map(evaluate, items))
    wall_s = time.perf_counter() - started
    categories: dict[str, list[dict[str, Any]]] = {}
    for detail in details:
        categories.setdefault(detail["category"], []).append(detail)
    retrieval = [d["retrieval_ms"] for d in details if d["retrieval_ms"] is not None]
    generation = [d["generation_ms"] for d in details if d["generation_ms"] is not None]
    judged = [d for d in details if d["hit"] is not None]
    report: dict[str, Any] = {
        "version": REPORT_VERSION,
        "overall": _aggregate(details),
        "categories": {name: _aggregate(group)
                       for name, group in sorted(categories.items())},
        "hit_rate": (sum(1 for d in judged if d["hit"]) / len(judged))
            if judged else None,
        "failures": sum(1 for d in details if "error" in d),
        "throughput": {
            "workers": workers,
            "wall_s": wall_s,
            "queries_per_sec": len(items) / wall_s if wall_s > 0 else 0.0,
            "mean_retrieval_ms": sum(retrieval) / len(retrieval) if retrieval else 0.0,
            "mean_generation_ms": sum(generation) / len(generation) if generation else 0.0,
        },
        "details": details,
    }
    if partition_by is not None:
        report["partition_by"] = partition_by
    if report_path is not None:
        path = Path(report_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(report, handle, indent=2, sort_keys=True)
    return report


def metrics_only(report: dict[str, Any]) -> dict[str, Any]:
    """The report minus everything timing-dependent, for parity checks."""
    details = [
        {k: v for k, v in d.items()
         if k not in ("retrieval_ms", "generation_ms")}
        for d in report["details"]
    ]
    return {
        "version": report["version"],
        "overall": report["overall"],
        "categories": report["categories"],
        "hit_rate": report["hit_rate"],
        "failures": report["failures"],
        "details": details,
    }

"""Metrics, the QA harness, and deterministic evaluation fixtures."""

from .harness import QaItem, metrics_only, qa_from_jsonl, qa_to_jsonl, run_eval
from .metrics import bleu_scores, exact_match, token_f1
from ..core.porter import porter_stem
from .synthetic import (
    SunsetsFixture,
    keyword_probe_suite,
    multi_block_suite,
    planted_fact_suite,
    sunsets_fixture,
)

__all__ = [
    "QaItem",
    "SunsetsFixture",
    "bleu_scores",
    "exact_match",
    "keyword_probe_suite",
    "metrics_only",
    "multi_block_suite",
    "planted_fact_suite",
    "porter_stem",
    "qa_from_jsonl",
    "qa_to_jsonl",
    "run_eval",
    "sunsets_fixture",
    "token_f1",
]

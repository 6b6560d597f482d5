"""Okapi BM25 keyword index over tokenized summaries."""

from __future__ import annotations

import math
from collections import Counter


class SparseIndex:
    """BM25 with the standard Okapi weighting.

    idf(t) = ln(1 + (N - df + 0.5) / (df + 0.5))
    score(q, d) = sum over distinct query terms of
                  idf(t) * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len_d / avg_len))
    """

    def __init__(self, docs: list[list[str]], k1: float = 1.5, b: float = 0.75):
        self.k1 = k1
        self.b = b
        self.doc_count = len(docs)
        self.doc_len = [len(d) for d in docs]
        self.avg_len = (sum(self.doc_len) / self.doc_count) if self.doc_count else 0.0
        self.postings: dict[str, dict[int, int]] = {}
        for doc_id, tokens in enumerate(docs):
            for term, tf in Counter(tokens).items():
                self.postings.setdefault(term, {})[doc_id] = tf

    def idf(self, term: str) -> float:
        df = len(self.postings.get(term, ()))
        return math.log(1.0 + (self.doc_count - df + 0.5) / (df + 0.5))

    def score(self, query_tokens: list[str], doc_id: int) -> float:
        total = 0.0
        length = self.doc_len[doc_id]
        for term in sorted(set(query_tokens)):
            tf = self.postings.get(term, {}).get(doc_id, 0)
            if tf == 0:
                continue
            denom = tf + self.k1 * (1.0 - self.b + self.b * length / self.avg_len)
            total += self.idf(term) * tf * (self.k1 + 1.0) / denom
        return total

    def search(self, query_tokens: list[str], k: int) -> list[tuple[int, float]]:
        """Positive-scoring docs by descending score; ties toward lower id."""
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        if self.avg_len == 0.0:
            return []
        matched: set[int] = set()
        for term in set(query_tokens):
            matched.update(self.postings.get(term, ()))
        scored = [(doc_id, self.score(query_tokens, doc_id)) for doc_id in matched]
        scored = [(doc_id, s) for doc_id, s in scored if s > 0.0]
        scored.sort(key=lambda pair: (-pair[1], pair[0]))
        return scored[:k]

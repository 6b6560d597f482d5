"""Set-union merging of dense and keyword retrieval results.

Dense results keep their original ranking; keyword-only hits are appended
after them in keyword order. Scores from the two retrievers are never
compared or interleaved.
"""

from __future__ import annotations

import numpy as np

from .dense import DenseIndex
from .model import Candidate
from .sparse import SparseIndex


def merge_union(dense: list[Candidate], sparse: list[Candidate]) -> list[Candidate]:
    seen = {c.mau_id for c in dense}
    merged = list(dense)
    for cand in sparse:
        if cand.mau_id not in seen:
            seen.add(cand.mau_id)
            merged.append(cand)
    return merged


def hybrid_search(dense_index: DenseIndex, sparse_index: SparseIndex,
                  query_emb: np.ndarray, query_tokens: list[str], k: int,
                  use_bm25: bool = True, temporal: bool = False,
                  ) -> tuple[list[Candidate], list[Candidate], list[Candidate]]:
    """Run both retrievers and merge. Returns (dense, sparse, merged).

    Keyword-only candidates get their similarity computed against the query
    embedding here, so every candidate downstream carries a comparable sim.
    """
    dense = dense_index.search(query_emb, k, temporal=temporal) if len(dense_index) else []
    sparse: list[Candidate] = []
    if use_bm25:
        for doc_id, score in sparse_index.search(query_tokens, k):
            sim = float(dense_index.matrix[doc_id] @ query_emb)
            sparse.append(Candidate(mau_id=doc_id, sim=sim, origin="sparse",
                                    bm25_score=score))
    return dense, sparse, merge_union(dense, sparse)

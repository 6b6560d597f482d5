"""Index construction and the tag-keyed on-disk cache.

Indexes are rebuilt from the committed snapshot and serialized under
indexes/ keyed by the snapshot tag. Serialization is deterministic: the
same snapshot always produces byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..core.config import EngineConfig
from ..core.tokens import tokenize
from ..storage.hot import StoreSnapshot
from .dense import DenseIndex
from .sparse import SparseIndex


def build_indexes(snapshot: StoreSnapshot, cfg: EngineConfig) -> tuple[DenseIndex, SparseIndex]:
    if snapshot.maus:
        matrix = np.stack([m.embedding for m in snapshot.maus])
    else:
        matrix = np.zeros((0, cfg.embedding_dim), dtype=np.float64)
    timestamps = [m.timestamp_ms for m in snapshot.maus]
    docs = [tokenize(m.summary) for m in snapshot.maus]
    return (DenseIndex(matrix, timestamps),
            SparseIndex(docs, k1=cfg.bm25_k1, b=cfg.bm25_b))


def write_index_cache(dirpath: str | Path, snapshot: StoreSnapshot,
                      dense: DenseIndex, sparse: SparseIndex) -> None:
    dirpath = Path(dirpath)
    dirpath.mkdir(parents=True, exist_ok=True)
    with open(dirpath / "dense.npy", "wb") as fh:
        np.save(fh, dense.matrix)
    doc = {
        "tag": snapshot.tag,
        "timestamps_ms": dense.timestamps_ms,
        "docs": [tokenize(m.summary) for m in snapshot.maus],
        "k1": sparse.k1,
        "b": sparse.b,
    }
    tmp = dirpath / "sparse.json.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True)
    tmp.replace(dirpath / "sparse.json")


def load_index_cache(dirpath: str | Path, tag: str) -> tuple[DenseIndex, SparseIndex] | None:
    """Load cached indexes if they match the snapshot tag, else None."""
    dirpath = Path(dirpath)
    dense_path = dirpath / "dense.npy"
    sparse_path = dirpath / "sparse.json"
    if not dense_path.exists() or not sparse_path.exists():
        return None
    with open(sparse_path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("tag") != tag:
        return None
    matrix = np.load(dense_path)
    dense = DenseIndex(matrix, doc.get("timestamps_ms", []))
    sparse = SparseIndex(doc["docs"], k1=doc.get("k1", 1.5), b=doc.get("b", 0.75))
    return dense, sparse


def load_or_build(dirpath: str | Path, snapshot: StoreSnapshot,
                  cfg: EngineConfig) -> tuple[DenseIndex, SparseIndex]:
    cached = load_index_cache(dirpath, snapshot.tag)
    if cached is not None:
        return cached
    dense, sparse = build_indexes(snapshot, cfg)
    write_index_cache(dirpath, snapshot, dense, sparse)
    return dense, sparse

"""Exhaustive inner-product search over unit-normalized embeddings."""

from __future__ import annotations

import numpy as np

from .model import Candidate


class DenseIndex:
    def __init__(self, embeddings: np.ndarray, timestamps_ms: list[int] | None = None):
        matrix = np.asarray(embeddings, dtype=np.float64)
        if matrix.ndim != 2:
            matrix = matrix.reshape(0, 0) if matrix.size == 0 else matrix
        self.matrix = matrix
        self.timestamps_ms = list(timestamps_ms) if timestamps_ms else [0] * len(matrix)

    def __len__(self) -> int:
        return len(self.matrix)

    def search(self, query: np.ndarray, k: int, temporal: bool = False) -> list[Candidate]:
        """Top-k by descending inner product; ties break toward the lower id,
        or toward the newer record first when ``temporal`` is set."""
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        if len(self.matrix) == 0:
            return []
        sims = self.matrix @ np.asarray(query, dtype=np.float64)
        if temporal:
            order = sorted(range(len(sims)),
                           key=lambda i: (-sims[i], -self.timestamps_ms[i], i))
        else:
            order = sorted(range(len(sims)), key=lambda i: (-sims[i], i))
        return [Candidate(mau_id=i, sim=float(sims[i]), origin="dense")
                for i in order[:k]]

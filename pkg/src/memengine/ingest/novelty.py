"""Novelty gates that keep near-duplicate observations out of the store."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from ..core.tokens import tokenize

TEXT_WINDOW = 50


def jaccard(a: frozenset[str], b: frozenset[str]) -> float:
    """Set overlap ratio; two empty sets count as identical."""
    if not a and not b:
        return 1.0
    return len(a & b) / len(a | b)


class TextNoveltyFilter:
    """Per-conversation sliding window of recently accepted token sets."""

    def __init__(self, tau_dup: float, window: int = TEXT_WINDOW) -> None:
        self.tau_dup = tau_dup
        self.window = window
        self._recent: dict[str, deque[frozenset[str]]] = {}

    def is_duplicate(self, conversation_id: str, text: str) -> bool:
        tokens = frozenset(tokenize(text))
        window = self._recent.get(conversation_id, ())
        return any(jaccard(tokens, prev) >= self.tau_dup for prev in window)

    def record(self, conversation_id: str, text: str) -> None:
        """Add an accepted text to the conversation's window."""
        window = self._recent.setdefault(conversation_id,
                                         deque(maxlen=self.window))
        window.append(frozenset(tokenize(text)))

    def admit(self, conversation_id: str, text: str) -> bool:
        """True if the text is novel enough to keep; novel texts join the window."""
        if self.is_duplicate(conversation_id, text):
            return False
        self.record(conversation_id, text)
        return True


@dataclass(frozen=True)
class VisualVerdict:
    """Outcome of comparing a frame against the conversation's recent frames."""

    kind: str
    linked_mau_id: int | None = None


class VisualNoveltyFilter:
    """Three-band frame classifier over a short buffer of accepted frames.

    Similarity at or above tau_high is a duplicate, between the bands a
    continuation of the closest buffered frame, below tau_low a scene change.
    """

    def __init__(self, tau_high: float, tau_low: float, frame_buffer: int) -> None:
        self.tau_high = tau_high
        self.tau_low = tau_low
        self.frame_buffer = frame_buffer
        self._buffers: dict[str, deque[tuple[int, np.ndarray]]] = {}

    @staticmethod
    def _unit(embedding: np.ndarray) -> np.ndarray:
        vec = np.asarray(embedding, dtype=np.float64)
        if vec.ndim != 1:
            raise ValueError("frame embedding must be one-dimensional")
        norm = float(np.linalg.norm(vec))
        if norm == 0.0:
            raise ValueError("frame embedding has zero norm")
        return vec / norm

    def classify(self, conversation_id: str, embedding: np.ndarray) -> VisualVerdict:
        vec = self._unit(embedding)
        buffer = self._buffers.get(conversation_id)
        if not buffer:
            return VisualVerdict("scene_change")
        best_sim = -2.0
        best_id: int | None = None
        for mau_id, kept in buffer:
            sim = float(kept @ vec)
            if sim > best_sim:
                best_sim = sim
                best_id = mau_id
        if best_sim >= self.tau_high:
            return VisualVerdict("duplicate", best_id)
        if best_sim >= self.tau_low:
            return VisualVerdict("continuation", best_id)
        return VisualVerdict("scene_change")

    def register(self, conversation_id: str, mau_id: int,
                 embedding: np.ndarray) -> None:
        """Record an accepted frame; the oldest falls out once full."""
        buffer = self._buffers.setdefault(
            conversation_id, deque(maxlen=self.frame_buffer))
        buffer.append((mau_id, self._unit(embedding)))


def audio_gate(speech_prob: float, threshold: float) -> bool:
    """Keep audio only when the voice-activity score clears the threshold."""
    return speech_prob >= threshold

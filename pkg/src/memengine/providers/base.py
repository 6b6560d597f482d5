"""Provider interfaces shared by the mock and HTTP-backed implementations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Protocol, Sequence, runtime_checkable

import numpy as np


class ProviderError(RuntimeError):
    """A provider failed to produce a usable response."""


@dataclass(frozen=True)
class ChatRequest:
    system: str
    user: str
    temperature: float = 0.1
    force_json: bool = True
    max_tokens: int | None = None


@runtime_checkable
class EmbeddingProvider(Protocol):
    dim: int

    def embed(self, text: str) -> np.ndarray: ...


@runtime_checkable
class ChatProvider(Protocol):
    def complete(self, req: ChatRequest, grounding: Sequence[str] | None = None) -> str:
        """Return the raw completion text for the request.

        ``grounding`` carries the retrieved context blocks verbatim so that
        offline providers can answer without re-parsing the rendered prompt;
        network-backed providers ignore it.
        """
        ...


@runtime_checkable
class EntityExtractor(Protocol):
    def extract(self, text: str) -> dict[str, Any]: ...

"""Network-backed providers speaking a minimal JSON POST protocol.

Chat endpoint:  POST {system, user, temperature, force_json, max_tokens}
                -> {"text": "..."}
Embed endpoint: POST {"text": "..."} -> {"embedding": [floats]}

Endpoints and keys come from MEMENGINE_CHAT_URL / MEMENGINE_CHAT_KEY and
MEMENGINE_EMBED_URL / MEMENGINE_EMBED_KEY. Transient failures (connection
errors, HTTP 429 and 5xx) are retried up to three attempts with exponential
backoff before raising ProviderError.
"""

from __future__ import annotations

import os
import time
from typing import Any, Sequence

import httpx
import numpy as np

from .base import ChatRequest, ProviderError

MAX_ATTEMPTS = 3
BACKOFF_BASE_S = 0.5


def _post_with_retry(url: str, key: str | None, payload: dict[str, Any],
                     timeout: float) -> dict[str, Any]:
    headers = {"Authorization": f"Bearer {key}"} if key else {}
    last_error: Exception | None = None
    for attempt in range(MAX_ATTEMPTS):
        try:
            resp = httpx.post(url, json=payload, headers=headers, timeout=timeout)
            if resp.status_code in (429,) or resp.status_code >= 500:
                last_error = ProviderError(f"HTTP {resp.status_code} from {url}")
            else:
                resp.raise_for_status()
                return resp.json()
        except httpx.HTTPStatusError as exc:
            raise ProviderError(f"HTTP {exc.response.status_code} from {url}") from exc
        except httpx.HTTPError as exc:
            last_error = exc
        if attempt + 1 < MAX_ATTEMPTS:
            time.sleep(BACKOFF_BASE_S * (2 ** attempt))
    raise ProviderError(f"request to {url} failed after {MAX_ATTEMPTS} attempts: {last_error}")


class HttpChatProvider:
    def __init__(self, url: str, key: str | None = None, timeout: float = 30.0):
        self.url = url
        self.key = key
        self.timeout = timeout

    @classmethod
    def from_env(cls) -> "HttpChatProvider":
        url = os.environ.get("MEMENGINE_CHAT_URL")
        if not url:
            raise ProviderError("MEMENGINE_CHAT_URL is not set")
        return cls(url, os.environ.get("MEMENGINE_CHAT_KEY"))

    def complete(self, req: ChatRequest, grounding: Sequence[str] | None = None) -> str:
        payload = {
            "system": req.system,
            "user": req.user,
            "temperature": req.temperature,
            "force_json": req.force_json,
            "max_tokens": req.max_tokens,
        }
        body = _post_with_retry(self.url, self.key, payload, self.timeout)
        text = body.get("text")
        if not isinstance(text, str):
            raise ProviderError(f"chat endpoint returned no text field: {body!r}")
        return text


class HttpEmbeddingProvider:
    def __init__(self, url: str, key: str | None = None, dim: int = 384,
                 timeout: float = 30.0):
        self.url = url
        self.key = key
        self.dim = dim
        self.timeout = timeout

    @classmethod
    def from_env(cls, dim: int = 384) -> "HttpEmbeddingProvider":
        url = os.environ.get("MEMENGINE_EMBED_URL")
        if not url:
            raise ProviderError("MEMENGINE_EMBED_URL is not set")
        return cls(url, os.environ.get("MEMENGINE_EMBED_KEY"), dim=dim)

    def embed(self, text: str) -> np.ndarray:
        body = _post_with_retry(self.url, self.key, {"text": text}, self.timeout)
        raw = body.get("embedding")
        if not isinstance(raw, list) or len(raw) != self.dim:
            raise ProviderError(f"embed endpoint returned bad embedding: {body!r}")
        vec = np.asarray(raw, dtype=np.float64)
        norm = float(np.linalg.norm(vec))
        if norm == 0.0:
            raise ProviderError("embed endpoint returned a zero vector")
        return vec / norm

"""Connection settings for the memory service client."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ClientConfig:
    """How to reach the service and how patiently to retry.

    Retries apply only to reads (GET endpoints and the read-only query
    POST); they kick in on transport failures, never on HTTP error codes.
    ``backoff_s`` doubles after every failed attempt.
    """

    base_url: str
    timeout_s: float = 10.0
    max_retries: int = 3
    backoff_s: float = 0.2

    def __post_init__(self) -> None:
        if not self.base_url:
            raise ValueError("base_url must be non-empty")
        if self.timeout_s <= 0:
            raise ValueError("timeout_s must be positive")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.backoff_s < 0:
            raise ValueError("backoff_s must be >= 0")

"""HTTP client for the memory service.

The client is wire-only: every operation is one request to the service and
a schema check on the way back, so its answers can never drift from what a
raw HTTP caller sees.
"""

from __future__ import annotations

import time
from typing import Any, Mapping

import httpx

from . import schemas
from .config import ClientConfig
from .errors import TransportError, error_for_status
from .models import CommitReceipt, FilteredReason, MemoryUnit, QueryResponse, StoreStats


class MemoryClient:
    """Typed access to one memory service.

    Reads (:meth:`recall`, :meth:`stats`, :meth:`get_mau`, :meth:`health`)
    retry on transport failures with exponential backoff; :meth:`remember`
    and :meth:`commit` never retry because the service may have applied a
    write before the connection died.

    One client may serve concurrent :meth:`recall` calls from many threads.
    :meth:`remember` and :meth:`commit` assume the caller is the sole
    writer, matching the service's single-writer store.
    """

    def __init__(self, config: ClientConfig | str) -> None:
        if isinstance(config, str):
            config = ClientConfig(base_url=config)
        self.config = config
        self._http = httpx.Client(base_url=config.base_url,
                                  timeout=config.timeout_s)

    def close(self) -> None:
        self._http.close()

    def __enter__(self) -> "MemoryClient":
        return self

    def __exit__(self, *exc: Any) -> None:
        self.close()

    # -- operations ---------------------------------------------------------

    def health(self) -> bool:
        """Whether the service answers its liveness probe."""
        response = self._request("GET", "/healthz", retry=True)
        return response.text == "ok"

    def stats(self) -> StoreStats:
        response = self._request("GET", "/v1/stats", retry=True)
        doc = schemas.check(response.json(), schemas.STATS_RESPONSE, "stats")
        return StoreStats.from_dict(doc)

    def recall(self, question: str, *, top_k: int | None = None,
               budget: int | None = None,
               ablation: Mapping[str, bool] | None = None) -> QueryResponse:
        """Answer a question from the service's committed memories.

        Overrides are validated by the service; a rejected value raises
        :class:`~memclient.errors.ValidationError` carrying its message.
        """
        body: dict[str, Any] = {"question": question}
        if top_k is not None:
            body["top_k"] = top_k
        if budget is not None:
            body["budget"] = budget
        if ablation is not None:
            body["ablation"] = dict(ablation)
        response = self._request("POST", "/v1/query", json_body=body,
                                 retry=True)
        doc = schemas.check(response.json(), schemas.QUERY_RESPONSE, "query")
        return QueryResponse.from_dict(doc)

    def remember(self, event: Mapping[str, Any]) -> int | FilteredReason:
        """Offer one event for ingestion; never retried.

        Returns the new memory unit's id, or the reason the event was
        filtered out. The fact becomes recallable only after
        :meth:`commit`.
        """
        response = self._request("POST", "/v1/ingest",
                                 json_body=dict(event), retry=False)
        doc = schemas.check(response.json(), schemas.INGEST_RESPONSE, "ingest")
        if doc["accepted"]:
            return int(doc["mau_id"])
        return FilteredReason(reason=doc["reason"])

    def commit(self) -> CommitReceipt:
        """Make everything remembered so far durable and recallable."""
        response = self._request("POST", "/v1/commit", retry=False)
        doc = schemas.check(response.json(), schemas.COMMIT_RESPONSE, "commit")
        return CommitReceipt.from_dict(doc)

    def get_mau(self, mau_id: int, *, embedding: bool = False) -> MemoryUnit:
        """Fetch one committed memory unit by id."""
        response = self._request("GET", f"/v1/mau/{mau_id}",
                                 params={"embedding": int(embedding)},
                                 retry=True)
        doc = schemas.check(response.json(), schemas.MAU_RESPONSE, "mau")
        return MemoryUnit.from_dict(doc)

    # -- transport ----------------------------------------------------------

    def _request(self, method: str, path: str, *,
                 json_body: dict[str, Any] | None = None,
                 params: dict[str, Any] | None = None,
                 retry: bool) -> httpx.Response:
        attempts = 1 + (self.config.max_retries if retry else 0)
        last_error: httpx.TransportError | None = None
        for attempt in range(attempts):
            if attempt:
                time.sleep(self.config.backoff_s * 2 ** (attempt - 1))
            try:
                response = self._http.request(method, path, json=json_body,
                                              params=params)
            except httpx.TransportError as exc:
                last_error = exc
                continue
            if response.is_success:
                return response
            raise error_for_status(response.status_code,
                                   _error_detail(response))
        raise TransportError(str(last_error), attempts)


def _error_detail(response: httpx.Response) -> Any:
    try:
        return response.json().get("detail", response.text)
    except ValueError:
        return response.text

"""Typed errors mirroring the service's failure modes."""

from __future__ import annotations

from typing import Any


class ClientError(Exception):
    """Base class for every error this package raises deliberately."""


class TransportError(ClientError):
    """The service could not be reached, even after any allowed retries."""

    def __init__(self, message: str, attempts: int) -> None:
        super().__init__(f"{message} (after {attempts} attempt(s))")
        self.attempts = attempts


class SchemaMismatch(ClientError):
    """A response did not match the vendored wire schema.

    Raised before any wrapping, so version skew between client and service
    surfaces as itself rather than as an attribute error downstream.
    """


class HttpError(ClientError):
    """An HTTP response with an error status.

    ``detail`` carries the server's message verbatim; for malformed-body
    rejections it is the server's structured list instead of a string.
    """

    def __init__(self, status_code: int, detail: Any) -> None:
        super().__init__(f"HTTP {status_code}: {detail}")
        self.status_code = status_code
        self.detail = detail


class ValidationError(HttpError):
    """The service rejected the request as invalid (400)."""


class NotFound(HttpError):
    """The requested resource does not exist (404)."""


class WriterConflict(HttpError):
    """Another process holds the store's write lock (409)."""


class ServiceUnavailable(HttpError):
    """The service is up but has no usable store behind it (503)."""


class ServerError(HttpError):
    """Any other error status, including upstream answer failures (502)."""


_ERROR_BY_STATUS = {
    400: ValidationError,
    404: NotFound,
    409: WriterConflict,
    503: ServiceUnavailable,
}


def error_for_status(status_code: int, detail: Any) -> HttpError:
    """The most specific error type for a non-2xx response."""
    cls = _ERROR_BY_STATUS.get(status_code, ServerError)
    return cls(status_code, detail)

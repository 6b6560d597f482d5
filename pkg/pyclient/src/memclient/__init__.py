"""SDK for the memengine HTTP memory service."""

from .client import MemoryClient
from .config import ClientConfig
from .errors import (
    ClientError,
    HttpError,
    NotFound,
    SchemaMismatch,
    ServerError,
    ServiceUnavailable,
    TransportError,
    ValidationError,
    WriterConflict,
)
from .models import (
    CommitReceipt,
    FilteredReason,
    MemoryUnit,
    QueryResponse,
    StoreStats,
)

__all__ = [
    "ClientConfig",
    "ClientError",
    "CommitReceipt",
    "FilteredReason",
    "HttpError",
    "MemoryClient",
    "MemoryUnit",
    "NotFound",
    "QueryResponse",
    "SchemaMismatch",
    "ServerError",
    "ServiceUnavailable",
    "StoreStats",
    "TransportError",
    "ValidationError",
    "WriterConflict",
]

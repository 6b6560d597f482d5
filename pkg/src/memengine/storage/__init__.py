from .audit import AuditReport, audit_store
from .cold import ColdMissing, ColdStore
from .hot import (
    FORMAT_VERSION,
    HotStore,
    StorageError,
    StoreSnapshot,
    WriterConflict,
    mau_from_json,
    mau_to_json,
)

__all__ = [
    "AuditReport",
    "ColdMissing",
    "ColdStore",
    "FORMAT_VERSION",
    "HotStore",
    "StorageError",
    "StoreSnapshot",
    "WriterConflict",
    "audit_store",
    "mau_from_json",
    "mau_to_json",
]

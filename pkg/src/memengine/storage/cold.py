"""Content-addressed cold storage for raw payloads and oversized text."""

from __future__ import annotations

import hashlib
import os
from pathlib import Path

from .hot import StorageError


class ColdMissing(StorageError):
    """The referenced cold object is not present."""


class ColdStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, ref: str) -> Path:
        return self.root / ref[:2] / ref

    def put(self, payload: bytes) -> str:
        """Store a payload and return its sha256 hex digest.

        Identical payloads share one object; writes go through a temp file
        and an atomic rename so a crash never leaves a half-written object
        under its final name.
        """
        ref = hashlib.sha256(payload).hexdigest()
        path = self._path(ref)
        if path.exists():
            return ref
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_name(path.name + f".tmp{os.getpid()}")
        with open(tmp, "wb") as fh:
            fh.write(payload)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
        return ref

    def put_text(self, text: str) -> str:
        return self.put(text.encode("utf-8"))

    def has(self, ref: str) -> bool:
        return self._path(ref).exists()

    def get(self, ref: str) -> bytes:
        path = self._path(ref)
        if not path.exists():
            raise ColdMissing(f"cold object {ref} not found")
        with open(path, "rb") as fh:
            return fh.read()

    def get_text(self, ref: str) -> str:
        return self.get(ref).decode("utf-8")

    def object_count(self) -> int:
        return sum(1 for p in self.root.glob("*/*") if p.is_file())

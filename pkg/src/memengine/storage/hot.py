"""Append-only JSON Lines store for memory units.

Layout inside a store directory:

    config.json     engine config, format version, creation timestamp
    maus.jsonl      one record per line; line i holds the unit with id i
    snapshot.json   commit marker: committed record count and snapshot tag
    cold/           content-addressed payloads (see cold.py)
    graph.jsonl     knowledge graph entities and relations
    indexes/        serialized retrieval indexes keyed by snapshot tag

Records become durable when appended and flushed, but are visible to
readers only after commit(). A truncated final line (torn write) is dropped
on reload; corruption anywhere earlier is an error.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from ..core.config import EngineConfig, config_from_dict
from ..core.types import Mau, ModalityKind, iso_to_ms, ms_to_iso

FORMAT_VERSION = 1


class StorageError(RuntimeError):
    pass


class WriterConflict(StorageError):
    """Another process already holds the store's writer lock."""


def mau_to_json(mau: Mau) -> dict[str, Any]:
    return {
        "id": mau.id,
        "summary": mau.summary,
        "embedding": [float(x) for x in mau.embedding],
        "cold_ref": mau.cold_ref,
        "timestamp": ms_to_iso(mau.timestamp_ms),
        "modality": mau.modality.value,
        "links": [[t, k] for t, k in mau.links],
        "source": mau.source,
    }


def mau_from_json(doc: dict[str, Any]) -> Mau:
    return Mau(
        id=int(doc["id"]),
        summary=doc["summary"],
        embedding=np.asarray(doc["embedding"], dtype=np.float64),
        cold_ref=doc.get("cold_ref"),
        timestamp_ms=iso_to_ms(doc["timestamp"]),
        modality=ModalityKind(doc["modality"]),
        links=tuple((int(t), str(k)) for t, k in doc.get("links", [])),
        source=dict(doc.get("source", {})),
    )


@dataclass(frozen=True)
class StoreSnapshot:
    """Immutable view over the committed prefix of a store."""

    maus: tuple[Mau, ...]
    tag: str

    def __len__(self) -> int:
        return len(self.maus)

    def get(self, mau_id: int) -> Mau:
        if not 0 <= mau_id < len(self.maus):
            raise KeyError(f"unknown mau id {mau_id}")
        return self.maus[mau_id]


def _atomic_write_json(path: Path, doc: dict[str, Any]) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


class HotStore:
    def __init__(self, root: Path, config: EngineConfig, maus: list[Mau],
                 committed: int, tag: str, created_at: str, writer: bool):
        self.root = root
        self.config = config
        self.created_at = created_at
        self._maus = maus
        self._committed = committed
        self._tag = tag
        self._writer = writer
        self._log = None

    # -- construction --------------------------------------------------

    @classmethod
    def create(cls, root: str | Path, config: EngineConfig,
               created_at_ms: int | None = None) -> "HotStore":
        root = Path(root)
        if (root / "config.json").exists():
            raise StorageError(f"store already initialized at {root}")
        root.mkdir(parents=True, exist_ok=True)
        (root / "cold").mkdir(exist_ok=True)
        (root / "indexes").mkdir(exist_ok=True)
        if created_at_ms is None:
            created_at_ms = int(time.time() * 1000)
        created = ms_to_iso(created_at_ms)
        _atomic_write_json(root / "config.json", {
            "format_version": FORMAT_VERSION,
            "created_at": created,
            "config": config.to_dict(),
        })
        (root / "maus.jsonl").touch()
        store = cls(root, config, [], 0, _snapshot_tag(0, b""), created, writer=True)
        store._acquire_writer_lock()
        _atomic_write_json(root / "snapshot.json",
                           {"committed": 0, "tag": store._tag})
        return store

    @classmethod
    def open(cls, root: str | Path, writer: bool = True) -> "HotStore":
        root = Path(root)
        config_path = root / "config.json"
        if not config_path.exists():
            raise StorageError(f"no store at {root}")
        with open(config_path, "r", encoding="utf-8") as fh:
            meta = json.load(fh)
        if meta.get("format_version") != FORMAT_VERSION:
            raise StorageError(f"unsupported store format {meta.get('format_version')}")
        config = config_from_dict(meta["config"])
        maus, last_line = _replay_log(root / "maus.jsonl")
        committed, tag = _read_marker(root / "snapshot.json", len(maus), last_line)
        store = cls(root, config, maus, committed, tag, meta["created_at"], writer)
        if writer:
            store._acquire_writer_lock()
        return store

    # -- paths ----------------------------------------------------------

    @property
    def log_path(self) -> Path:
        return self.root / "maus.jsonl"

    @property
    def lock_path(self) -> Path:
        return self.root / ".writer.lock"

    # -- writer lock ----------------------------------------------------

    def _acquire_writer_lock(self) -> None:
        try:
            fd = os.open(self.lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise WriterConflict(f"store {self.root} is held by another writer")
        with os.fdopen(fd, "w") as fh:
            fh.write(str(os.getpid()))
        if self._log is None:
            self._log = open(self.log_path, "a", encoding="utf-8")

    def close(self) -> None:
        if self._log is not None:
            self._log.close()
            self._log = None
        if self._writer and self.lock_path.exists():
            self.lock_path.unlink()
        self._writer = False

    def __enter__(self) -> "HotStore":
        return self

    def __exit__(self, *exc: Any) -> None:
        self.close()

    # -- appends and commits ---------------------------------------------

    @property
    def next_id(self) -> int:
        return len(self._maus)

    @property
    def count(self) -> int:
        return len(self._maus)

    @property
    def committed_count(self) -> int:
        return self._committed

    @property
    def tag(self) -> str:
        return self._tag

    def append(self, mau: Mau) -> int:
        if self._log is None:
            raise WriterConflict("store opened read-only")
        if mau.id != len(self._maus):
            raise StorageError(f"expected id {len(self._maus)}, got {mau.id}")
        for target, _kind in mau.links:
            if not 0 <= target < mau.id:
                raise StorageError(f"link target {target} does not exist yet")
        line = json.dumps(mau_to_json(mau), sort_keys=True)
        self._log.write(line + "\n")
        self._log.flush()
        self._maus.append(mau)
        return mau.id

    def commit(self) -> str:
        if self._log is None:
            raise WriterConflict("store opened read-only")
        self._log.flush()
        os.fsync(self._log.fileno())
        self._committed = len(self._maus)
        last = b""
        if self._maus:
            last = json.dumps(mau_to_json(self._maus[-1]), sort_keys=True).encode()
        self._tag = _snapshot_tag(self._committed, last)
        _atomic_write_json(self.root / "snapshot.json",
                           {"committed": self._committed, "tag": self._tag})
        return self._tag

    def reload(self) -> None:
        """Re-read the log and commit marker from disk.

        Reader handles see commits made by the writer process only after a
        reload; a writer's own handle is already current because appends go
        through it.
        """
        maus, last_line = _replay_log(self.log_path)
        self._maus = maus
        self._committed, self._tag = _read_marker(
            self.root / "snapshot.json", len(maus), last_line)

    def snapshot(self) -> StoreSnapshot:
        return StoreSnapshot(maus=tuple(self._maus[: self._committed]), tag=self._tag)

    def all_records(self) -> tuple[Mau, ...]:
        """Every recovered record, including appends not yet committed."""
        return tuple(self._maus)


def _snapshot_tag(count: int, last_line: bytes) -> str:
    h = hashlib.sha256()
    h.update(str(count).encode())
    h.update(b"\x00")
    h.update(last_line)
    return h.hexdigest()[:16]


def _replay_log(path: Path) -> tuple[list[Mau], bytes]:
    maus: list[Mau] = []
    last_line = b""
    if not path.exists():
        return maus, last_line
    with open(path, "rb") as fh:
        data = fh.read()
    lines = data.split(b"\n")
    # data ending in newline yields a trailing empty chunk; anything else is
    # a torn final write
    complete, partial = lines[:-1], lines[-1]
    for i, line in enumerate(complete):
        try:
            doc = json.loads(line.decode("utf-8"))
            mau = mau_from_json(doc)
        except Exception as exc:
            if i == len(complete) - 1 and not partial:
                break  # torn write that happened to end in a newline
            raise StorageError(f"corrupt record at line {i}: {exc}") from exc
        if mau.id != i:
            raise StorageError(f"line {i} holds id {mau.id}")
        maus.append(mau)
        last_line = line
    return maus, last_line


def _read_marker(path: Path, recovered: int, last_line: bytes) -> tuple[int, str]:
    if not path.exists():
        return 0, _snapshot_tag(0, b"")
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    marked = int(doc.get("committed", 0))
    if marked > recovered:
        # the log lost records after the marker was written; fall back to
        # what actually survived
        return recovered, _snapshot_tag(recovered, last_line)
    return marked, str(doc.get("tag", _snapshot_tag(marked, last_line)))

"""Consistency checks over a store directory."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from ..core.types import UNIT_NORM_TOL, iso_to_ms, ms_to_iso
from .cold import ColdStore
from .hot import HotStore


@dataclass
class AuditReport:
    records: int = 0
    cold_objects: int = 0
    problems: list[dict[str, Any]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def add(self, kind: str, detail: str, mau_id: int | None = None) -> None:
        entry: dict[str, Any] = {"kind": kind, "detail": detail}
        if mau_id is not None:
            entry["mau_id"] = mau_id
        self.problems.append(entry)

    def to_dict(self) -> dict[str, Any]:
        return {
            "records": self.records,
            "cold_objects": self.cold_objects,
            "ok": self.ok,
            "problems": self.problems,
        }


def _day(timestamp_ms: int) -> str:
    return ms_to_iso(timestamp_ms)[:10]


def audit_store(root: str | Path) -> AuditReport:
    """Check link integrity, cold-object presence and hashes, embedding
    norms, and timestamp sanity for every recovered record."""
    root = Path(root)
    report = AuditReport()
    store = HotStore.open(root, writer=False)
    cold = ColdStore(root / "cold")
    records = store.all_records()
    report.records = len(records)
    report.cold_objects = cold.object_count()
    created_day = store.created_at[:10]

    # conversation -> per-session max timestamp, in session first-seen order
    session_peaks: dict[str, list[tuple[str, int]]] = {}

    for mau in records:
        for target, kind in mau.links:
            if not 0 <= target < len(records):
                report.add("dangling_link",
                           f"link ({target}, {kind}) points outside the store",
                           mau.id)
        if mau.cold_ref is not None:
            if not cold.has(mau.cold_ref):
                report.add("dangling_cold_ref",
                           f"cold object {mau.cold_ref} missing", mau.id)
            else:
                payload = cold.get(mau.cold_ref)
                digest = hashlib.sha256(payload).hexdigest()
                if digest != mau.cold_ref:
                    report.add("cold_hash_mismatch",
                               f"cold object hashes to {digest}", mau.id)
        norm = float(np.linalg.norm(mau.embedding))
        if abs(norm - 1.0) > UNIT_NORM_TOL:
            report.add("bad_embedding_norm", f"norm {norm}", mau.id)

        src_ts = mau.source.get("timestamp")
        if src_ts is not None:
            try:
                src_day = ms_to_iso(iso_to_ms(str(src_ts)))[:10]
            except ValueError:
                src_day = None
                report.add("bad_source_timestamp", f"unparseable {src_ts!r}", mau.id)
            if src_day is not None and _day(mau.timestamp_ms) == created_day \
                    and src_day != created_day:
                report.add("ingestion_date_overwrite",
                           f"record dated {created_day} but source says {src_day}",
                           mau.id)

        conv = str(mau.source.get("conversation_id", ""))
        sess = str(mau.source.get("session_id", ""))
        peaks = session_peaks.setdefault(conv, [])
        if not peaks or peaks[-1][0] != sess:
            earlier = [p for s, p in peaks if s != sess]
            if earlier and mau.timestamp_ms < max(earlier):
                report.add("session_order_violation",
                           f"session {sess!r} starts before an earlier session's"
                           f" latest record", mau.id)
            peaks.append((sess, mau.timestamp_ms))
        else:
            peaks[-1] = (sess, max(peaks[-1][1], mau.timestamp_ms))

    store.close()
    return report

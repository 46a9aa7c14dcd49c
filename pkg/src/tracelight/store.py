"""Durable state: append-only report log, snapshot, groups, selections.

The log (``ingest.log``) is JSONL, one record per line: ``report`` records
carry the raw trace text so state can always be re-derived by replay, and
``selection`` records make manual frame selections durable. A snapshot
(``snapshot.json``) holds the full state up to a log sequence number;
recovery is snapshot + replay of the log tail, which must equal a replay
of the whole log from scratch.

One writer owns the log and the in-memory state; readers go through the
same lock and always observe a consistent (N, df) pair. A torn write at
the log tail (crash mid-append) is detected by line integrity and
discarded on the next open.
"""

from __future__ import annotations

import json
import logging
import os
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from . import parser
from .dedup import GroupStore, TraceGroup, dedup_ingest
from .errors import (
    CorruptSnapshot,
    IndexOutOfRange,
    IoFailure,
    StoreUnavailable,
    TracelightError,
    UnknownGroup,
)
from .highlight import SuggestionSet, score_trace, suggest_top_k
from .idf import CorpusStats
from .parser import ExceptionSegment, RawReport, StackFrame, StackTrace

LOG = logging.getLogger("tracelight.store")

LOG_NAME = "ingest.log"
SNAPSHOT_NAME = "snapshot.json"
SNAPSHOT_VERSION = 1


def utc_now() -> str:
    """Current time, ISO-8601 UTC at seconds precision."""
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass(frozen=True)
class FrameSelection:
    group_id: str
    selected_indices: tuple[int, ...]  # sorted, may be empty (explicit clear)
    updated_at: str
    author: str | None = None


@dataclass(frozen=True)
class IngestResult:
    group: TraceGroup
    is_new_group: bool
    trace: StackTrace
    seq: int
    received_at: str


class TriageStore:
    """In-memory corpus state backed by the log + snapshot pair."""

    def __init__(self, data_dir: str | Path, read_only: bool = False) -> None:
        self.data_dir = Path(data_dir)
        self.read_only = read_only
        self.groups = GroupStore()
        self.stats = CorpusStats()
        self.selections: dict[str, FrameSelection] = {}
        self._seq = 0
        self._log_fh = None
        self._lock = threading.RLock()

    # -- lifecycle -----------------------------------------------------

    @classmethod
    def open(cls, data_dir: str | Path, read_only: bool = False) -> "TriageStore":
        """Recover state from ``data_dir`` (both files optional).

        A corrupt snapshot is discarded with a warning and the whole log
        is replayed instead. Unless ``read_only``, a torn log tail is
        truncated and the log is opened for appending.
        """
        store = cls(data_dir, read_only=read_only)
        if not read_only:
            try:
                store.data_dir.mkdir(parents=True, exist_ok=True)
            except OSError as e:
                raise IoFailure(f"cannot create data dir {data_dir}: {e}") from e

        upto_seq = 0
        snap_path = store.data_dir / SNAPSHOT_NAME
        if snap_path.is_file():
            try:
                upto_seq = store._load_snapshot(snap_path)
            except CorruptSnapshot as e:
                LOG.warning("corrupt snapshot (%s); falling back to full log replay", e)
                store.groups = GroupStore()
                store.stats = CorpusStats()
                store.selections = {}
                upto_seq = 0
        store._seq = upto_seq

        log_path = store.data_dir / LOG_NAME
        if log_path.is_file():
            records, good_end, partial = _scan_log(log_path)
            for rec in records:
                seq = rec.get("seq", 0)
                if seq > upto_seq:
                    store._apply_record(rec)
                    store._seq = seq
            if partial:
                LOG.warning("discarding torn tail of %s", log_path)
                if not read_only:
                    with open(log_path, "r+b") as fh:
                        fh.truncate(good_end)

        if not read_only:
            try:
                store._log_fh = open(log_path, "a", encoding="utf-8")
            except OSError as e:
                raise IoFailure(f"cannot open log {log_path}: {e}") from e
        return store

    def close(self) -> None:
        if self._log_fh is not None:
            self._log_fh.close()
            self._log_fh = None

    def __enter__(self) -> "TriageStore":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    # -- write path ----------------------------------------------------

    def ingest_report(self, report: RawReport, now: str | None = None) -> IngestResult:
        """Parse, dedup, register, and durably log one report.

        The log record is appended (and flushed) before any in-memory
        mutation, so a failed append leaves state untouched.
        """
        trace = parser.parse(report)  # outside the lock: never blocks readers
        stamp = now or report.received_at or utc_now()
        with self._lock:
            assigned: dict[str, int] = {}

            def precommit(group_id: str, is_new: bool) -> None:
                seq = self._append_line(
                    {
                        "kind": "report",
                        "seq": self._seq + 1,
                        "received_at": stamp,
                        "product": report.product,
                        "format": trace.source_format,
                        "raw_text": report.text,
                        "group_id": group_id,
                        "is_new_group": is_new,
                    }
                )
                assigned["seq"] = seq

            group, is_new = dedup_ingest(trace, stamp, self.groups, precommit=precommit)
            self.stats.note_report()
            if is_new:
                self.stats.register_group(group.distinct_keys)
        return IngestResult(group, is_new, trace, assigned["seq"], stamp)

    def save_selection(
        self,
        group_id: str,
        selected_indices: list[int],
        author: str | None = None,
        now: str | None = None,
    ) -> FrameSelection:
        """Replace the group's shared selection (last writer wins)."""
        stamp = now or utc_now()
        with self._lock:
            group = self.groups.get(group_id)
            if group is None:
                raise UnknownGroup(f"no group {group_id}")
            limit = len(group.frame_keys)
            cleaned = sorted(set(selected_indices))
            for i in cleaned:
                if not isinstance(i, int) or i < 0 or i >= limit:
                    raise IndexOutOfRange(f"index {i} outside 0..{limit - 1}")
            self._append_line(
                {
                    "kind": "selection",
                    "seq": self._seq + 1,
                    "group_id": group_id,
                    "selected_indices": cleaned,
                    "author": author,
                    "updated_at": stamp,
                }
            )
            selection = FrameSelection(group_id, tuple(cleaned), stamp, author)
            self.selections[group_id] = selection
            return selection

    def write_snapshot(self) -> Path:
        """Atomically write the current state (temp file + rename)."""
        path = self.data_dir / SNAPSHOT_NAME
        tmp = self.data_dir / (SNAPSHOT_NAME + ".tmp")
        with self._lock:
            payload = {
                "version": SNAPSHOT_VERSION,
                "upto_seq": self._seq,
                "n_groups": self.stats.n_groups,
                "n_reports": self.stats.n_reports,
                "df_entries": [list(kv) for kv in sorted(self.stats.df.items())],
                "groups": [
                    _group_payload(g, self.selections.get(g.group_id))
                    for g in sorted(self.groups.groups(), key=lambda g: g.group_id)
                ],
            }
            try:
                with open(tmp, "w", encoding="utf-8") as fh:
                    json.dump(payload, fh, ensure_ascii=False, separators=(",", ":"))
                    fh.flush()
                    os.fsync(fh.fileno())
                os.replace(tmp, path)
            except OSError as e:
                raise IoFailure(f"snapshot write failed: {e}") from e
        return path

    # -- read path -----------------------------------------------------

    def get_group(self, group_id: str) -> TraceGroup:
        with self._lock:
            group = self.groups.get(group_id)
        if group is None:
            raise UnknownGroup(f"no group {group_id}")
        return group

    def get_selection(self, group_id: str) -> FrameSelection | None:
        with self._lock:
            return self.selections.get(group_id)

    def list_groups(self) -> list[TraceGroup]:
        """All groups, most recently seen first, ties by group id."""
        with self._lock:
            groups = self.groups.groups()
        groups.sort(key=lambda g: g.group_id)
        groups.sort(key=lambda g: g.last_seen, reverse=True)
        return groups

    def suggest_for_keys(self, frame_keys, k: int) -> SuggestionSet:
        """Top-k suggestions from one consistent stats snapshot."""
        with self._lock:
            scores = score_trace(frame_keys, self.stats)
            return suggest_top_k(scores, k, computed_at=utc_now())

    def corpus_size(self) -> tuple[int, int, int]:
        with self._lock:
            return self.stats.corpus_size()

    # -- internals -----------------------------------------------------

    def _append_line(self, payload: dict) -> int:
        if self.read_only or self._log_fh is None:
            raise StoreUnavailable("store is read-only")
        line = json.dumps(payload, ensure_ascii=False, separators=(",", ":"))
        try:
            self._log_fh.write(line + "\n")
            self._log_fh.flush()
        except (OSError, ValueError) as e:
            raise IoFailure(f"log append failed: {e}") from e
        self._seq = payload["seq"]
        return self._seq

    def _apply_record(self, rec: dict) -> None:
        kind = rec.get("kind")
        if kind == "report":
            try:
                trace = parser.parse(
                    RawReport(text=rec["raw_text"], format_hint=rec["format"])
                )
            except TracelightError as e:
                LOG.warning("replay: skipping unparseable record %s: %s", rec.get("seq"), e)
                return
            stamp = rec["received_at"]
            group, is_new = dedup_ingest(trace, stamp, self.groups)
            self.stats.note_report()
            if is_new:
                self.stats.register_group(group.distinct_keys)
        elif kind == "selection":
            group = self.groups.get(rec["group_id"])
            if group is None:
                LOG.warning("replay: selection for unknown group %s", rec["group_id"])
                return
            self.selections[rec["group_id"]] = FrameSelection(
                group_id=rec["group_id"],
                selected_indices=tuple(rec["selected_indices"]),
                updated_at=rec["updated_at"],
                author=rec.get("author"),
            )
        else:
            LOG.warning("replay: unknown record kind %r", kind)

    def _load_snapshot(self, path: Path) -> int:
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, ValueError) as e:
            raise CorruptSnapshot(str(e)) from e
        if not isinstance(payload, dict):
            raise CorruptSnapshot("snapshot root is not an object")
        if payload.get("version") != SNAPSHOT_VERSION:
            raise CorruptSnapshot(f"unsupported version {payload.get('version')!r}")
        try:
            self.stats.n_groups = int(payload["n_groups"])
            self.stats.n_reports = int(payload["n_reports"])
            self.stats.df = {k: int(v) for k, v in payload["df_entries"]}
            for entry in payload["groups"]:
                group, selection = _group_from_payload(entry)
                self.groups.insert(group)
                if selection is not None:
                    self.selections[group.group_id] = selection
            return int(payload["upto_seq"])
        except (KeyError, TypeError, ValueError, TracelightError) as e:
            raise CorruptSnapshot(f"malformed snapshot: {e!r}") from e


def _scan_log(path: Path) -> tuple[list[dict], int, bool]:
    """Read complete records; report the byte offset where integrity ends."""
    records: list[dict] = []
    good_end = 0
    partial = False
    try:
        with open(path, "rb") as fh:
            for line in fh:
                if not line.endswith(b"\n"):
                    partial = True
                    break
                try:
                    rec = json.loads(line)
                    if not isinstance(rec, dict) or "seq" not in rec:
                        raise ValueError("not a record")
                except ValueError:
                    partial = True
                    break
                records.append(rec)
                good_end += len(line)
    except OSError as e:
        raise IoFailure(f"cannot read log {path}: {e}") from e
    return records, good_end, partial


def _trace_payload(trace: StackTrace) -> dict:
    return {
        "source_format": trace.source_format,
        "skipped_lines": trace.skipped_lines,
        "segments": [
            {
                "kind": seg.kind,
                "exception_type": seg.exception_type,
                "message": seg.message,
                "elided_count": seg.elided_count,
                "frames": [
                    {
                        "location": f.location,
                        "function": f.function,
                        "file": f.file,
                        "line": f.line,
                        "raw": f.raw,
                    }
                    for f in seg.frames
                ],
            }
            for seg in trace.segments
        ],
    }


def _trace_from_payload(payload: dict) -> StackTrace:
    segments = [
        ExceptionSegment(
            kind=seg["kind"],
            exception_type=seg["exception_type"],
            message=seg["message"],
            frames=[
                StackFrame(
                    location=f["location"],
                    function=f["function"],
                    file=f["file"],
                    line=f["line"],
                    raw=f["raw"],
                )
                for f in seg["frames"]
            ],
            elided_count=seg["elided_count"],
        )
        for seg in payload["segments"]
    ]
    return StackTrace(
        segments=segments,
        source_format=payload["source_format"],
        skipped_lines=payload["skipped_lines"],
    )


def _group_payload(group: TraceGroup, selection: FrameSelection | None) -> dict:
    return {
        "group_id": group.group_id,
        "hash64": group.hash64,
        "canonical_string": group.canonical_string,
        "frame_keys": list(group.frame_keys),
        "occurrence_count": group.occurrence_count,
        "first_seen": group.first_seen,
        "last_seen": group.last_seen,
        "selection": None
        if selection is None
        else {
            "selected_indices": list(selection.selected_indices),
            "updated_at": selection.updated_at,
            "author": selection.author,
        },
        "representative": _trace_payload(group.representative),
    }


def _group_from_payload(entry: dict) -> tuple[TraceGroup, FrameSelection | None]:
    keys = tuple(entry["frame_keys"])
    group = TraceGroup(
        group_id=entry["group_id"],
        hash64=int(entry["hash64"]),
        canonical_string=entry["canonical_string"],
        representative=_trace_from_payload(entry["representative"]),
        frame_keys=keys,
        distinct_keys=frozenset(keys),
        occurrence_count=int(entry["occurrence_count"]),
        first_seen=entry["first_seen"],
        last_seen=entry["last_seen"],
    )
    sel = entry.get("selection")
    selection = None
    if sel is not None:
        selection = FrameSelection(
            group_id=group.group_id,
            selected_indices=tuple(sel["selected_indices"]),
            updated_at=sel["updated_at"],
            author=sel.get("author"),
        )
    return group, selection

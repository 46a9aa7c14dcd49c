"""Frame identity normalization, trace fingerprinting, and exact dedup.

A frame key is the stable identity of a frame: code location plus function
with volatile details (line numbers, JIT-generated lambda suffixes,
environment path prefixes) removed. A whole trace's identity is its
canonical string — segment exception types plus the ordered frame keys —
and its 64-bit FNV-1a hash. Dedup is exact match on the canonical string;
the hash is an index, with collisions resolved by string comparison.
"""

from __future__ import annotations

import json
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from ._kernels import fnv1a_64
from .errors import TracelightError
from .parser import StackFrame, StackTrace

FrameKey = str

# com.example.Foo$$Lambda$17/0x0000a1b2  or  ...$$Lambda/0x80010c9f8  or  ...$$Lambda$17/1850777594
_LAMBDA_SLASH_RE = re.compile(r"(\$\$Lambda(?:\$\d+)?)/(?:0x[0-9a-fA-F]+|\d+)$")
_LAMBDA_DIGITS_RE = re.compile(r"\$\$Lambda\$\d+")

_LIB_PYTHON_RE = re.compile(r"lib/python\d+\.\d+/")
_SITE_PACKAGES = "site-packages/"


def normalize_location(location: str, source_format: str) -> str:
    """Strip volatile parts of a code location.

    JVM: trailing ``/0x<hex>`` or ``/<digits>`` after ``$$Lambda`` and the
    per-run lambda counter (``$$Lambda$17`` -> ``$$Lambda``) are removed;
    numbered anonymous classes (``Foo$1``) are kept. Python: the path is
    cut after the last ``site-packages/`` or ``lib/python<x>.<y>/``
    component, otherwise kept whole.
    """
    if source_format == "jvm":
        if "$$Lambda" in location:
            location = _LAMBDA_SLASH_RE.sub(r"\1", location)
            location = _LAMBDA_DIGITS_RE.sub("$$Lambda", location)
        return location

    cut = -1
    i = location.rfind(_SITE_PACKAGES)
    if i >= 0:
        cut = i + len(_SITE_PACKAGES)
    for m in _LIB_PYTHON_RE.finditer(location):
        cut = max(cut, m.end())
    if cut > 0 and cut < len(location):
        return location[cut:]
    return location


def normalize_frame(frame: StackFrame, source_format: str) -> FrameKey:
    """Canonical identity of a frame; excludes file and line by construction."""
    loc = normalize_location(frame.location, source_format)
    if source_format == "jvm":
        return sys.intern(f"{loc}.{frame.function}")
    return sys.intern(f"{loc}::{frame.function}")


def trace_frame_keys(trace: StackTrace) -> list[FrameKey]:
    """Frame keys aligned with ``trace.all_frames``."""
    fmt = trace.source_format
    return [normalize_frame(f, fmt) for f in trace.all_frames]


def canonical_string(trace: StackTrace, keys: list[FrameKey] | None = None) -> str:
    """Exact string whose hash identifies a trace group.

    Exception types of all segments joined by newlines, a ``--`` divider,
    then the frame keys in canonical (innermost-first) order. Messages are
    excluded: they embed user paths and values.
    """
    if keys is None:
        keys = trace_frame_keys(trace)
    types = "\n".join(seg.exception_type for seg in trace.segments)
    return types + "\n--\n" + "\n".join(keys)


@dataclass(frozen=True)
class TraceFingerprint:
    hash64: int
    canonical_string: str


def fingerprint(trace: StackTrace) -> TraceFingerprint:
    """Deterministic fingerprint of a parsed trace."""
    canonical = canonical_string(trace)
    return TraceFingerprint(fnv1a_64(canonical.encode("utf-8")), canonical)


@dataclass
class TraceGroup:
    """Equivalence class of identical normalized traces.

    Append-only after creation aside from ``occurrence_count`` and
    ``last_seen``; the representative and frame keys never change.
    """

    group_id: str
    hash64: int
    canonical_string: str
    representative: StackTrace
    frame_keys: tuple[FrameKey, ...]
    distinct_keys: frozenset[FrameKey]
    occurrence_count: int
    first_seen: str
    last_seen: str


class GroupStore:
    """In-memory group index: by id and by fingerprint hash chain."""

    def __init__(self) -> None:
        self.by_id: dict[str, TraceGroup] = {}
        self._by_hash: dict[int, list[TraceGroup]] = {}

    def __len__(self) -> int:
        return len(self.by_id)

    def get(self, group_id: str) -> TraceGroup | None:
        return self.by_id.get(group_id)

    def groups(self) -> list[TraceGroup]:
        return list(self.by_id.values())

    def find(self, hash64: int, canonical: str) -> TraceGroup | None:
        for group in self._by_hash.get(hash64, ()):
            if group.canonical_string == canonical:
                return group
        return None

    def insert(self, group: TraceGroup) -> None:
        if group.group_id in self.by_id:
            raise TracelightError(f"duplicate group id {group.group_id}")
        self.by_id[group.group_id] = group
        self._by_hash.setdefault(group.hash64, []).append(group)

    def remove(self, group: TraceGroup) -> None:
        """Undo an insert (log-append rollback path)."""
        self.by_id.pop(group.group_id, None)
        chain = self._by_hash.get(group.hash64)
        if chain is not None:
            chain.remove(group)
            if not chain:
                del self._by_hash[group.hash64]

    def chain_length(self, hash64: int) -> int:
        return len(self._by_hash.get(hash64, ()))


def dedup_ingest(
    trace: StackTrace,
    now: str,
    store: GroupStore,
    precommit: Callable[[str, bool], None] | None = None,
) -> tuple[TraceGroup, bool]:
    """Fold a trace into its group, creating the group when new.

    Group ids are the fingerprint hash as 16 hex chars; on a hash collision
    with a different canonical string a ``-<n>`` suffix is appended, so
    replays reproduce ids bit-identically.

    ``precommit(group_id, is_new)`` runs after the group is resolved but
    before any mutation; callers use it for the durable log append, and an
    exception there (StoreUnavailable) aborts the ingest cleanly.
    """
    keys = trace_frame_keys(trace)
    canonical = canonical_string(trace, keys)
    h = fnv1a_64(canonical.encode("utf-8"))

    existing = store.find(h, canonical)
    if existing is not None:
        if precommit is not None:
            precommit(existing.group_id, False)
        existing.occurrence_count += 1
        existing.last_seen = now
        return existing, False

    collisions = store.chain_length(h)
    group_id = f"{h:016x}" if collisions == 0 else f"{h:016x}-{collisions}"
    if precommit is not None:
        precommit(group_id, True)
    group = TraceGroup(
        group_id=group_id,
        hash64=h,
        canonical_string=canonical,
        representative=trace,
        frame_keys=tuple(keys),
        distinct_keys=frozenset(keys),
        occurrence_count=1,
        first_seen=now,
        last_seen=now,
    )
    store.insert(group)
    return group, True


@dataclass(frozen=True)
class SubsystemRule:
    prefix: str
    label: str


def load_subsystem_rules(path: str | Path) -> list[SubsystemRule]:
    """Load the ordered rules file: a JSON array of {prefix, label}."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, list):
        raise TracelightError(f"subsystem rules file {path}: expected a JSON array")
    rules = []
    for entry in data:
        prefix = entry.get("prefix") if isinstance(entry, dict) else None
        label = entry.get("label") if isinstance(entry, dict) else None
        if not prefix or not isinstance(label, str):
            raise TracelightError(f"subsystem rules file {path}: bad entry {entry!r}")
        rules.append(SubsystemRule(prefix=prefix, label=label))
    return rules


def assign_subsystems(
    trace: StackTrace, rules: list[SubsystemRule]
) -> list[str | None]:
    """Per-frame subsystem label: first rule whose prefix matches wins."""
    labels: list[str | None] = []
    fmt = trace.source_format
    for frame in trace.all_frames:
        loc = normalize_location(frame.location, fmt)
        label = None
        for rule in rules:
            if loc.startswith(rule.prefix):
                label = rule.label
                break
        labels.append(label)
    return labels

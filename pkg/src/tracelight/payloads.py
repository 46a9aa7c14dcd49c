"""JSON payload builders shared by the HTTP API and the CLI.

Both interfaces must emit byte-equal structures for the same trace and
stats snapshot, so there is exactly one place that shapes them.
"""

from __future__ import annotations

from .dedup import SubsystemRule, TraceGroup, assign_subsystems
from .highlight import SuggestionSet
from .parser import StackTrace
from .store import FrameSelection


def frames_payload(
    trace: StackTrace,
    frame_keys,
    rules: list[SubsystemRule] | None = None,
) -> list[dict]:
    """Rows for ``frames``: index, location, function, line?, subsystem?, key."""
    labels = assign_subsystems(trace, rules) if rules else [None] * len(trace.all_frames)
    rows = []
    for i, frame in enumerate(trace.all_frames):
        row: dict = {
            "index": i,
            "location": frame.location,
            "function": frame.function,
        }
        if frame.line is not None:
            row["line"] = frame.line
        if labels[i] is not None:
            row["subsystem"] = labels[i]
        row["key"] = frame_keys[i]
        rows.append(row)
    return rows


def suggestions_payload(suggestions: SuggestionSet) -> list[dict]:
    """Rows for ``suggestions``, best rank first (rank is 1-based)."""
    return [
        {
            "index": score.index,
            "key": score.key,
            "idf": score.idf,
            "df": score.df,
            "rank": rank,
        }
        for rank, score in enumerate(suggestions.suggested, start=1)
    ]


def selection_payload(selection: FrameSelection | None) -> dict:
    if selection is None:
        return {"selected_indices": []}
    row: dict = {"selected_indices": list(selection.selected_indices)}
    row["updated_at"] = selection.updated_at
    if selection.author is not None:
        row["author"] = selection.author
    return row


def group_payload(group: TraceGroup, selection: FrameSelection | None) -> dict:
    """Summary row used by both the group list and the group detail view."""
    return {
        "group_id": group.group_id,
        "exception_type": group.representative.segments[0].exception_type,
        "top_frame_key": group.frame_keys[0],
        "occurrence_count": group.occurrence_count,
        "first_seen": group.first_seen,
        "last_seen": group.last_seen,
        "has_selection": selection is not None and len(selection.selected_indices) > 0,
    }

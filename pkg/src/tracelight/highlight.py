"""Top-k frame suggestion: score a trace against the corpus, pick the rarest.

Suggestions are recomputed from current stats on every read; per stats
snapshot they are pure and deterministic. Ties break toward the lower
frame index (closer to the failure point), then the lexicographically
smaller key. A recurring key (recursion) is scored once, at its topmost
occurrence, so one recursive frame cannot consume every slot.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InvalidK
from .idf import CorpusStats

DEFAULT_K = 3


@dataclass(frozen=True)
class FrameScore:
    index: int
    key: str
    idf: float
    df: int
    n_groups_at_scoring: int


@dataclass(frozen=True)
class SuggestionSet:
    suggested: tuple[FrameScore, ...]  # rank order, best first
    k_requested: int
    computed_at: str


def score_trace(frame_keys: Sequence[str], stats: CorpusStats) -> list[FrameScore]:
    """One score per distinct key, positioned at its lowest frame index."""
    first_index: dict[str, int] = {}
    for i, key in enumerate(frame_keys):
        if key not in first_index:
            first_index[key] = i
    return [
        FrameScore(
            index=i,
            key=key,
            idf=stats.idf(key),
            df=stats.df.get(key, 0),
            n_groups_at_scoring=stats.n_groups,
        )
        for key, i in first_index.items()
    ]


def suggest_top_k(
    scores: Sequence[FrameScore], k: int = DEFAULT_K, computed_at: str = ""
) -> SuggestionSet:
    """Select min(k, |scores|) entries by (idf desc, index asc, key asc)."""
    if k < 1:
        raise InvalidK(f"k must be >= 1, got {k}")
    ranked = sorted(scores, key=lambda s: (-s.idf, s.index, s.key))
    return SuggestionSet(
        suggested=tuple(ranked[:k]), k_requested=k, computed_at=computed_at
    )

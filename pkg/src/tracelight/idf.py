"""Incremental document-frequency statistics over trace groups.

The IDF "document" is the deduplicated group, not the raw report: a hot
bug duplicated a million times must not drive its own frames' rarity to
the floor. Keys are counted once per group (set semantics), and stats
grow monotonically — no decay or windowing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable


@dataclass
class CorpusStats:
    n_groups: int = 0
    n_reports: int = 0
    df: dict[str, int] = field(default_factory=dict)

    def note_report(self) -> None:
        """Count one successfully ingested report (duplicates included)."""
        self.n_reports += 1

    def register_group(self, distinct_keys: Iterable[str]) -> None:
        """Fold one NEW group into the corpus; never call for duplicates."""
        self.n_groups += 1
        df = self.df
        for key in distinct_keys:
            df[key] = df.get(key, 0) + 1

    def idf(self, key: str) -> float:
        """Smoothed inverse document frequency: ln((1+N)/(1+df)) + 1.

        Defined for unseen keys (df=0, the maximum), strictly decreasing
        in df, and exactly 1.0 for a key present in every group.
        """
        return math.log((1 + self.n_groups) / (1 + self.df.get(key, 0))) + 1.0

    def corpus_size(self) -> tuple[int, int, int]:
        """(n_groups, n_reports, distinct_frame_count)."""
        return self.n_groups, self.n_reports, len(self.df)

"""Combining per-database result lists into one deduplicated set."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .corpus import Document
from .errors import DuplicateIdError


@dataclass(frozen=True)
class MergeReport:
    input_counts: dict[str, int] = field(default_factory=dict)
    duplicates_removed: int = 0
    merged_count: int = 0

    def to_dict(self) -> dict:
        return {
            "input_counts": dict(sorted(self.input_counts.items())),
            "duplicates_removed": self.duplicates_removed,
            "merged_count": self.merged_count,
        }


def merge_result_sets(lists: Sequence[tuple[str, Iterable[Document]]]
                      ) -> tuple[list[Document], MergeReport]:
    """Merge result lists, keeping the first occurrence of every doc_id.

    Lists are scanned in the order given, so the caller's list order decides
    which copy of a cross-database duplicate survives.
    """
    merged: list[Document] = []
    seen: set[str] = set()
    counts: dict[str, int] = {}
    dropped = 0
    for database_id, docs in lists:
        local: set[str] = set()
        n = 0
        for doc in docs:
            if doc.doc_id in local:
                raise DuplicateIdError(doc.doc_id, f"duplicate doc_id {doc.doc_id!r} within list {database_id!r}")
            local.add(doc.doc_id)
            n += 1
            if doc.doc_id in seen:
                dropped += 1
                continue
            seen.add(doc.doc_id)
            merged.append(doc)
        # Repeated database ids accumulate rather than overwrite.
        counts[database_id] = counts.get(database_id, 0) + n
    return merged, MergeReport(counts, dropped, len(merged))

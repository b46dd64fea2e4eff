"""Productivity re-ranking and Bradford zone partitioning.

Sources (journals or publishers) are ordered by the number of hits they
contribute, most productive first; documents follow their source. The
resulting ranking is then cut into zones holding roughly equal numbers of
documents.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import _kernels
from .corpus import Document, KeyMode, SourceKey, source_key
from .errors import PartitionError


class ZoneMode(str, enum.Enum):
    STRICT = "strict"
    SNAP = "snap"


@dataclass(frozen=True)
class RankEntry:
    position: int
    doc_id: str
    source_key: SourceKey
    source_rank: int
    source_productivity: int


@dataclass(frozen=True)
class BradfordizedRanking:
    entries: tuple[RankEntry, ...]
    skipped: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def doc_ids(self) -> list[str]:
        return [e.doc_id for e in self.entries]

    def blocks(self) -> list[tuple[SourceKey, int]]:
        """``(source_key, productivity)`` per source, in rank order."""
        out: list[tuple[SourceKey, int]] = []
        for e in self.entries:
            if not out or out[-1][0] != e.source_key:
                out.append((e.source_key, e.source_productivity))
        return out

    def block_sizes(self) -> list[int]:
        return [size for _, size in self.blocks()]

    def to_dict(self) -> dict:
        return {
            "entries": [
                {
                    "position": e.position,
                    "doc_id": e.doc_id,
                    "source_kind": e.source_key.kind.value,
                    "source_key": e.source_key.key,
                    "source_rank": e.source_rank,
                    "source_productivity": e.source_productivity,
                }
                for e in self.entries
            ],
            "skipped": list(self.skipped),
        }


@dataclass(frozen=True)
class Zone:
    name: str
    doc_ids: tuple[str, ...]
    doc_count: int
    source_count: int


@dataclass(frozen=True)
class ZonePartition:
    zones: tuple[Zone, ...]
    mode: ZoneMode
    empty_zones: tuple[str, ...] = ()

    @property
    def core(self) -> Zone:
        return self.zones[0]

    def zone(self, name: str) -> Zone:
        for z in self.zones:
            if z.name == name:
                return z
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "empty_zones": list(self.empty_zones),
            "zones": [
                {"name": z.name, "doc_count": z.doc_count, "source_count": z.source_count,
                 "doc_ids": list(z.doc_ids)}
                for z in self.zones
            ],
        }


def zone_names(num_zones: int) -> list[str]:
    return ["core"] + [f"z{i}" for i in range(2, num_zones + 1)]


def bradfordize(docs: Iterable[Document], key_mode: KeyMode | str = KeyMode.AUTO) -> BradfordizedRanking:
    """Re-rank documents by the productivity of their source.

    Sources are ordered by hit count (descending), ties by source key
    (ascending); documents inside a source block by doc_id. The output
    depends only on the multiset of inputs, never on their order.
    """
    key_mode = KeyMode(key_mode)
    by_source: dict[SourceKey, list[str]] = {}
    skipped: list[str] = []
    for doc in docs:
        key = source_key(doc, key_mode)
        if key is None:
            skipped.append(doc.doc_id)
        else:
            by_source.setdefault(key, []).append(doc.doc_id)

    ordered = sorted(by_source.items(), key=lambda kv: (-len(kv[1]), kv[0].kind.value, kv[0].key))
    entries: list[RankEntry] = []
    position = 1
    for rank, (key, ids) in enumerate(ordered, start=1):
        for doc_id in sorted(ids):
            entries.append(RankEntry(position, doc_id, key, rank, len(ids)))
            position += 1
    return BradfordizedRanking(tuple(entries), tuple(sorted(skipped)))


def strict_sizes(total: int, num_zones: int) -> list[int]:
    base, extra = divmod(total, num_zones)
    return [base + 1 if i < extra else base for i in range(num_zones)]


def snap_cuts(block_sizes: list[int], num_zones: int) -> list[int]:
    """Zone boundaries (document counts) that never split a source block.

    Each ideal cut i*N/k moves to a block boundary; the combination with the
    smallest total distance to the ideal cuts wins, ties going to the
    earliest boundaries. With fewer blocks than zones every block becomes a
    zone of its own and the trailing zones stay empty.
    """
    total = int(sum(block_sizes))
    interior = np.cumsum(np.asarray(block_sizes, dtype=np.int64))[:-1]
    cuts_needed = num_zones - 1
    if interior.shape[0] < cuts_needed:
        return [int(c) for c in interior] + [total] * (cuts_needed - interior.shape[0])
    idx = _kernels.snap_boundaries(interior, total, num_zones)
    return [int(interior[j]) for j in idx]


def partition_zones(ranking: BradfordizedRanking, num_zones: int = 3,
                    mode: ZoneMode | str = ZoneMode.SNAP) -> ZonePartition:
    mode = ZoneMode(mode)
    if num_zones < 2:
        raise PartitionError(f"num_zones must be >= 2, got {num_zones}")
    n = len(ranking)
    if n == 0:
        raise PartitionError("cannot partition an empty ranking")

    if mode is ZoneMode.STRICT:
        sizes = strict_sizes(n, num_zones)
        cuts = list(np.cumsum(sizes)[:-1])
    else:
        cuts = snap_cuts(ranking.block_sizes(), num_zones)

    bounds = [0] + [int(c) for c in cuts] + [n]
    zones = []
    empty = []
    for name, lo, hi in zip(zone_names(num_zones), bounds[:-1], bounds[1:]):
        part = ranking.entries[lo:hi]
        zones.append(Zone(name, tuple(e.doc_id for e in part), len(part),
                          len({e.source_key for e in part})))
        if not part:
            empty.append(name)
    return ZonePartition(tuple(zones), mode, tuple(empty))


def core_documents(partition: ZonePartition) -> list[str]:
    return list(partition.core.doc_ids)


def core_sources(ranking: BradfordizedRanking, partition: ZonePartition) -> list[tuple[SourceKey, int]]:
    """Sources with documents in the core and their productivity, rank order."""
    core = set(partition.core.doc_ids)
    counts = Counter(e.source_key for e in ranking.entries if e.doc_id in core)
    return [(key, size) for key, size in ranking.blocks() if key in counts]

"""Bradford scattering curves and zone statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import fmean
from typing import Sequence

from .bradfordizer import BradfordizedRanking, ZonePartition
from .errors import DataError, PartitionError


@dataclass(frozen=True)
class ScatteringProfile:
    points: tuple[tuple[int, int], ...]
    zone_source_counts: tuple[int, ...]
    total_sources: int
    total_docs: int
    multiplier_sqrt: float | None
    multiplier_adjacent: tuple[float | None, float | None]
    zone_doc_counts: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {
            "total_docs": self.total_docs,
            "total_sources": self.total_sources,
            "zone_doc_counts": list(self.zone_doc_counts),
            "zone_source_counts": list(self.zone_source_counts),
            "multiplier_sqrt": _r(self.multiplier_sqrt, 4),
            "multiplier_adjacent": [_r(v, 4) for v in self.multiplier_adjacent],
        }


def _r(value, digits):
    return None if value is None else round(value, digits)


def _ratio(num: float, den: float) -> float | None:
    return None if den == 0 else num / den


def bradford_multipliers(j1: float, j2: float, j3: float
                         ) -> tuple[float | None, tuple[float | None, float | None]]:
    """Estimate the zone growth factor n from source counts j1 : j2 : j3.

    Returns ``sqrt(j3 / j1)`` and the adjacent ratios ``(j2 / j1, j3 / j2)``;
    an estimate is ``None`` where its denominator is zero.
    """
    outer = _ratio(j3, j1)
    return (None if outer is None else math.sqrt(outer)), (_ratio(j2, j1), _ratio(j3, j2))


def scattering_profile(ranking: BradfordizedRanking, partition: ZonePartition) -> ScatteringProfile:
    if len(ranking) == 0:
        raise PartitionError("cannot profile an empty ranking")
    points = []
    cumulative = 0
    for rank, size in enumerate(ranking.block_sizes(), start=1):
        cumulative += size
        points.append((rank, cumulative))
    counts = tuple(z.source_count for z in partition.zones)
    sqrt_est, adjacent = (None, (None, None))
    if len(counts) >= 3:
        sqrt_est, adjacent = bradford_multipliers(counts[0], counts[1], counts[2])
    return ScatteringProfile(
        points=tuple(points),
        zone_source_counts=counts,
        total_sources=len(points),
        total_docs=cumulative,
        multiplier_sqrt=sqrt_est,
        multiplier_adjacent=adjacent,
        zone_doc_counts=tuple(z.doc_count for z in partition.zones),
    )


def loglog_points(profile: ScatteringProfile) -> list[tuple[float, float]]:
    return [(math.log10(r), math.log10(c)) for r, c in profile.points]


def profile_csv(profile: ScatteringProfile) -> str:
    lines = ["rank,cumulative,log10_rank,log10_cumulative"]
    for (r, c), (lr, lc) in zip(profile.points, loglog_points(profile)):
        lines.append(f"{r},{c},{lr:.6f},{lc:.6f}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ScatteringSummary:
    topics: int
    mean_total_docs: float
    mean_total_sources: float
    mean_zone_source_counts: tuple[float, ...]
    mean_zone_doc_counts: tuple[float, ...]

    @property
    def multipliers(self):
        c = self.mean_zone_source_counts
        if len(c) < 3:
            return None, (None, None)
        return bradford_multipliers(c[0], c[1], c[2])

    def to_dict(self) -> dict:
        sqrt_est, adjacent = self.multipliers
        return {
            "topics": self.topics,
            "mean_total_docs": round(self.mean_total_docs, 2),
            "mean_total_sources": round(self.mean_total_sources, 2),
            "mean_zone_source_counts": [round(v, 2) for v in self.mean_zone_source_counts],
            "mean_zone_doc_counts": [round(v, 2) for v in self.mean_zone_doc_counts],
            "multiplier_sqrt": _r(sqrt_est, 4),
            "multiplier_adjacent": [_r(v, 4) for v in adjacent],
        }


def aggregate_profiles(profiles: Sequence[ScatteringProfile]) -> ScatteringSummary:
    if not profiles:
        raise DataError("no profiles to aggregate")
    widths = {len(p.zone_source_counts) for p in profiles}
    if len(widths) != 1:
        raise DataError("profiles have different zone counts")
    k = widths.pop()
    return ScatteringSummary(
        topics=len(profiles),
        mean_total_docs=fmean(p.total_docs for p in profiles),
        mean_total_sources=fmean(p.total_sources for p in profiles),
        mean_zone_source_counts=tuple(fmean(p.zone_source_counts[i] for p in profiles) for i in range(k)),
        mean_zone_doc_counts=tuple(fmean(p.zone_doc_counts[i] for p in profiles) for i in range(k)),
    )

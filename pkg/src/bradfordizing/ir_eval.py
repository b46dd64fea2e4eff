"""Per-zone precision against relevance judgments, and cross-topic aggregates."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from statistics import fmean
from typing import Sequence

from .bradfordizer import ZonePartition
from .corpus import Qrels
from .errors import DataError, UndefinedImprovementError


class DoctypeClass(str, enum.Enum):
    ARTICLES = "articles"
    MONOGRAPHS = "monographs"


class UnjudgedPolicy(str, enum.Enum):
    NONRELEVANT = "nonrelevant"
    EXCLUDE = "exclude"


@dataclass(frozen=True)
class ZoneCounts:
    relevant: int
    total: int

    @property
    def precision(self) -> float:
        return self.relevant / self.total if self.total else 0.0


@dataclass(frozen=True)
class ZoneEvaluation:
    topic_number: int
    doctype_class: DoctypeClass
    precision_core: float
    precision_z2: float
    precision_z3: float
    precision_baseline: float
    counts: dict[str, ZoneCounts]
    degenerate: tuple[str, ...] = ()

    def precision(self, name: str) -> float:
        return getattr(self, f"precision_{name}")


@dataclass(frozen=True)
class AggregateEvaluation:
    doctype_class: DoctypeClass
    per_topic: tuple[ZoneEvaluation, ...]
    macro_precisions: dict[str, float]
    improvement_core_vs_baseline_pct: float | None
    improvement_core_vs_z3_pct: float | None
    mean_topic_improvement_core_vs_baseline_pct: float | None
    mean_topic_improvement_core_vs_z3_pct: float | None
    excluded_topics: dict[str, tuple[int, ...]] = field(default_factory=dict)
    paired_vectors: dict[str, tuple[tuple[float, float], ...]] = field(default_factory=dict)


ZONES = ("core", "z2", "z3")


def evaluate_topic(partition: ZonePartition, qrels: Qrels, topic: int,
                   doctype_class: DoctypeClass | str = DoctypeClass.ARTICLES,
                   unjudged: UnjudgedPolicy | str = UnjudgedPolicy.NONRELEVANT) -> ZoneEvaluation:
    """Precision of each of the first three zones and of their union.

    Partitions with more than three zones fold the extra zones into the
    baseline only.
    """
    policy = UnjudgedPolicy(unjudged)
    if len(partition.zones) < 3:
        raise DataError("evaluation needs a partition with at least three zones")
    counts: dict[str, ZoneCounts] = {}
    base_rel = base_total = 0
    for i, zone in enumerate(partition.zones):
        rel = total = 0
        for doc_id in zone.doc_ids:
            if policy is UnjudgedPolicy.EXCLUDE and not qrels.is_judged(topic, doc_id):
                continue
            total += 1
            rel += qrels.is_relevant(topic, doc_id)
        base_rel += rel
        base_total += total
        if i < 3:
            counts[ZONES[i]] = ZoneCounts(rel, total)
    counts["baseline"] = ZoneCounts(base_rel, base_total)
    degenerate = tuple(name for name in (*ZONES, "baseline") if counts[name].total == 0)
    return ZoneEvaluation(
        topic_number=topic,
        doctype_class=DoctypeClass(doctype_class),
        precision_core=counts["core"].precision,
        precision_z2=counts["z2"].precision,
        precision_z3=counts["z3"].precision,
        precision_baseline=counts["baseline"].precision,
        counts=counts,
        degenerate=degenerate,
    )


def improvement_pct(p_new: float, p_ref: float) -> float:
    if p_ref <= 0:
        raise UndefinedImprovementError(f"reference precision {p_ref} is not positive")
    return (p_new - p_ref) / p_ref * 100.0


def _safe_improvement(p_new: float, p_ref: float) -> float | None:
    try:
        return improvement_pct(p_new, p_ref)
    except UndefinedImprovementError:
        return None


def aggregate(evals: Sequence[ZoneEvaluation]) -> AggregateEvaluation:
    if not evals:
        raise DataError("nothing to aggregate")
    classes = {e.doctype_class for e in evals}
    if len(classes) != 1:
        raise DataError("cannot pool article and monograph evaluations")
    evals = tuple(sorted(evals, key=lambda e: e.topic_number))
    macro = {name: fmean(e.precision(name) for e in evals) for name in ("baseline", *ZONES)}

    per_topic: dict[str, list[float]] = {"baseline": [], "z3": []}
    excluded: dict[str, list[int]] = {"baseline": [], "z3": []}
    for e in evals:
        for ref in ("baseline", "z3"):
            value = _safe_improvement(e.precision_core, e.precision(ref))
            if value is None:
                excluded[ref].append(e.topic_number)
            else:
                per_topic[ref].append(value)

    return AggregateEvaluation(
        doctype_class=classes.pop(),
        per_topic=evals,
        macro_precisions=macro,
        improvement_core_vs_baseline_pct=_safe_improvement(macro["core"], macro["baseline"]),
        improvement_core_vs_z3_pct=_safe_improvement(macro["core"], macro["z3"]),
        mean_topic_improvement_core_vs_baseline_pct=fmean(per_topic["baseline"]) if per_topic["baseline"] else None,
        mean_topic_improvement_core_vs_z3_pct=fmean(per_topic["z3"]) if per_topic["z3"] else None,
        excluded_topics={k: tuple(v) for k, v in excluded.items()},
        paired_vectors={
            "core_vs_baseline": tuple((e.precision_core, e.precision_baseline) for e in evals),
            "core_vs_z3": tuple((e.precision_core, e.precision_z3) for e in evals),
        },
    )

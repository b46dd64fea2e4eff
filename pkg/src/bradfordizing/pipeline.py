"""Per-topic orchestration shared by the CLI and the acceptance suite."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence, TypeVar

from .bradfordizer import BradfordizedRanking, ZoneMode, ZonePartition, bradfordize, partition_zones
from .corpus import Document, DocType, KeyMode, Qrels, source_key
from .errors import DataError, StatTestError
from .ir_eval import AggregateEvaluation, DoctypeClass, UnjudgedPolicy, ZoneEvaluation, aggregate, evaluate_topic
from .scattering import ScatteringProfile, scattering_profile
from .stat_tests import paired_t_test, wilcoxon_signed_rank

# Articles are keyed by journal, monographs by publisher; never pooled.
CLASS_RULES: dict[DoctypeClass, tuple[DocType, KeyMode]] = {
    DoctypeClass.ARTICLES: (DocType.JOURNAL_ARTICLE, KeyMode.JOURNAL),
    DoctypeClass.MONOGRAPHS: (DocType.MONOGRAPH, KeyMode.PUBLISHER),
}


def classes_for(key_mode: KeyMode | str) -> list[DoctypeClass]:
    mode = KeyMode(key_mode)
    if mode is KeyMode.JOURNAL:
        return [DoctypeClass.ARTICLES]
    if mode is KeyMode.PUBLISHER:
        return [DoctypeClass.MONOGRAPHS]
    return [DoctypeClass.ARTICLES, DoctypeClass.MONOGRAPHS]


def class_documents(docs: Iterable[Document], cls: DoctypeClass) -> list[Document]:
    doctype, _ = CLASS_RULES[cls]
    return [d for d in docs if d.doctype is doctype]


@dataclass(frozen=True)
class TopicRun:
    topic: int
    doctype_class: DoctypeClass
    ranking: BradfordizedRanking
    partition: ZonePartition | None
    profile: ScatteringProfile | None


def run_topic(topic: int, docs: Sequence[Document], cls: DoctypeClass,
              zone_mode: ZoneMode | str = ZoneMode.SNAP, num_zones: int = 3) -> TopicRun:
    """Bradfordize one topic's documents of one class and cut the zones.

    ``partition`` and ``profile`` are ``None`` when nothing could be ranked.
    """
    _, mode = CLASS_RULES[cls]
    ranking = bradfordize(class_documents(docs, cls), mode)
    if len(ranking) == 0:
        return TopicRun(topic, cls, ranking, None, None)
    partition = partition_zones(ranking, num_zones, zone_mode)
    return TopicRun(topic, cls, ranking, partition, scattering_profile(ranking, partition))


T = TypeVar("T")
R = TypeVar("R")


def parallel_map(fn: Callable[[T], R], items: Sequence[T], workers: int = 1) -> list[R]:
    """Map in input order; ``workers > 1`` uses a process pool."""
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _run_job(job):
    return run_topic(*job)


def run_all(docs_by_topic: Mapping[int, Sequence[Document]], classes: Sequence[DoctypeClass],
            zone_mode: ZoneMode | str = ZoneMode.SNAP, num_zones: int = 3, workers: int = 1) -> list[TopicRun]:
    jobs = [(t, docs_by_topic[t], cls, ZoneMode(zone_mode), num_zones)
            for cls in classes for t in sorted(docs_by_topic)]
    return parallel_map(_run_job, jobs, workers)


def evaluate_runs(runs: Iterable[TopicRun], qrels: Qrels,
                  unjudged: UnjudgedPolicy | str = UnjudgedPolicy.NONRELEVANT
                  ) -> dict[DoctypeClass, AggregateEvaluation]:
    """Aggregate evaluation per doctype class, over topics that have a ranking."""
    per_class: dict[DoctypeClass, list[ZoneEvaluation]] = {}
    for run in runs:
        if run.partition is None:
            continue
        per_class.setdefault(run.doctype_class, []).append(
            evaluate_topic(run.partition, qrels, run.topic, run.doctype_class, unjudged))
    return {cls: aggregate(evals) for cls, evals in per_class.items()}


def significance(agg: AggregateEvaluation, alpha: float = 0.05) -> dict[str, dict]:
    """Wilcoxon and paired-t for core vs baseline and core vs z3.

    A test that cannot run (too few topics, all-zero differences) is
    reported as ``{"error": ...}`` instead of raising.
    """
    out: dict[str, dict] = {"wilcoxon": {}, "paired_t": {}}
    for comparison, pairs in agg.paired_vectors.items():
        for name, test in (("wilcoxon", wilcoxon_signed_rank), ("paired_t", paired_t_test)):
            try:
                out[name][comparison] = test(pairs, alpha).to_dict()
            except StatTestError as exc:
                out[name][comparison] = {"error": type(exc).__name__, "message": str(exc)}
    return out


def corpus_accounting(docs_by_topic: Mapping[int, Sequence[Document]]) -> dict:
    """Total vs bradfordized document counts, overall and per topic.

    A document is bradfordized when it is an article or monograph with a
    resolvable source key; everything else is counted as skipped.
    """
    def count(docs):
        row = {"documents_total": 0, "documents_bradfordized": 0, "skipped": 0,
               "by_doctype": {t.value: 0 for t in DocType},
               "bradfordized_by_doctype": {t.value: 0 for t in DocType if t is not DocType.OTHER}}
        for d in docs:
            row["documents_total"] += 1
            row["by_doctype"][d.doctype.value] += 1
            if d.doctype is not DocType.OTHER and source_key(d, KeyMode.AUTO) is not None:
                row["documents_bradfordized"] += 1
                row["bradfordized_by_doctype"][d.doctype.value] += 1
            else:
                row["skipped"] += 1
        return row

    per_topic = {str(t): count(docs_by_topic[t]) for t in sorted(docs_by_topic)}
    total = count(d for t in docs_by_topic for d in docs_by_topic[t])
    total["topics"] = len(per_topic)
    return {"total": total, "per_topic": per_topic}


def require_topics(qrels: Qrels, topics: Iterable[int]) -> None:
    topics = set(topics)
    if not topics & set(qrels.topics()):
        raise DataError("relevance judgments cover none of the selected topics")

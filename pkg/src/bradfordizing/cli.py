"""Command-line front end: merge, bradfordize, zones, analyze, eval, stats.

Exit codes: 0 success, 1 usage or configuration error, 2 data error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .bradfordizer import ZoneMode, core_documents, core_sources
from .corpus import Document, KeyMode, Qrels, Topic, normalize_key, parse_documents, parse_qrels, parse_topics, write_documents
from .errors import BradfordError, DataError, ParseError
from .federation import MergeReport, merge_result_sets
from .ir_eval import AggregateEvaluation, DoctypeClass, UnjudgedPolicy
from .pipeline import (
    TopicRun,
    classes_for,
    corpus_accounting,
    evaluate_runs,
    require_topics,
    run_all,
    significance,
)
from .scattering import aggregate_profiles, profile_csv
from .stat_tests import paired_t_test, wilcoxon_signed_rank

log = logging.getLogger("bradfordizing")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class ConfigError(BradfordError):
    pass


@dataclass
class PipelineConfig:
    document_files: list[tuple[str, Path]] = field(default_factory=list)
    topic_file: Path | None = None
    qrels_file: Path | None = None
    key_mode: KeyMode = KeyMode.AUTO
    zone_mode: ZoneMode = ZoneMode.SNAP
    num_zones: int = 3
    unjudged_policy: UnjudgedPolicy = UnjudgedPolicy.NONRELEVANT
    alpha: float = 0.05
    output_dir: Path = Path("out")
    workers: int = 1
    topic: int | None = None
    pairs_file: Path | None = None

    def validate(self, need_docs: bool = True) -> None:
        if self.num_zones < 2:
            raise ConfigError(f"--zones must be >= 2, got {self.num_zones}")
        if not 0 < self.alpha < 1:
            raise ConfigError(f"--alpha must lie in (0, 1), got {self.alpha}")
        if self.workers < 1:
            raise ConfigError("--workers must be >= 1")
        if need_docs and not self.document_files:
            raise ConfigError("at least one --docs db=path is required")
        for _, path in self.document_files:
            if not path.exists():
                raise ConfigError(f"document path not found: {path}")
        for path in (self.topic_file, self.qrels_file, self.pairs_file):
            if path is not None and not path.is_file():
                raise ConfigError(f"file not found: {path}")


# --------------------------------------------------------------------------
# configuration
# --------------------------------------------------------------------------

_KEYS = {"docs", "topics", "qrels", "key-mode", "zone-mode", "zones", "unjudged", "alpha",
         "out", "workers", "topic", "pairs"}


def read_config_file(path: Path) -> dict[str, list[str]]:
    """Parse ``key = value`` lines; ``docs`` may repeat, ``#`` starts a comment."""
    values: dict[str, list[str]] = {}
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{line_no}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lstrip("-").replace("_", "-")
        if key not in _KEYS:
            raise ConfigError(f"{path}:{line_no}: unknown key {key!r}")
        values.setdefault(key, []).append(value)
    return values


def _parse_docs_spec(spec: str) -> tuple[str, Path]:
    db, sep, path = spec.partition("=")
    if not sep or not db.strip() or not path.strip():
        raise ConfigError(f"--docs expects db=path, got {spec!r}")
    return db.strip(), Path(path.strip())


def build_config(args: argparse.Namespace) -> PipelineConfig:
    file_values = read_config_file(Path(args.config)) if args.config else {}

    def pick(flag_value, key, convert, default):
        if flag_value is not None:
            raw = flag_value
        elif key in file_values:
            raw = file_values[key][-1]
        else:
            return default
        try:
            return convert(raw)
        except ValueError as exc:
            raise ConfigError(f"invalid value for {key}: {raw!r} ({exc})") from None

    docs = args.docs if args.docs else file_values.get("docs", [])
    opt_path = lambda v: Path(v) if v else None  # noqa: E731
    return PipelineConfig(
        document_files=[_parse_docs_spec(s) for s in docs],
        topic_file=pick(args.topics, "topics", opt_path, None),
        qrels_file=pick(args.qrels, "qrels", opt_path, None),
        key_mode=pick(args.key_mode, "key-mode", KeyMode, KeyMode.AUTO),
        zone_mode=pick(args.zone_mode, "zone-mode", ZoneMode, ZoneMode.SNAP),
        num_zones=pick(args.zones, "zones", int, 3),
        unjudged_policy=pick(args.unjudged, "unjudged", UnjudgedPolicy, UnjudgedPolicy.NONRELEVANT),
        alpha=pick(args.alpha, "alpha", float, 0.05),
        output_dir=pick(args.out, "out", Path, Path("out")),
        workers=pick(args.workers, "workers", int, 1),
        topic=pick(args.topic, "topic", int, None),
        pairs_file=pick(getattr(args, "pairs", None), "pairs", opt_path, None),
    )


# --------------------------------------------------------------------------
# loading
# --------------------------------------------------------------------------

def _load_file(path: Path, database_id: str) -> list[Document]:
    with path.open("rb") as fh:
        return parse_documents(fh, database_id=database_id, source=str(path))


def load_topics(config: PipelineConfig) -> list[Topic] | None:
    if config.topic_file is None:
        return None
    with config.topic_file.open("rb") as fh:
        return parse_topics(fh, source=str(config.topic_file))


def load_qrels(config: PipelineConfig) -> Qrels | None:
    if config.qrels_file is None:
        return None
    with config.qrels_file.open("rb") as fh:
        return parse_qrels(fh, source=str(config.qrels_file))


@dataclass
class Corpus:
    """Merged documents per topic, and how they were merged.

    ``layout`` is ``per_topic`` when every ``--docs`` path is a directory of
    ``<topic>.xml`` result lists, ``pool`` when every path is a single file
    (topic membership then comes from the relevance judgments).
    """

    layout: str
    docs_by_topic: dict[int, list[Document]]
    reports: dict[str, MergeReport]
    merged_pool: list[Document] | None = None


def _topic_files(directory: Path) -> dict[int, Path]:
    out = {}
    for p in directory.glob("*.xml"):
        if p.stem.isdigit():
            out[int(p.stem)] = p
    return out


def load_corpus(config: PipelineConfig, qrels: Qrels | None, topics: list[Topic] | None) -> Corpus:
    kinds = {path.is_dir() for _, path in config.document_files}
    if len(kinds) != 1:
        raise ConfigError("--docs paths must be all directories (per-topic lists) or all files")
    wanted = None if topics is None else {t.number for t in topics}
    if config.topic is not None:
        wanted = {config.topic} if wanted is None or config.topic in wanted else set()

    if kinds.pop():
        files = [(db, _topic_files(path)) for db, path in config.document_files]
        numbers = set().union(*(f.keys() for _, f in files))
        if wanted is not None:
            missing = sorted(wanted - numbers)
            for t in missing:
                log.warning("topic %d: no result lists found", t)
            numbers = wanted
        docs_by_topic, reports = {}, {}
        for t in sorted(numbers):
            lists = [(db, _load_file(f[t], db)) for db, f in files if t in f]
            merged, report = merge_result_sets(lists)
            docs_by_topic[t] = merged
            reports[str(t)] = report
        return Corpus("per_topic", docs_by_topic, reports)

    lists = [(db, _load_file(path, db)) for db, path in config.document_files]
    merged, report = merge_result_sets(lists)
    docs_by_topic = {}
    if qrels is not None:
        numbers = set(qrels.topics()) if wanted is None else wanted
        by_id = {d.doc_id: d for d in merged}
        for t in sorted(numbers):
            docs_by_topic[t] = [by_id[i] for i in qrels.judged_docs(t) if i in by_id]
    elif wanted is not None:
        raise ConfigError("single-file --docs need --qrels to assign documents to topics")
    return Corpus("pool", docs_by_topic, {"pool": report}, merged)


# --------------------------------------------------------------------------
# output helpers
# --------------------------------------------------------------------------

def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _write_json(path: Path, obj) -> None:
    _write(path, json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n")


def _p3(x: float) -> float:
    return round(x, 3)


def _pct(x: float | None) -> float | None:
    return None if x is None else round(x, 2)


def _csv(rows: list[list], header: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _source_labels(docs: list[Document]) -> dict[str, str]:
    labels: dict[str, str] = {}
    for d in docs:
        if d.source_field:
            for key in filter(None, (d.issn, d.source_field)):
                norm = normalize_key(key)
                if norm not in labels or d.source_field < labels[norm]:
                    labels[norm] = d.source_field
    return labels


def _runs(config: PipelineConfig, corpus: Corpus) -> list[TopicRun]:
    runs = run_all(corpus.docs_by_topic, classes_for(config.key_mode), config.zone_mode,
                   config.num_zones, config.workers)
    for run in runs:
        if run.partition is None:
            log.warning("topic %d (%s): no bradfordizable documents", run.topic, run.doctype_class.value)
    return runs


def _prepare(config: PipelineConfig, need_qrels: bool = False):
    config.validate()
    qrels = load_qrels(config)
    if need_qrels and qrels is None:
        raise ConfigError("--qrels is required for this command")
    topics = load_topics(config)
    corpus = load_corpus(config, qrels, topics)
    return qrels, corpus


def _settings(config: PipelineConfig) -> dict:
    return {
        "key_mode": config.key_mode.value,
        "zone_mode": config.zone_mode.value,
        "num_zones": config.num_zones,
        "unjudged": config.unjudged_policy.value,
        "alpha": config.alpha,
    }


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_merge(config: PipelineConfig) -> int:
    config.validate()
    out = config.output_dir
    topics = load_topics(config)
    qrels = load_qrels(config)
    corpus = load_corpus(config, qrels, topics)
    if corpus.layout == "pool":
        _write(out / "merged.xml", write_documents(corpus.merged_pool).decode("utf-8"))
        report = corpus.reports["pool"].to_dict()
    else:
        for t, docs in corpus.docs_by_topic.items():
            _write(out / "merged" / f"{t}.xml", write_documents(docs).decode("utf-8"))
        reports = {t: r.to_dict() for t, r in corpus.reports.items()}
        report = {
            "per_topic": reports,
            "duplicates_removed": sum(r["duplicates_removed"] for r in reports.values()),
            "merged_count": sum(r["merged_count"] for r in reports.values()),
        }
    report["layout"] = corpus.layout
    _write_json(out / "merge_report.json", report)
    log.info("merged corpus written to %s", out)
    return EXIT_OK


def cmd_bradfordize(config: PipelineConfig) -> int:
    _, corpus = _prepare(config)
    out = config.output_dir
    for run in _runs(config, corpus):
        cls, t = run.doctype_class.value, run.topic
        labels = _source_labels(corpus.docs_by_topic[t])
        sources = [
            {"source_rank": rank, "source_key": key.key, "label": labels.get(key.key, key.key),
             "productivity": size}
            for rank, (key, size) in enumerate(run.ranking.blocks(), start=1)
        ]
        _write_json(out / "rankings" / cls / f"{t}.json", {
            "topic": t, "class": cls, "settings": _settings(config),
            "ranking": run.ranking.to_dict(), "sources": sources,
        })
        core_ids = core_documents(run.partition) if run.partition else []
        _write(out / "core" / cls / f"{t}.txt", "".join(f"{i}\n" for i in core_ids))
        heading = "Journal" if run.doctype_class is DoctypeClass.ARTICLES else "Publisher"
        rows = [f"{heading}\tNo. of papers"]
        if run.partition:
            rows += [f"{labels.get(k.key, k.key)}\t{n:,}" for k, n in core_sources(run.ranking, run.partition)]
        _write(out / "core_sources" / cls / f"{t}.tsv", "\n".join(rows) + "\n")
    return EXIT_OK


def cmd_zones(config: PipelineConfig) -> int:
    _, corpus = _prepare(config)
    for run in _runs(config, corpus):
        body = {"topic": run.topic, "class": run.doctype_class.value, "settings": _settings(config),
                "skipped": list(run.ranking.skipped)}
        body.update(run.partition.to_dict() if run.partition else {"zones": [], "empty_zones": []})
        _write_json(config.output_dir / "zones" / run.doctype_class.value / f"{run.topic}.json", body)
    return EXIT_OK


def cmd_analyze(config: PipelineConfig) -> int:
    _, corpus = _prepare(config)
    out = config.output_dir / "scattering"
    summary: dict = {"settings": _settings(config)}
    by_class: dict[str, list] = {}
    for run in _runs(config, corpus):
        if run.profile is None:
            continue
        cls = run.doctype_class.value
        _write(out / cls / f"{run.topic}.csv", profile_csv(run.profile))
        by_class.setdefault(cls, []).append(run)
    for cls, runs in by_class.items():
        agg = aggregate_profiles([r.profile for r in runs])
        summary[cls] = {
            "means": agg.to_dict(),
            "per_topic": {str(r.topic): r.profile.to_dict() for r in runs},
        }
    _write_json(out / "summary.json", summary)
    return EXIT_OK


def _aggregate_json(agg: AggregateEvaluation, alpha: float) -> dict:
    macro = agg.macro_precisions
    body = {
        "topics": len(agg.per_topic),
        "baseline": _p3(macro["baseline"]),
        "core": _p3(macro["core"]),
        "z2": _p3(macro["z2"]),
        "z3": _p3(macro["z3"]),
        "improvement_core_vs_baseline_pct": _pct(agg.improvement_core_vs_baseline_pct),
        "improvement_core_vs_z3_pct": _pct(agg.improvement_core_vs_z3_pct),
        "mean_topic_improvement_core_vs_baseline_pct": _pct(agg.mean_topic_improvement_core_vs_baseline_pct),
        "mean_topic_improvement_core_vs_z3_pct": _pct(agg.mean_topic_improvement_core_vs_z3_pct),
        "improvement_excluded_topics": {k: list(v) for k, v in agg.excluded_topics.items()},
        "per_topic": [
            {
                "topic": e.topic_number,
                "baseline": _p3(e.precision_baseline),
                "core": _p3(e.precision_core),
                "z2": _p3(e.precision_z2),
                "z3": _p3(e.precision_z3),
                "counts": {k: [c.relevant, c.total] for k, c in e.counts.items()},
                "degenerate": list(e.degenerate),
            }
            for e in agg.per_topic
        ],
    }
    body.update(significance(agg, alpha))
    return body


def _evaluate(config: PipelineConfig):
    qrels, corpus = _prepare(config, need_qrels=True)
    require_topics(qrels, corpus.docs_by_topic)
    runs = _runs(config, corpus)
    return corpus, evaluate_runs(runs, qrels, config.unjudged_policy)


def cmd_eval(config: PipelineConfig) -> int:
    corpus, aggs = _evaluate(config)
    out = config.output_dir / "eval"
    report = {"settings": _settings(config)}
    rows = []
    for cls in sorted(aggs, key=lambda c: c.value):
        agg = aggs[cls]
        report[cls.value] = _aggregate_json(agg, config.alpha)
        for e in agg.per_topic:
            rows.append([cls.value, e.topic_number, f"{e.precision_core:.3f}", f"{e.precision_z2:.3f}",
                         f"{e.precision_z3:.3f}", f"{e.precision_baseline:.3f}"])
    _write_json(out / "report.json", report)
    _write(out / "per_topic.csv", _csv(rows, ["class", "topic", "core", "z2", "z3", "baseline"]))
    _write_json(out / "corpus_accounting.json", corpus_accounting(corpus.docs_by_topic))
    return EXIT_OK


def _read_pairs(path: Path) -> list[tuple[float, float]]:
    pairs = []
    with path.open(encoding="utf-8", newline="") as fh:
        for line_no, row in enumerate(csv.reader(fh), start=1):
            if not row or not "".join(row).strip():
                continue
            try:
                a, b = (float(x) for x in row[:2])
            except ValueError:
                if line_no == 1:
                    continue  # header
                raise ParseError(f"expected two numeric columns, got {row!r}", line=line_no,
                                 source=str(path)) from None
            pairs.append((a, b))
    return pairs


def cmd_stats(config: PipelineConfig) -> int:
    if config.pairs_file is not None:
        config.validate(need_docs=False)
        pairs = _read_pairs(config.pairs_file)
        result = {}
        for name, test in (("wilcoxon", wilcoxon_signed_rank), ("paired_t", paired_t_test)):
            try:
                result[name] = test(pairs, config.alpha).to_dict()
            except DataError as exc:
                result[name] = {"error": type(exc).__name__, "message": str(exc)}
        _write_json(config.output_dir / "stats.json", {"alpha": config.alpha, "pairs": len(pairs), **result})
        return EXIT_OK
    _, aggs = _evaluate(config)
    body = {"settings": _settings(config)}
    for cls, agg in aggs.items():
        body[cls.value] = significance(agg, config.alpha)
    _write_json(config.output_dir / "stats.json", body)
    return EXIT_OK


COMMANDS = {
    "merge": cmd_merge,
    "bradfordize": cmd_bradfordize,
    "zones": cmd_zones,
    "analyze": cmd_analyze,
    "eval": cmd_eval,
    "stats": cmd_stats,
}


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="key=value file mirroring the flags")
    common.add_argument("--docs", action="append", metavar="DB=PATH",
                        help="result list(s) of one database; a directory holds <topic>.xml files")
    common.add_argument("--topics", metavar="PATH")
    common.add_argument("--qrels", metavar="PATH")
    common.add_argument("--key-mode", choices=[m.value for m in KeyMode])
    common.add_argument("--zone-mode", choices=[m.value for m in ZoneMode])
    common.add_argument("--zones", type=int, metavar="N")
    common.add_argument("--unjudged", choices=[p.value for p in UnjudgedPolicy])
    common.add_argument("--alpha", type=float, metavar="F")
    common.add_argument("--out", metavar="DIR")
    common.add_argument("--workers", type=int, metavar="N")
    common.add_argument("--topic", type=int, metavar="N", help="restrict to one topic")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="bradfordize", description="Bradfordizing re-ranking and zone evaluation.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "merge": "combine per-database result lists",
        "bradfordize": "re-rank by source productivity and extract the core",
        "zones": "write zone partitions",
        "analyze": "scattering curves and zone statistics",
        "eval": "zone precision, improvements and significance tests",
        "stats": "significance tests only (from the pipeline or a --pairs CSV)",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, parents=[common], help=text)
        if name == "stats":
            p.add_argument("--pairs", metavar="CSV", help="two numeric columns a,b")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        config = build_config(args)
        return COMMANDS[args.command](config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BradfordError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())

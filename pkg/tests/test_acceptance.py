"""Acceptance criteria 1-9, each at its stated tolerance and time budget.

Every test prints one ``criterion N: PASS|FAIL`` line to the terminal.
Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import math
import random
import time

import numpy as np
import pytest

from bradfordizing.bradfordizer import bradfordize, partition_zones, snap_cuts, strict_sizes
from bradfordizing.cli import main
from bradfordizing.corpus import DocType, KeyMode, parse_documents, parse_topics, source_key
from bradfordizing.ir_eval import DoctypeClass, improvement_pct
from bradfordizing.pipeline import corpus_accounting, evaluate_runs, run_all, significance
from bradfordizing.stat_tests import paired_t_test, student_t_two_sided, wilcoxon_signed_rank
from bradfordizing.synthetic import generate_collection
from oracles import bradfordize_oracle, snap_oracle, student_t_two_sided_quad, wilcoxon_enumeration
from test_bradfordizer import corpus_from_blocks, random_corpus


@pytest.fixture
def report(capsys, request):
    """Call with (criterion, ok, detail) to print the verdict line."""
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} ({detail})")
        assert ok, detail
    return emit


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def test_criterion_1_improvement_arithmetic(report):
    published = {
        "articles core vs baseline": (0.310, 0.239, 29.52),
        "articles core vs z3": (0.310, 0.174, 78.03),
        "monographs core vs baseline": (0.205, 0.188, 8.98),
        "monographs core vs z3": (0.205, 0.188, 9.09),
    }
    expected = [29.71, 78.16, 9.04, 9.04]
    with Timer() as t:
        got = [improvement_pct(new, ref) for new, ref, _ in published.values()]
    worst = max(abs(g - pub) for g, (_, _, pub) in zip(got, published.values()))
    ok = [round(g, 2) for g in got] == expected and worst <= 0.5 and t.elapsed < 1
    report(1, ok, f"got {[round(g, 2) for g in got]}, max gap to published {worst:.2f} pp")


def _rows(ranking):
    return [(e.doc_id, e.source_key, e.source_rank, e.source_productivity) for e in ranking.entries]


def test_criterion_2_bradfordize_oracle(report):
    rng = random.Random(20080828)
    mismatches = 0
    with Timer() as t:
        for _ in range(200):
            docs = random_corpus(rng, max_docs=1000, max_sources=100)
            ranking = bradfordize(docs, KeyMode.JOURNAL)
            rows, skipped = bradfordize_oracle(docs, lambda d: source_key(d, KeyMode.JOURNAL))
            if _rows(ranking) != rows or list(ranking.skipped) != skipped:
                mismatches += 1
            for _ in range(10):
                shuffled = docs[:]
                rng.shuffle(shuffled)
                if bradfordize(shuffled, KeyMode.JOURNAL) != ranking:
                    mismatches += 1
    report(2, mismatches == 0 and t.elapsed < 10, f"{mismatches} mismatches, {t.elapsed:.1f}s")


def test_criterion_3_partition_contracts(report):
    rng = random.Random(3)
    strict_bad = snap_bad = 0
    with Timer() as t:
        for _ in range(1000):
            n, k = rng.randint(1, 5000), rng.randint(2, 10)
            sizes = strict_sizes(n, k)
            if len(sizes) != k or sum(sizes) != n or max(sizes) - min(sizes) > 1:
                strict_bad += 1
        # strict mode through the full partition path too
        for _ in range(100):
            blocks = sorted((rng.randint(1, 20) for _ in range(rng.randint(1, 40))), reverse=True)
            k = rng.randint(2, 6)
            counts = [z.doc_count for z in partition_zones(
                bradfordize(corpus_from_blocks(blocks), KeyMode.JOURNAL), k, "strict").zones]
            if sum(counts) != sum(blocks) or max(counts) - min(counts) > 1:
                strict_bad += 1
        tested = 0
        while tested < 200:
            m = rng.randint(2, 14)
            blocks = sorted((rng.randint(1, 30) for _ in range(m)), reverse=True)
            k = rng.randint(2, min(5, m))
            tested += 1
            if snap_cuts(blocks, k) != snap_oracle(blocks, k):
                snap_bad += 1
    ok = strict_bad == 0 and snap_bad == 0 and t.elapsed < 10
    report(3, ok, f"strict violations {strict_bad}, snap mismatches {snap_bad}, {t.elapsed:.1f}s")


def _article_eval(seed):
    per_topic, qrels, _ = generate_collection(seed, num_topics=25)
    runs = run_all(per_topic, [DoctypeClass.ARTICLES])
    return evaluate_runs(runs, qrels)[DoctypeClass.ARTICLES]


def test_criterion_4_zone_relevance_ordering(report):
    ordered = z3_beats_baseline = 0
    with Timer() as t:
        for seed in range(100):
            agg = _article_eval(seed)
            m = agg.macro_precisions
            ordered += m["core"] > m["z2"] > m["z3"]
            z3_beats_baseline += agg.improvement_core_vs_z3_pct > agg.improvement_core_vs_baseline_pct
    ok = ordered >= 95 and z3_beats_baseline >= 95 and t.elapsed < 30
    report(4, ok, f"core>z2>z3 in {ordered}/100, z3 gain > baseline gain in {z3_beats_baseline}/100, "
                  f"{t.elapsed:.1f}s")


def test_criterion_5_wilcoxon_exactness(report):
    rng = random.Random(5)
    worst = 0.0
    with Timer() as t:
        done = 0
        while done < 500:
            n = rng.randint(1, 12)
            diffs = [rng.choice([-4, -3, -2, -1.5, -1, 0, 1, 1.5, 2, 3, 4]) * rng.choice([1, 0.1])
                     for _ in range(n)]
            if not any(diffs):
                continue
            _, p_enum = wilcoxon_enumeration(diffs)
            p = wilcoxon_signed_rank([(d, 0.0) for d in diffs], method="exact").p_value
            worst = max(worst, abs(p - p_enum))
            done += 1
        nrng = np.random.default_rng(5)
        approx_gap = 0.0
        for _ in range(200):
            d = nrng.permutation(20) + 1.0
            d *= nrng.choice([-1.0, 1.0], 20)
            pairs = [(x, 0.0) for x in d]
            approx_gap = max(approx_gap, abs(wilcoxon_signed_rank(pairs, method="exact").p_value
                                             - wilcoxon_signed_rank(pairs, method="normal").p_value))
    ok = worst <= 1e-12 and approx_gap <= 0.01 and t.elapsed < 20
    report(5, ok, f"max |dp| vs enumeration {worst:.1e}, normal vs exact at n=20 {approx_gap:.4f}, "
                  f"{t.elapsed:.1f}s")


def test_criterion_6_t_test_accuracy(report):
    grid = [i / 2 for i in range(0, 21)]
    worst = 0.0
    antisym = True
    with Timer() as t:
        for df in range(1, 51):
            for tv in grid:
                p = student_t_two_sided(tv, df)
                worst = max(worst, abs(p - student_t_two_sided_quad(tv, df)))
                antisym &= student_t_two_sided(-tv, df) == p
        p0 = all(student_t_two_sided(0.0, df) == 1.0 for df in range(1, 51))
        pairs = [(0.31, 0.24), (0.28, 0.3), (0.4, 0.19), (0.22, 0.2), (0.35, 0.33)]
        a = paired_t_test(pairs)
        b = paired_t_test([(y, x) for x, y in pairs])
        antisym &= a.statistic == -b.statistic and a.p_value == b.p_value
    ok = worst <= 1e-9 and antisym and p0 and t.elapsed < 10
    report(6, ok, f"max |dp| vs quadrature {worst:.1e}, antisymmetry {antisym}, p(0)=1 {p0}, {t.elapsed:.1f}s")


def test_criterion_7_parsers_and_accounting(report, fixtures, topic_bytes, record_bytes):
    with Timer() as t:
        (topic,) = parse_topics(topic_bytes)
        (doc,) = parse_documents(record_bytes)
        fields_ok = (topic.number, topic.title) == (163, "Risk behavior") and \
            (doc.doc_id, doc.issn, doc.year) == ("iz-solis-90128016", "0172-6404", 1985)
        files = sorted((fixtures / "corpus").glob("*/*.xml"))
        accounting_ok = bool(files)
        for path in files:
            docs = parse_documents(path.read_bytes())
            tot = corpus_accounting({0: docs})["total"]
            expected_skipped = sum(d.doctype is DocType.OTHER or source_key(d, KeyMode.AUTO) is None for d in docs)
            accounting_ok &= tot["documents_total"] == tot["documents_bradfordized"] + tot["skipped"] == len(docs)
            accounting_ok &= tot["skipped"] == expected_skipped
            accounting_ok &= sum(tot["by_doctype"].values()) == len(docs)
        single = corpus_accounting({163: [doc]})["total"]
        accounting_ok &= (single["documents_total"], single["documents_bradfordized"]) == (1, 1)
    ok = fields_ok and accounting_ok and t.elapsed < 1
    report(7, ok, f"fields {fields_ok}, accounting on {len(files) + 1} fixtures {accounting_ok}")


def test_criterion_8_monograph_mode(report):
    conforming = significant = 0
    with Timer() as t:
        for seed in range(100):
            art = _article_eval(seed).improvement_core_vs_baseline_pct
            per_topic, qrels, _ = generate_collection(seed, num_topics=25, doctype=DocType.MONOGRAPH)
            runs = run_all(per_topic, [DoctypeClass.MONOGRAPHS])
            mono = evaluate_runs(runs, qrels)[DoctypeClass.MONOGRAPHS]
            gain = mono.improvement_core_vs_baseline_pct
            conforming += gain is not None and 0 < gain < art
            sig = significance(mono)["wilcoxon"]["core_vs_baseline"]
            significant += bool(sig.get("significant"))
    ok = conforming >= 90 and t.elapsed < 30
    report(8, ok, f"0 < monograph gain < article gain in {conforming}/100 "
                  f"(monograph Wilcoxon significant in {significant}/100), {t.elapsed:.1f}s")


def _tree(root):
    return {p.relative_to(root).as_posix(): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}


def test_criterion_9_end_to_end_determinism(report, fixtures, tmp_path):
    c = fixtures / "corpus"
    args = ["--docs", f"SOLIS={c / 'SOLIS'}", "--docs", f"SOLIT={c / 'SOLIT'}",
            "--topics", str(c / "topics.xml"), "--qrels", str(c / "qrels.txt")]
    codes = []
    with Timer() as t:
        for run in ("a", "b"):
            for cmd in ("merge", "bradfordize", "zones", "analyze", "eval", "stats"):
                codes.append(main([cmd, *args, "--out", str(tmp_path / run)]))
        a, b = _tree(tmp_path / "a"), _tree(tmp_path / "b")
    ok = set(codes) == {0} and a == b and len(a) > 0 and t.elapsed < 10
    report(9, ok, f"{len(a)} files, identical {a == b}, exit codes {sorted(set(codes))}, {t.elapsed:.1f}s")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-v"]))

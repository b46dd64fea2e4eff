"""Regenerate the bundled CLI fixture corpus (deterministic).

Two databases, three topics, per-topic result lists. Mixed doctypes, a few
records without a usable source, cross-database duplicates and a share of
unjudged documents.
"""

from dataclasses import replace
from pathlib import Path

import numpy as np

from bradfordizing.corpus import DocType, Document, Qrels, Topic, write_documents, write_qrels, write_topics
from bradfordizing.synthetic import CorpusShape, generate_topic

HERE = Path(__file__).parent
DATABASES = ("SOLIS", "SOLIT")


def main():
    rng = np.random.default_rng(20080828)
    topics, judgments = [], {}
    per_db = {db: {} for db in DATABASES}
    small_articles = CorpusShape(num_sources=14, scale=14.0, exponent=1.0, shift=1.0)
    small_monographs = CorpusShape(num_sources=12, scale=9.0, exponent=0.8, shift=1.0)
    for number in (10, 11, 12):
        arts, qa = generate_topic(rng, number, DocType.JOURNAL_ARTICLE, shape=small_articles,
                                  databases=DATABASES, unjudged_fraction=0.1)
        monos, qm = generate_topic(rng, number, DocType.MONOGRAPH, shape=small_monographs,
                                   databases=DATABASES, unjudged_fraction=0.1)
        extra = [
            Document(f"fx-{number}-grey1", "Working paper", DocType.OTHER, "Institute report series",
                     database_id="SOLIS"),
            Document(f"fx-{number}-nosrc", "Article without source", DocType.JOURNAL_ARTICLE,
                     database_id="SOLIT"),
        ]
        judgments.update(qa)
        judgments.update(qm)
        docs = arts + monos + extra
        for db in DATABASES:
            per_db[db][number] = [d for d in docs if d.database_id == db]
        # The first two SOLIS records also appear in SOLIT.
        per_db["SOLIT"][number] += [replace(d, database_id="SOLIT") for d in per_db["SOLIS"][number][:2]]
        topics.append(Topic(number, f"Fixture topic {number}", f"Synthetic fixture topic {number}", ""))

    for db, by_topic in per_db.items():
        d = HERE / "corpus" / db
        d.mkdir(parents=True, exist_ok=True)
        for number, docs in by_topic.items():
            (d / f"{number}.xml").write_bytes(write_documents(docs))
    (HERE / "corpus" / "topics.xml").write_bytes(write_topics(topics))
    (HERE / "corpus" / "qrels.txt").write_bytes(write_qrels(Qrels(judgments)))


if __name__ == "__main__":
    main()

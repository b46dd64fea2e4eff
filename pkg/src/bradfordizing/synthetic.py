"""Seeded generator of Bradford-shaped test corpora with relevance judgments.

Source productivities follow a shifted power law with log-normal jitter;
a document's chance of being relevant grows with the log of its source's
productivity. Default shapes approximate a typical domain-specific topic:
about 142 articles over 61 journals, or 211 monographs over 90 publishers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .corpus import Document, DocType, Qrels, Topic


@dataclass(frozen=True)
class CorpusShape:
    num_sources: int
    scale: float
    exponent: float
    shift: float
    jitter: float = 0.3


ARTICLE_SHAPE = CorpusShape(num_sources=61, scale=40.0, exponent=1.0, shift=2.0)
MONOGRAPH_SHAPE = CorpusShape(num_sources=90, scale=30.0, exponent=0.8, shift=2.0)


@dataclass(frozen=True)
class RelevanceModel:
    """P(relevant) = base + coupling * log(productivity) / log(reference)."""

    base: float
    coupling: float
    reference: float = 20.0

    def probability(self, productivity: np.ndarray) -> np.ndarray:
        p = self.base + self.coupling * np.log(productivity) / math.log(self.reference)
        return np.clip(p, 0.0, 1.0)


ARTICLE_RELEVANCE = RelevanceModel(base=0.13, coupling=0.25)
MONOGRAPH_RELEVANCE = RelevanceModel(base=0.17, coupling=0.06)
UNIFORM_RELEVANCE = RelevanceModel(base=0.25, coupling=0.0)


def productivities(rng: np.random.Generator, shape: CorpusShape) -> np.ndarray:
    r = np.arange(1, shape.num_sources + 1)
    raw = shape.scale * (r + shape.shift) ** (-shape.exponent) * rng.lognormal(0.0, shape.jitter, r.size)
    return np.maximum(1, np.floor(raw + rng.random(r.size))).astype(np.int64)


def generate_topic(rng: np.random.Generator, topic: int, doctype: DocType = DocType.JOURNAL_ARTICLE,
                   shape: CorpusShape | None = None, relevance: RelevanceModel | None = None,
                   databases: tuple[str, ...] = ("SOLIS", "SOLIT"), unjudged_fraction: float = 0.0,
                   ) -> tuple[list[Document], dict[tuple[int, str], int]]:
    """One topic's documents plus its judgments.

    ``unjudged_fraction`` of the documents get no judgment at all.
    """
    article = doctype is DocType.JOURNAL_ARTICLE
    shape = shape or (ARTICLE_SHAPE if article else MONOGRAPH_SHAPE)
    relevance = relevance or (ARTICLE_RELEVANCE if article else MONOGRAPH_RELEVANCE)
    sizes = productivities(rng, shape)
    source_of = np.repeat(np.arange(sizes.size), sizes)
    n = int(sizes.sum())
    relevant = rng.random(n) < relevance.probability(sizes[source_of].astype(np.float64))
    judged = rng.random(n) >= unjudged_fraction
    db = rng.integers(0, len(databases), n)
    years = 2000 + rng.integers(0, 8, n)
    prefix = "j" if article else "m"
    docs: list[Document] = []
    judgments: dict[tuple[int, str], int] = {}
    for i in range(n):
        src = int(source_of[i])
        doc_id = f"syn-{topic}-{prefix}{i:05d}"
        if article:
            name = f"Journal of Topic {topic} Studies {src:03d}"
            issn = f"{topic % 10000:04d}-{src:04d}"
        else:
            name = f"Publisher {topic}-{src:03d}"
            issn = None
        docs.append(Document(
            doc_id=doc_id,
            title=f"Synthetic record {doc_id}",
            doctype=doctype,
            source_field=name,
            issn=issn,
            year=int(years[i]),
            database_id=databases[int(db[i])],
            language_code="en",
        ))
        if judged[i]:
            judgments[(topic, doc_id)] = int(relevant[i])
    return docs, judgments


def generate_collection(seed: int, num_topics: int = 25, doctype: DocType = DocType.JOURNAL_ARTICLE,
                        first_topic: int = 1, **kwargs) -> tuple[dict[int, list[Document]], Qrels, list[Topic]]:
    rng = np.random.default_rng(seed)
    per_topic: dict[int, list[Document]] = {}
    judgments: dict[tuple[int, str], int] = {}
    topics = []
    for number in range(first_topic, first_topic + num_topics):
        docs, qj = generate_topic(rng, number, doctype, **kwargs)
        per_topic[number] = docs
        judgments.update(qj)
        topics.append(Topic(number, f"Synthetic topic {number}", f"Generated topic {number}", ""))
    return per_topic, Qrels(judgments), topics

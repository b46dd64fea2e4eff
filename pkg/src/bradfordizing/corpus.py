"""Documents, topics, relevance judgments and source keys.

Document files follow the GIRT tagged layout (a sequence of ``<DOC>``
records, optionally wrapped in a root element); topic files are a sequence
of ``<top>`` records. Both are read with expat so that markup errors can be
reported with a byte offset.
"""

from __future__ import annotations

import enum
import functools
import io
import re
from dataclasses import dataclass, field
from typing import BinaryIO, Iterable, Iterator, Mapping, Union
from xml.parsers import expat
from xml.sax.saxutils import escape

from .errors import DuplicateIdError, ParseError

ByteInput = Union[bytes, bytearray, BinaryIO]


class DocType(str, enum.Enum):
    JOURNAL_ARTICLE = "journal_article"
    MONOGRAPH = "monograph"
    OTHER = "other"

    @classmethod
    def from_raw(cls, raw: str | None) -> "DocType":
        value = (raw or "").strip().lower()
        if value == "journalarticle":
            return cls.JOURNAL_ARTICLE
        if value == "monograph":
            return cls.MONOGRAPH
        return cls.OTHER

    @property
    def raw(self) -> str:
        return {"journal_article": "journalarticle", "monograph": "monograph"}.get(self.value, "other")


class KeyMode(str, enum.Enum):
    JOURNAL = "journal"
    PUBLISHER = "publisher"
    AUTO = "auto"


class SourceKind(str, enum.Enum):
    JOURNAL = "journal"
    PUBLISHER = "publisher"


@dataclass(frozen=True)
class Document:
    doc_id: str
    title: str = ""
    doctype: DocType = DocType.OTHER
    source_field: str | None = None
    issn: str | None = None
    year: int | None = None
    database_id: str = ""
    language_code: str | None = None
    controlled_terms: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.doc_id:
            raise ValueError("doc_id must be non-empty")
        if not isinstance(self.doctype, DocType):
            object.__setattr__(self, "doctype", DocType(self.doctype))
        if not isinstance(self.controlled_terms, tuple):
            object.__setattr__(self, "controlled_terms", tuple(self.controlled_terms))


@dataclass(frozen=True)
class Topic:
    number: int
    title: str = ""
    description: str = ""
    narrative: str = ""


@dataclass(frozen=True)
class Qrels:
    """Relevance grades keyed by ``(topic_number, doc_id)``."""

    judgments: Mapping[tuple[int, str], int] = field(default_factory=dict)

    def grade(self, topic: int, doc_id: str) -> int | None:
        return self.judgments.get((topic, doc_id))

    def is_judged(self, topic: int, doc_id: str) -> bool:
        return (topic, doc_id) in self.judgments

    def is_relevant(self, topic: int, doc_id: str) -> bool:
        return self.judgments.get((topic, doc_id), 0) > 0

    def topics(self) -> list[int]:
        return sorted({t for t, _ in self.judgments})

    def judged_docs(self, topic: int) -> list[str]:
        return sorted(d for t, d in self.judgments if t == topic)

    def __len__(self) -> int:
        return len(self.judgments)


@dataclass(frozen=True, order=True)
class SourceKey:
    kind: SourceKind
    key: str

    def __post_init__(self):
        if not self.key:
            raise ValueError("source key must be non-empty")

    def __str__(self) -> str:
        return self.key


# --------------------------------------------------------------------------
# normalization and keys
# --------------------------------------------------------------------------

_WS = re.compile(r"\s+")


@functools.lru_cache(maxsize=1 << 16)
def normalize_key(text: str) -> str:
    """Case-fold and collapse whitespace. Diacritics are kept."""
    return _WS.sub(" ", text.casefold()).strip()


@functools.lru_cache(maxsize=1 << 16)
def _interned_key(kind: SourceKind, raw: str) -> SourceKey | None:
    key = normalize_key(raw)
    return SourceKey(kind, key) if key else None


def source_key(doc: Document, key_mode: KeyMode | str = KeyMode.AUTO) -> SourceKey | None:
    mode = key_mode if isinstance(key_mode, KeyMode) else KeyMode(key_mode)
    if mode is KeyMode.AUTO:
        if doc.doctype is DocType.JOURNAL_ARTICLE:
            mode = KeyMode.JOURNAL
        elif doc.doctype is DocType.MONOGRAPH:
            mode = KeyMode.PUBLISHER
        else:
            return None
    if mode is KeyMode.JOURNAL:
        for raw in (doc.issn, doc.source_field):
            key = _interned_key(SourceKind.JOURNAL, raw) if raw else None
            if key is not None:
                return key
        return None
    return _interned_key(SourceKind.PUBLISHER, doc.source_field) if doc.source_field else None


# --------------------------------------------------------------------------
# tagged-record reader
# --------------------------------------------------------------------------

_WRAP_OPEN = b"<__records__>"
_WRAP_CLOSE = b"</__records__>"
_DECL = re.compile(rb"^\s*<\?xml[^>]*\?>")
_DOCTYPE_DECL = re.compile(rb"^\s*<!DOCTYPE[^>]*>")


def _read_bytes(data: ByteInput) -> bytes:
    if isinstance(data, (bytes, bytearray)):
        return bytes(data)
    return data.read()


def _iter_records(data: bytes, record_tag: str, source: str | None = None
                  ) -> Iterator[tuple[int, dict[str, list[str]]]]:
    """Yield ``(byte_offset, {child_tag: [text, ...]})`` for every record.

    Records may appear at any depth; text of nested children is attached to
    the record's direct child.
    """
    head = 0
    for pattern in (_DECL, _DOCTYPE_DECL):
        m = pattern.match(data, head)
        if m:
            head = m.end()
    body = data[head:]
    shift = len(_WRAP_OPEN) - head

    records: list[tuple[int, dict[str, list[str]]]] = []
    state = {"record": None, "offset": 0, "depth": 0, "child": None, "buf": []}
    parser = expat.ParserCreate("utf-8")
    parser.buffer_text = True

    def start(name, attrs):
        if state["record"] is None:
            if name == record_tag:
                state["record"] = {}
                state["offset"] = parser.CurrentByteIndex - shift
                state["depth"] = 0
            return
        state["depth"] += 1
        if state["depth"] == 1:
            state["child"] = name
            state["buf"] = []

    def end(name):
        rec = state["record"]
        if rec is None:
            return
        if state["depth"] == 0:
            records.append((state["offset"], rec))
            state["record"] = None
            return
        if state["depth"] == 1:
            rec.setdefault(state["child"], []).append("".join(state["buf"]).strip())
            state["child"] = None
        state["depth"] -= 1

    def chars(text):
        if state["record"] is not None and state["depth"] >= 1:
            state["buf"].append(text)

    parser.StartElementHandler = start
    parser.EndElementHandler = end
    parser.CharacterDataHandler = chars
    try:
        parser.Parse(_WRAP_OPEN + body + _WRAP_CLOSE, True)
    except expat.ExpatError as exc:
        offset = max(0, min(len(data), parser.ErrorByteIndex - shift))
        raise ParseError(expat.ErrorString(exc.code), offset=offset, source=source) from None
    yield from records


def _first(fields: dict[str, list[str]], *tags: str) -> str | None:
    for tag in tags:
        values = fields.get(tag)
        if values and values[0]:
            return values[0]
    return None


def parse_documents(data: ByteInput, format: str = "girt_xml", *, database_id: str = "",
                    source: str | None = None) -> list[Document]:
    """Parse a GIRT-style document file into :class:`Document` records.

    ``database_id`` tags every document; a ``<DATABASE>`` element inside a
    record (as written by :func:`write_documents`) takes precedence.
    """
    if format != "girt_xml":
        raise ValueError(f"unsupported document format {format!r}")
    raw = _read_bytes(data)
    docs: list[Document] = []
    seen: set[str] = set()
    for offset, fields in _iter_records(raw, "DOC", source):
        doc_id = _first(fields, "DOCID")
        if not doc_id:
            raise ParseError("<DOC> without <DOCID>", offset=offset, source=source)
        if doc_id in seen:
            raise DuplicateIdError(doc_id, f"duplicate DOCID {doc_id!r}" + (f" in {source}" if source else ""))
        seen.add(doc_id)
        year_text = _first(fields, "PUBLICATION-YEAR")
        year = None
        if year_text:
            m = re.match(r"\d{1,4}", year_text)
            year = int(m.group()) if m else None
        terms: list[str] = []
        for tag in ("CONTROLLED-TERM-DE", "CONTROLLED-TERM-EN"):
            for value in fields.get(tag, []):
                terms.extend(t.strip() for t in value.split("#") if t.strip())
        docs.append(Document(
            doc_id=doc_id,
            title=_first(fields, "TITLE-DE", "TITLE-EN", "TITLE") or "",
            doctype=DocType.from_raw(_first(fields, "DOCTYPE")),
            source_field=_first(fields, "SOURCE"),
            issn=_first(fields, "ISSN"),
            year=year,
            database_id=_first(fields, "DATABASE") or database_id,
            language_code=_first(fields, "LANGUAGE-CODE"),
            controlled_terms=tuple(terms),
        ))
    return docs


def parse_topics(data: ByteInput, *, source: str | None = None) -> list[Topic]:
    raw = _read_bytes(data)
    topics: list[Topic] = []
    seen: set[int] = set()
    for offset, fields in _iter_records(raw, "top", source):
        num_text = _first(fields, "num")
        if num_text is None:
            raise ParseError("<top> without <num>", offset=offset, source=source)
        m = re.search(r"(\d+)\s*$", num_text)
        if not m or int(m.group(1)) <= 0:
            raise ParseError(f"invalid topic number {num_text!r}", offset=offset, source=source)
        number = int(m.group(1))
        if number in seen:
            raise DuplicateIdError(number, f"duplicate topic number {number}")
        seen.add(number)
        topics.append(Topic(
            number=number,
            title=_first(fields, "EN-title", "title") or "",
            description=_first(fields, "EN-desc", "desc") or "",
            narrative=_first(fields, "EN-narr", "narr") or "",
        ))
    return topics


def parse_qrels(data: ByteInput, *, source: str | None = None) -> Qrels:
    """Read ``topic iteration doc_id grade`` lines (UTF-8, LF or CRLF)."""
    text = _read_bytes(data).decode("utf-8")
    judgments: dict[tuple[int, str], int] = {}
    for line_no, line in enumerate(io.StringIO(text, newline=None), start=1):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 4:
            raise ParseError(f"expected 4 columns, got {len(parts)}", line=line_no, source=source)
        topic_s, _iteration, doc_id, grade_s = parts
        try:
            topic = int(topic_s)
            grade = int(grade_s)
        except ValueError:
            raise ParseError(f"non-integer topic or grade in {line.strip()!r}",
                             line=line_no, source=source) from None
        if grade < 0:
            raise ParseError(f"negative grade {grade}", line=line_no, source=source)
        if (topic, doc_id) in judgments:
            raise DuplicateIdError((topic, doc_id), f"line {line_no}: duplicate judgment for topic {topic}, {doc_id!r}")
        judgments[(topic, doc_id)] = grade
    return Qrels(judgments)


# --------------------------------------------------------------------------
# writers
# --------------------------------------------------------------------------

def _tag(name: str, value) -> str:
    if value is None or value == "":
        return f"<{name}/>"
    return f"<{name}>{escape(str(value))}</{name}>"


def write_documents(docs: Iterable[Document]) -> bytes:
    """Serialize documents to GIRT-style XML, readable by :func:`parse_documents`."""
    out = ['<?xml version="1.0" encoding="UTF-8"?>', "<DOCS>"]
    for d in docs:
        out.append("<DOC>")
        out.append(_tag("DOCID", d.doc_id))
        if d.issn:
            out.append(_tag("ISSN", d.issn))
        out.append(_tag("TITLE-DE", d.title))
        out.append(_tag("DOCTYPE", d.doctype.raw))
        if d.source_field:
            out.append(_tag("SOURCE", d.source_field))
        if d.year is not None:
            out.append(_tag("PUBLICATION-YEAR", d.year))
        if d.language_code:
            out.append(_tag("LANGUAGE-CODE", d.language_code))
        if d.controlled_terms:
            out.append(_tag("CONTROLLED-TERM-DE", "#".join(d.controlled_terms)))
        if d.database_id:
            out.append(_tag("DATABASE", d.database_id))
        out.append("</DOC>")
    out.append("</DOCS>")
    return ("\n".join(out) + "\n").encode("utf-8")


def write_topics(topics: Iterable[Topic]) -> bytes:
    out = []
    for t in topics:
        out.append("<top>")
        out.append(_tag("num", t.number))
        out.append(_tag("EN-title", t.title))
        out.append(_tag("EN-desc", t.description))
        out.append(_tag("EN-narr", t.narrative))
        out.append("</top>")
    return ("\n".join(out) + "\n").encode("utf-8")


def write_qrels(qrels: Qrels) -> bytes:
    lines = [f"{t} 0 {d} {g}" for (t, d), g in sorted(qrels.judgments.items())]
    return ("\n".join(lines) + ("\n" if lines else "")).encode("utf-8")


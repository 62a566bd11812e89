"""Domain types and corpus ingestion.

Vertical format: one token per line as ``surface<TAB>lemma<TAB>pos``.
Structural lines (``<doc ...>``, ``</doc>``, ``<s>``, ``</s>``) stand on
their own lines, consume no token positions, and are recognized by a
leading ``<`` and trailing ``>``.
"""

from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, TextIO

from .errors import (
    BadArityError,
    DuplicateDocIdError,
    MalformedLineError,
    NonAlphabeticError,
    UnclosedDocError,
)

# Coarse tag set; every parsed tag is mapped into it, unknown tags become X.
POS_TAGS = (
    "NOUN", "PROPN", "ADJ", "VERB", "ADP", "CCONJ",
    "DET", "PRON", "ADV", "NUM", "PUNCT", "X",
)
POS_IDS = {tag: i for i, tag in enumerate(POS_TAGS)}
X_TAG = "X"

DEFAULT_POS_MAP = {tag: tag for tag in POS_TAGS}
DEFAULT_POS_MAP["AUX"] = "VERB"


def load_pos_map(path) -> dict[str, str]:
    """Read a {raw tag: coarse tag} JSON mapping, layered over the default."""
    with open(path, encoding="utf-8") as fh:
        extra = json.load(fh)
    merged = dict(DEFAULT_POS_MAP)
    for raw, coarse in extra.items():
        if coarse not in POS_IDS:
            raise ValueError(f"pos map target {coarse!r} is not a coarse tag")
        merged[str(raw)] = coarse
    return merged


@dataclass(slots=True)
class Token:
    surface: str
    lemma: str
    pos: str
    position: int


@dataclass(slots=True)
class Document:
    """One document; token_range is the half-open [start, end) position span."""

    doc_id: str
    source: str = ""
    date: str | None = None
    start: int = 0
    end: int = 0
    # 0-based sentence start offsets relative to `start`; always begins with 0
    # for non-empty documents.
    sent_starts: list[int] = field(default_factory=list)
    # whether the input carried <s> tags (plain docs are one implicit sentence)
    explicit_sents: bool = False

    @property
    def token_count(self) -> int:
        return self.end - self.start


class NodeKind(str, Enum):
    LEMMA = "lemma"
    BIGRAM = "bigram"
    INITIALISM = "initialism"


@dataclass(frozen=True, slots=True)
class NodeSpec:
    """A query node: single lemma, adjacent lemma bigram, or uppercase initialism."""

    kind: NodeKind
    forms: tuple[str, ...]
    case_sensitive: bool

    @property
    def span(self) -> int:
        return len(self.forms)

    def printed(self) -> str:
        return " ".join(self.forms)

    def __str__(self) -> str:
        return self.printed()


def make_node(spec: str, kind: NodeKind | str) -> NodeSpec:
    """Build a NodeSpec from user text.

    Lemma and bigram forms are lowercased (matching is case-insensitive);
    an initialism is uppercased verbatim and matched case-sensitively
    against token surfaces.
    """
    kind = NodeKind(kind)
    parts = spec.split()
    if not parts:
        raise BadArityError("empty node spec")
    if kind is NodeKind.BIGRAM:
        if len(parts) != 2:
            raise BadArityError(f"bigram needs exactly 2 forms, got {len(parts)}")
        return NodeSpec(kind, (parts[0].lower(), parts[1].lower()), False)
    if len(parts) != 1:
        raise BadArityError(f"{kind.value} needs exactly 1 form, got {len(parts)}")
    form = parts[0]
    if kind is NodeKind.INITIALISM:
        form = form.upper()
        if not form.isalpha():
            raise NonAlphabeticError(f"initialism {form!r} must be alphabetic")
        return NodeSpec(kind, (form,), True)
    return NodeSpec(kind, (form.lower(),), False)


_DOC_OPEN = re.compile(r'<doc\s+id="([^"]*)"(?:\s+source="([^"]*)")?(?:\s+date="([^"]*)")?\s*>$')


def parse_vertical(
    source: Iterable[str] | TextIO,
    pos_map: dict[str, str] | None = None,
) -> Iterator[tuple[Document, list[Token]]]:
    """Parse vertical-format text into a (Document, tokens) stream.

    Positions are assigned over the corpus-wide token stream in file order;
    structural lines consume no positions. Raises MalformedLineError,
    DuplicateDocIdError, or UnclosedDocError on structural problems.
    """
    pos_map = pos_map or DEFAULT_POS_MAP
    pos_of = pos_map.get
    seen_ids: set[str] = set()
    doc: Document | None = None
    tokens: list[Token] = []
    append = tokens.append
    in_sentence = False
    position = 0

    for line_no, raw in enumerate(source, 1):
        line = raw.rstrip("\n")
        if not line:
            continue
        if line[0] == "<" and line[-1] == ">":
            if line.startswith("<doc"):
                if doc is not None:
                    raise MalformedLineError(line_no, "nested <doc>")
                m = _DOC_OPEN.match(line)
                if not m:
                    raise MalformedLineError(line_no, "bad <doc> attributes")
                doc_id, src, date = m.group(1), m.group(2) or "", m.group(3)
                if doc_id in seen_ids:
                    raise DuplicateDocIdError(f"duplicate doc id {doc_id!r}")
                seen_ids.add(doc_id)
                doc = Document(doc_id, src, date, start=position)
                tokens = []
                append = tokens.append
                in_sentence = False
            elif line == "</doc>":
                if doc is None:
                    raise MalformedLineError(line_no, "</doc> without <doc>")
                doc.end = position
                yield doc, tokens
                doc = None
                in_sentence = False
            elif line == "<s>":
                if doc is None:
                    raise MalformedLineError(line_no, "<s> outside <doc>")
                rel = position - doc.start
                if not doc.sent_starts or doc.sent_starts[-1] != rel:
                    doc.sent_starts.append(rel)
                doc.explicit_sents = True
                in_sentence = True
            elif line == "</s>":
                if doc is None or not in_sentence:
                    raise MalformedLineError(line_no, "</s> without <s>")
                in_sentence = False
            # other structural tags are ignored
            continue
        if doc is None:
            raise MalformedLineError(line_no, "token line outside <doc>")
        fields = line.split("\t")
        if len(fields) != 3:
            raise MalformedLineError(line_no, f"expected 3 tab-separated fields, got {len(fields)}")
        surface, lemma, pos = fields
        if not surface or not lemma:
            raise MalformedLineError(line_no, "empty surface or lemma field")
        if not in_sentence:
            # a token outside <s> tags opens an implicit sentence
            rel = position - doc.start
            if not doc.sent_starts or doc.sent_starts[-1] != rel:
                doc.sent_starts.append(rel)
            in_sentence = True
        append(Token(surface, lemma, pos_of(pos, X_TAG), position))
        position += 1

    if doc is not None:
        raise UnclosedDocError(f"EOF inside document {doc.doc_id!r}")


def serialize_vertical(stream: Iterable[tuple[Document, list[Token]]]) -> str:
    """Inverse of parse_vertical for doc/sentence tags and token lines."""
    out: list[str] = []
    for doc, tokens in stream:
        attrs = [f'id="{doc.doc_id}"']
        if doc.source:
            attrs.append(f'source="{doc.source}"')
        if doc.date:
            attrs.append(f'date="{doc.date}"')
        out.append(f"<doc {' '.join(attrs)}>")
        starts = {s + doc.start for s in doc.sent_starts} if doc.explicit_sents else set()
        open_sent = False
        for tok in tokens:
            if tok.position in starts:
                if open_sent:
                    out.append("</s>")
                out.append("<s>")
                open_sent = True
            out.append(f"{tok.surface}\t{tok.lemma}\t{tok.pos}")
        if open_sent:
            out.append("</s>")
        out.append("</doc>")
    return "\n".join(out) + "\n" if out else ""


def _is_punct_char(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def tokenize_plain(
    text: str,
    doc_id: str,
    source: str = "",
    date: str | None = None,
    start: int = 0,
) -> tuple[Document, list[Token]]:
    """Whitespace tokenizer for untagged text.

    Leading/trailing punctuation splits off as PUNCT tokens (one per
    character); word tokens get lemma = lowercased surface and pos = X.
    The whole document counts as a single sentence.
    """
    tokens: list[Token] = []
    position = start
    for chunk in text.split():
        lead: list[str] = []
        trail: list[str] = []
        while chunk and _is_punct_char(chunk[0]):
            lead.append(chunk[0])
            chunk = chunk[1:]
        while chunk and _is_punct_char(chunk[-1]):
            trail.append(chunk[-1])
            chunk = chunk[:-1]
        for ch in lead:
            tokens.append(Token(ch, ch, "PUNCT", position))
            position += 1
        if chunk:
            tokens.append(Token(chunk, chunk.lower(), X_TAG, position))
            position += 1
        for ch in reversed(trail):
            tokens.append(Token(ch, ch, "PUNCT", position))
            position += 1
    doc = Document(doc_id, source, date, start=start, end=position)
    if tokens:
        doc.sent_starts.append(0)
    return doc, tokens

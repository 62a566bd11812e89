"""Positional inverted index: build, persist, scope, and count nodes.

Storage layout is columnar: the token stream as lemma ids plus document,
sentence, and uppercase-surface tables. Postings (per-lemma position
lists grouped by document) and per-(lemma, document) count tables are
derived lazily and cached; they are deterministic functions of the
stored arrays.
"""

from __future__ import annotations

import logging
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .core import Document, NodeKind, NodeSpec, POS_IDS, Token
from .errors import (
    BadMagicError,
    EmptyCorpusError,
    IndexFormatError,
    TruncatedFileError,
    VersionMismatchError,
)

log = logging.getLogger(__name__)

MAGIC = b"CPXINDEX"
FORMAT_VERSION = 1
SCOPE_HEADER = "# scope v1"


class Index:
    """Immutable corpus index; safe for any number of concurrent readers."""

    def __init__(
        self,
        lemmas: list[str],
        doc_table: list[Document],
        token_lemma_ids: np.ndarray,
        pos_ids: np.ndarray,
        sent_starts: np.ndarray,
        upper_positions: dict[str, np.ndarray],
    ):
        self.lemmas = lemmas
        self.lemma_ids = {lemma: i for i, lemma in enumerate(lemmas)}
        self.doc_table = doc_table
        self.token_lemma_ids = token_lemma_ids
        self.pos_ids = pos_ids
        self.sent_starts = sent_starts
        self.upper_positions = upper_positions
        self.doc_starts = np.fromiter(
            (d.start for d in doc_table), np.int64, len(doc_table)
        )
        self._doc_ends = np.fromiter((d.end for d in doc_table), np.int64, len(doc_table))
        self._postings: tuple[np.ndarray, np.ndarray] | None = None
        self._df: tuple[np.ndarray, np.ndarray, np.ndarray] | None = None
        self._sent_ids: np.ndarray | None = None

    @property
    def token_count(self) -> int:
        return len(self.token_lemma_ids)

    @property
    def doc_count(self) -> int:
        return len(self.doc_table)

    @property
    def vocab_size(self) -> int:
        return len(self.lemmas)

    def lemma_id(self, lemma: str) -> int | None:
        return self.lemma_ids.get(lemma.lower())

    # --- derived structures ---

    @property
    def sent_ids(self) -> np.ndarray:
        """Sentence ordinal per token position."""
        if self._sent_ids is None:
            lengths = np.diff(np.append(self.sent_starts, self.token_count))
            self._sent_ids = np.repeat(
                np.arange(len(self.sent_starts), dtype=np.int32), lengths
            )
        return self._sent_ids

    def _ensure_postings(self) -> tuple[np.ndarray, np.ndarray]:
        if self._postings is None:
            order = np.argsort(self.token_lemma_ids, kind="stable").astype(np.int64)
            offsets = np.zeros(self.vocab_size + 1, np.int64)
            np.cumsum(np.bincount(self.token_lemma_ids, minlength=self.vocab_size), out=offsets[1:])
            self._postings = (order, offsets)
        return self._postings

    def positions_of(self, lemma_id: int) -> np.ndarray:
        """Ascending global positions of one lemma."""
        positions, offsets = self._ensure_postings()
        return positions[offsets[lemma_id]:offsets[lemma_id + 1]]

    def lemma_frequencies(self) -> np.ndarray:
        """Whole-corpus frequency per lemma id."""
        _, offsets = self._ensure_postings()
        return np.diff(offsets)

    def _ensure_df(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Per-(lemma, doc) count table grouped by lemma."""
        if self._df is None:
            doc_ids = self.doc_ids_of(np.arange(self.token_count, dtype=np.int64))
            keys = self.token_lemma_ids.astype(np.int64) * self.doc_count + doc_ids
            uniq, counts = np.unique(keys, return_counts=True)
            df_lemmas = (uniq // self.doc_count).astype(np.int64)
            df_docs = (uniq % self.doc_count).astype(np.int64)
            offsets = np.zeros(self.vocab_size + 1, np.int64)
            np.cumsum(np.bincount(df_lemmas, minlength=self.vocab_size), out=offsets[1:])
            self._df = (df_docs, counts.astype(np.int64), offsets)
        return self._df

    def doc_ids_of(self, positions: np.ndarray) -> np.ndarray:
        """Document ordinal per global token position."""
        return np.searchsorted(self.doc_starts, positions, side="right") - 1

    def doc_lengths(self) -> np.ndarray:
        return self._doc_ends - self.doc_starts


@dataclass
class Scope:
    """A document subset of an index; all statistics are computed per scope."""

    index: Index
    doc_ordinals: np.ndarray  # sorted unique int64
    _mask: np.ndarray | None = field(default=None, repr=False)
    _local_starts: np.ndarray | None = field(default=None, repr=False)
    _lemma_f: np.ndarray | None = field(default=None, repr=False)

    @property
    def doc_count(self) -> int:
        return len(self.doc_ordinals)

    @property
    def token_count(self) -> int:
        return int(self.index.doc_lengths()[self.doc_ordinals].sum())

    @property
    def mask(self) -> np.ndarray:
        if self._mask is None:
            m = np.zeros(self.index.doc_count, bool)
            m[self.doc_ordinals] = True
            self._mask = m
        return self._mask

    def lemma_frequencies(self) -> np.ndarray:
        """Frequency of every lemma inside this scope."""
        if self._lemma_f is None:
            if self.doc_count == self.index.doc_count:
                self._lemma_f = self.index.lemma_frequencies()
            else:
                from . import kernels

                df_docs, df_counts, df_offsets = self.index._ensure_df()
                self._lemma_f, _ = kernels.scope_counts(
                    df_docs, df_counts, df_offsets, self.mask
                )
        return self._lemma_f

    def filter_positions(self, positions: np.ndarray) -> np.ndarray:
        """Keep only positions that fall inside member documents."""
        if len(positions) == 0 or self.doc_count == self.index.doc_count:
            return positions
        return positions[self.mask[self.index.doc_ids_of(positions)]]

    def localize(self, positions: np.ndarray) -> np.ndarray:
        """Map global positions to offsets in the scope's concatenated stream."""
        if self._local_starts is None:
            lengths = self.index.doc_lengths()[self.doc_ordinals]
            starts = np.zeros(len(lengths), np.int64)
            np.cumsum(lengths[:-1], out=starts[1:])
            self._local_starts = starts
        doc_ids = self.index.doc_ids_of(positions)
        member_rank = np.searchsorted(self.doc_ordinals, doc_ids)
        doc_start = self.index.doc_starts[doc_ids]
        return positions - doc_start + self._local_starts[member_rank]


def whole_scope(index: Index) -> Scope:
    return Scope(index, np.arange(index.doc_count, dtype=np.int64))


def complement_scope(index: Index, focus: Scope) -> Scope:
    if focus.index is not index:
        raise ValueError("focus scope belongs to a different index")
    rest = np.setdiff1d(np.arange(index.doc_count, dtype=np.int64), focus.doc_ordinals)
    return Scope(index, rest)


@dataclass(frozen=True)
class NodeHits:
    f: int
    docf: int
    positions: np.ndarray  # ascending global positions (bigram: first word)


def count_node(scope: Scope, node: NodeSpec) -> NodeHits:
    """Raw frequency, document frequency, and hit positions of a node."""
    index = scope.index
    if node.kind is NodeKind.INITIALISM:
        positions = index.upper_positions.get(node.forms[0], np.zeros(0, np.int64))
    elif node.kind is NodeKind.BIGRAM:
        positions = _bigram_positions(index, node.forms[0], node.forms[1])
    else:
        lid = index.lemma_id(node.forms[0])
        positions = index.positions_of(lid) if lid is not None else np.zeros(0, np.int64)
    positions = scope.filter_positions(positions)
    docf = len(np.unique(index.doc_ids_of(positions))) if len(positions) else 0
    return NodeHits(len(positions), docf, positions)


def _bigram_positions(index: Index, first: str, second: str) -> np.ndarray:
    a = index.lemma_id(first)
    b = index.lemma_id(second)
    if a is None or b is None:
        return np.zeros(0, np.int64)
    p1 = index.positions_of(a)
    p2 = index.positions_of(b)
    hits = p1[np.isin(p1 + 1, p2, assume_unique=False)]
    if len(hits) == 0:
        return hits
    sent = index.sent_ids
    return hits[sent[hits] == sent[hits + 1]]


# --- building ---

def build_index(
    docs: Iterable[tuple[Document, list[Token]]],
    workers: int = 1,
    seed_order: int | None = None,
) -> Index:
    """Build an index from a (Document, tokens) stream.

    Output is identical regardless of `workers`; `seed_order` shuffles the
    internal chunk processing order to exercise that guarantee.
    """
    materialized: list[tuple[Document, list[Token]]] = []
    for doc, tokens in docs:
        if not tokens:
            log.warning("dropping empty document %r", doc.doc_id)
            continue
        materialized.append((doc, tokens))
    if not materialized:
        raise EmptyCorpusError("no non-empty documents")

    workers = max(1, workers)
    chunk_size = max(1, -(-len(materialized) // workers))
    chunks = [
        materialized[i:i + chunk_size] for i in range(0, len(materialized), chunk_size)
    ]

    if len(chunks) == 1:
        parts = [_scan_chunk(chunks[0])]
    else:
        order = list(range(len(chunks)))
        if seed_order is not None:
            import random

            random.Random(seed_order).shuffle(order)
        parts: list = [None] * len(chunks)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(_scan_chunk, chunks[i]): i for i in order}
            for fut, i in futures.items():
                parts[i] = fut.result()

    # deterministic merge: lemma ids are assigned in sorted-lemma order
    vocab: set[str] = set()
    for local_vocab, *_ in parts:
        vocab.update(local_vocab)
    lemmas = sorted(vocab)
    global_id = {lemma: i for i, lemma in enumerate(lemmas)}

    id_arrays = []
    for local_vocab, local_ids, _, _ in parts:
        remap = np.fromiter((global_id[w] for w in local_vocab), np.int32, len(local_vocab))
        id_arrays.append(remap[np.asarray(local_ids, np.int32)])
    token_lemma_ids = (
        np.concatenate(id_arrays) if id_arrays else np.zeros(0, np.int32)
    )
    pos_ids = np.concatenate([np.asarray(p, np.uint8) for _, _, p, _ in parts])

    doc_table: list[Document] = []
    sent_starts: list[int] = []
    upper: dict[str, list[int]] = {}
    position = 0
    for part, chunk in zip(parts, chunks):
        chunk_start = position
        for doc, tokens in chunk:
            start = position
            rel_starts = [r for r in (doc.sent_starts or [0]) if r < len(tokens)]
            sent_starts.extend(start + r for r in rel_starts)
            position += len(tokens)
            doc_table.append(
                Document(doc.doc_id, doc.source, doc.date, start, position, rel_starts)
            )
        for surface, rel_positions in part[3].items():
            upper.setdefault(surface, []).extend(
                chunk_start + rel for rel in rel_positions
            )
    upper_arrays = {
        s: np.asarray(sorted(ps), np.int64) for s, ps in sorted(upper.items())
    }

    index = Index(
        lemmas,
        doc_table,
        token_lemma_ids,
        pos_ids,
        np.asarray(sent_starts, np.int64),
        upper_arrays,
    )
    _check_invariants(index)
    return index


def _scan_chunk(chunk: list[tuple[Document, list[Token]]]):
    """Intern one chunk: local vocab, local lemma ids, pos ids, upper surfaces.

    Upper-surface positions are chunk-relative; the merge step shifts them
    by the chunk's global start.
    """
    local_vocab: dict[str, int] = {}
    local_ids: list[int] = []
    pos_ids: list[int] = []
    upper: dict[str, list[int]] = {}
    offset = 0
    for doc, tokens in chunk:
        for i, tok in enumerate(tokens):
            lemma = tok.lemma.lower()
            lid = local_vocab.get(lemma)
            if lid is None:
                lid = local_vocab[lemma] = len(local_vocab)
            local_ids.append(lid)
            pos_ids.append(POS_IDS[tok.pos])
            if tok.surface.isupper() and tok.surface.isalpha():
                upper.setdefault(tok.surface, []).append(offset + i)
        offset += len(tokens)
    return local_vocab, local_ids, pos_ids, upper


def _check_invariants(index: Index) -> None:
    n = index.token_count
    if index.doc_count and (index.doc_starts[0] != 0 or index._doc_ends[-1] != n):
        raise AssertionError("document ranges do not tile the token stream")
    if np.any(index.doc_starts[1:] != index._doc_ends[:-1]):
        raise AssertionError("document ranges are not contiguous")


# --- persistence ---

def _pack_str(buf: bytearray, s: str) -> None:
    raw = s.encode("utf-8")
    buf += struct.pack("<I", len(raw))
    buf += raw


def _pack_varint(buf: bytearray, value: int) -> None:
    while True:
        b = value & 0x7F
        value >>= 7
        if value:
            buf.append(b | 0x80)
        else:
            buf.append(b)
            return


def _pack_deltas(buf: bytearray, values: np.ndarray) -> None:
    prev = 0
    for v in values.tolist():
        _pack_varint(buf, v - prev)
        prev = v


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.at = 0

    def take(self, n: int) -> bytes:
        if self.at + n > len(self.data):
            raise TruncatedFileError("index body ends early")
        out = self.data[self.at:self.at + n]
        self.at += n
        return out

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def u64(self) -> int:
        return struct.unpack("<Q", self.take(8))[0]

    def string(self) -> str:
        return self.take(self.u32()).decode("utf-8")

    def varint(self) -> int:
        shift = 0
        value = 0
        while True:
            b = self.take(1)[0]
            value |= (b & 0x7F) << shift
            if not b & 0x80:
                return value
            shift += 7
            if shift >= 63:  # corrupt continuation chain, not a valid position
                raise IndexFormatError("varint exceeds 63 bits")

    def deltas(self, count: int) -> np.ndarray:
        out = np.zeros(count, np.int64)
        prev = 0
        for i in range(count):
            prev += self.varint()
            if prev >= 1 << 62:
                raise IndexFormatError("position delta chain overflows")
            out[i] = prev
        return out

    def array(self, dtype, count: int) -> np.ndarray:
        raw = self.take(count * np.dtype(dtype).itemsize)
        return np.frombuffer(raw, dtype=dtype).copy()


def save_index(index: Index, path) -> None:
    body = bytearray()
    body += struct.pack(
        "<QIIII",
        index.token_count,
        index.doc_count,
        len(index.sent_starts),
        index.vocab_size,
        len(index.upper_positions),
    )
    for lemma in index.lemmas:
        _pack_str(body, lemma)
    for doc in index.doc_table:
        _pack_str(body, doc.doc_id)
        _pack_str(body, doc.source)
        _pack_str(body, doc.date or "")
        body += struct.pack("<QQ", doc.start, doc.end)
    _pack_deltas(body, index.sent_starts)
    body += index.token_lemma_ids.astype("<u4").tobytes()
    body += index.pos_ids.astype("u1").tobytes()
    for surface in sorted(index.upper_positions):
        positions = index.upper_positions[surface]
        _pack_str(body, surface)
        body += struct.pack("<I", len(positions))
        _pack_deltas(body, positions)

    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", FORMAT_VERSION))
        fh.write(struct.pack("<Q", len(body)))
        fh.write(body)


def load_index(path) -> Index:
    data = Path(path).read_bytes()
    if len(data) < len(MAGIC):
        if MAGIC.startswith(data):
            raise TruncatedFileError("file shorter than magic")
        raise BadMagicError("not an index file")
    if data[: len(MAGIC)] != MAGIC:
        raise BadMagicError("not an index file")
    if len(data) < 12:
        raise TruncatedFileError("missing format version")
    (version,) = struct.unpack_from("<I", data, 8)
    if version != FORMAT_VERSION:
        raise VersionMismatchError(f"format version {version}, expected {FORMAT_VERSION}")
    if len(data) < 20:
        raise TruncatedFileError("missing body length")
    (body_len,) = struct.unpack_from("<Q", data, 12)
    if len(data) - 20 < body_len:
        raise TruncatedFileError("body shorter than declared length")
    if len(data) - 20 > body_len:
        raise IndexFormatError("trailing bytes after body")

    r = _Reader(data[20:])
    n_tokens = r.u64()
    n_docs = r.u32()
    n_sents = r.u32()
    n_lemmas = r.u32()
    n_upper = r.u32()
    lemmas = [r.string() for _ in range(n_lemmas)]
    doc_table = []
    prev_end = 0
    for _ in range(n_docs):
        doc_id = r.string()
        src = r.string()
        date = r.string() or None
        start, end = struct.unpack("<QQ", r.take(16))
        if start != prev_end or end < start or end > n_tokens:
            raise IndexFormatError("document ranges do not tile the token stream")
        prev_end = end
        doc_table.append(Document(doc_id, src, date, start, end))
    if n_docs and prev_end != n_tokens:
        raise IndexFormatError("document ranges do not cover all tokens")
    sent_starts = r.deltas(n_sents)
    token_lemma_ids = r.array("<u4", n_tokens).astype(np.int32)
    pos_ids = r.array("u1", n_tokens)
    upper: dict[str, np.ndarray] = {}
    for _ in range(n_upper):
        surface = r.string()
        count = r.u32()
        upper[surface] = r.deltas(count)
    if r.at != len(r.data):
        raise IndexFormatError("unparsed bytes inside body")

    for doc in doc_table:
        lo = np.searchsorted(sent_starts, doc.start, side="left")
        hi = np.searchsorted(sent_starts, doc.end, side="left")
        doc.sent_starts = (sent_starts[lo:hi] - doc.start).tolist()
    return Index(lemmas, doc_table, token_lemma_ids, pos_ids, sent_starts, upper)


# --- scope files ---

def save_scope(scope: Scope, path) -> None:
    lines = [SCOPE_HEADER]
    lines.extend(scope.index.doc_table[i].doc_id for i in scope.doc_ordinals.tolist())
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_scope(index: Index, path) -> Scope:
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or lines[0].strip() != SCOPE_HEADER:
        raise IndexFormatError(f"scope file missing {SCOPE_HEADER!r} header")
    by_id = {doc.doc_id: i for i, doc in enumerate(index.doc_table)}
    ordinals = []
    for line in lines[1:]:
        doc_id = line.strip()
        if not doc_id:
            continue
        if doc_id not in by_id:
            raise IndexFormatError(f"scope doc id {doc_id!r} not in index")
        ordinals.append(by_id[doc_id])
    return Scope(index, np.asarray(sorted(set(ordinals)), np.int64))

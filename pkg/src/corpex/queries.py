"""Boolean document queries over an index.

Grammar: OR-separated lists of AND-separated factors, with parentheses.
A factor is a bare word (single lemma) or a quoted string holding one
lemma or a two-word adjacent bigram. A document satisfies a term when it
contains at least one occurrence. Matching is lemma-based and
case-insensitive.
"""

from __future__ import annotations

import logging
import re

import numpy as np

from .errors import QueryParseError
from .index import Index, Scope, _bigram_positions

log = logging.getLogger(__name__)

PRESETS = {
    "vr-anxiety": '("virtual reality" OR "VR") AND ("anxiety")',
}

_TOKEN_RE = re.compile(r'\s*(?:(\()|(\))|"([^"]*)"|([^\s()"]+))')


def _lex(query: str) -> list[tuple[str, str, int]]:
    tokens = []
    at = 0
    while at < len(query):
        m = _TOKEN_RE.match(query, at)
        if not m or m.end() == at:
            if query[at:].strip():
                raise QueryParseError(f"cannot read {query[at:at+10]!r}", at)
            break
        pos = m.start(m.lastindex)
        if m.group(3) is not None:
            pos -= 1  # point at the opening quote
        if m.group(1):
            tokens.append(("(", "(", pos))
        elif m.group(2):
            tokens.append((")", ")", pos))
        elif m.group(3) is not None:
            tokens.append(("quoted", m.group(3), pos))
        else:
            word = m.group(4)
            upper = word.upper()
            if upper in ("AND", "OR"):
                tokens.append((upper, upper, pos))
            else:
                tokens.append(("word", word, pos))
        at = m.end()
    return tokens


class _Parser:
    def __init__(self, index: Index, query: str):
        self.index = index
        self.query = query
        self.tokens = _lex(query)
        self.at = 0

    def peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.at] if self.at < len(self.tokens) else None

    def parse(self) -> np.ndarray:
        if not self.tokens:
            raise QueryParseError("empty query", 0)
        mask = self.expr()
        if self.at < len(self.tokens):
            kind, value, pos = self.tokens[self.at]
            raise QueryParseError(f"unexpected {value!r}", pos)
        return mask

    def expr(self) -> np.ndarray:
        mask = self.term()
        while (tok := self.peek()) and tok[0] == "OR":
            self.at += 1
            mask = mask | self.term()
        return mask

    def term(self) -> np.ndarray:
        mask = self.factor()
        while (tok := self.peek()) and tok[0] == "AND":
            self.at += 1
            mask = mask & self.factor()
        return mask

    def factor(self) -> np.ndarray:
        tok = self.peek()
        if tok is None:
            raise QueryParseError("query ends early", len(self.query))
        kind, value, pos = tok
        self.at += 1
        if kind == "(":
            mask = self.expr()
            closing = self.peek()
            if closing is None or closing[0] != ")":
                raise QueryParseError("missing ')'", pos)
            self.at += 1
            return mask
        if kind == "word":
            return self.lemma_docs(value)
        if kind == "quoted":
            words = value.split()
            if len(words) == 1:
                return self.lemma_docs(words[0])
            if len(words) == 2:
                return self.bigram_docs(words[0], words[1])
            raise QueryParseError("quoted term must hold 1 or 2 words", pos)
        raise QueryParseError(f"unexpected {value!r}", pos)

    def lemma_docs(self, word: str) -> np.ndarray:
        mask = np.zeros(self.index.doc_count, bool)
        lid = self.index.lemma_id(word)
        if lid is not None:
            df_docs, _, df_offsets = self.index._ensure_df()
            mask[df_docs[df_offsets[lid]:df_offsets[lid + 1]]] = True
        return mask

    def bigram_docs(self, first: str, second: str) -> np.ndarray:
        mask = np.zeros(self.index.doc_count, bool)
        hits = _bigram_positions(self.index, first.lower(), second.lower())
        if len(hits):
            mask[self.index.doc_ids_of(hits)] = True
        return mask


def select_scope(index: Index, query: str) -> Scope:
    """Evaluate a boolean query into a scope; an empty result only warns."""
    mask = _Parser(index, query).parse()
    ordinals = np.flatnonzero(mask).astype(np.int64)
    if len(ordinals) == 0:
        log.warning("query %r selected no documents", query)
    return Scope(index, ordinals)

"""Rule-based grammatical relations around a node, and ranked sketch tables.

Five linear patterns over coarse POS tags, all confined to one sentence:

  modifier_of       [ADJ|NOUN|PROPN]{1,3} run immediately before the node,
                    each token captured
  noun_modified_by  node immediately before a NOUN/PROPN (that noun captured)
  and_or            node (,)? and|or X  — or mirrored — with X matching the
                    node head's coarse POS
  prep_phrase_pre   ADP immediately before the node ("in NODE")
  prep_phrase_post  node followed by an ADP ("NODE in ...")

On corpora without POS tags only the prepositional patterns apply, seeded
by a closed preposition list.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .colloc import CollocateRow, log_dice, rank_rows
from .core import NodeSpec, POS_IDS
from .errors import UntaggedScopeError
from .index import Scope, count_node

RELATIONS = (
    "modifier_of",
    "noun_modified_by",
    "and_or",
    "prep_phrase_pre",
    "prep_phrase_post",
)
PREP_RELATIONS = frozenset({"prep_phrase_pre", "prep_phrase_post"})

# prepositions recognized on untagged (all-X) corpora
CLOSED_PREPOSITIONS = frozenset(
    {"of", "in", "for", "to", "with", "on", "as", "into", "like", "about"}
)

NOMINAL = frozenset({"NOUN", "PROPN"})
MODIFIER_POS = frozenset({"ADJ", "NOUN", "PROPN"})
MODIFIER_RUN_CAP = 3  # longest premodifier run and longest pattern arm
CONJUNCTIONS = frozenset({"and", "or"})

DEFAULT_TOP = 15


@dataclass(frozen=True)
class SlotSpec:
    """One token constraint in a relation pattern."""

    pos: frozenset[str] | None = None
    lemmas: frozenset[str] | None = None
    optional: bool = False
    capture: bool = False
    repeat: bool = False  # greedy run, capped at MODIFIER_RUN_CAP
    match_node_pos: bool = False
    prep: bool = False


@dataclass(frozen=True)
class RelationPattern:
    """A relation: slots walk outward from the node anchor.

    `pre` slots match leftward starting at the token just before the node;
    `post` slots match rightward starting just after it. Exactly one slot
    carries capture=True; the captured token's lemma is the collocate.
    """

    name: str
    pre: tuple[SlotSpec, ...] = ()
    post: tuple[SlotSpec, ...] = ()


PATTERNS = (
    RelationPattern(
        "modifier_of",
        pre=(SlotSpec(pos=MODIFIER_POS, capture=True, repeat=True),),
    ),
    RelationPattern(
        "noun_modified_by",
        post=(SlotSpec(pos=NOMINAL, capture=True),),
    ),
    RelationPattern(
        "and_or",
        post=(
            SlotSpec(pos=frozenset({"PUNCT"}), lemmas=frozenset({","}), optional=True),
            SlotSpec(lemmas=CONJUNCTIONS),
            SlotSpec(capture=True, match_node_pos=True),
        ),
    ),
    RelationPattern(
        "and_or",
        pre=(
            SlotSpec(lemmas=CONJUNCTIONS),
            SlotSpec(pos=frozenset({"PUNCT"}), lemmas=frozenset({","}), optional=True),
            SlotSpec(capture=True, match_node_pos=True),
        ),
    ),
    RelationPattern("prep_phrase_pre", pre=(SlotSpec(prep=True, capture=True),)),
    RelationPattern("prep_phrase_post", post=(SlotSpec(prep=True, capture=True),)),
)


class _SentenceView:
    """Token accessors for the pattern matcher."""

    def __init__(self, index):
        self.lemma_ids = index.token_lemma_ids
        self.pos_ids = index.pos_ids
        self.lemmas = index.lemmas
        self.pos_names = {v: k for k, v in POS_IDS.items()}
        self.adp_id = POS_IDS["ADP"]
        self.x_id = POS_IDS["X"]

    def pos(self, q: int) -> str:
        return self.pos_names[int(self.pos_ids[q])]

    def lemma(self, q: int) -> str:
        return self.lemmas[int(self.lemma_ids[q])]

    def is_prep(self, q: int) -> bool:
        pid = int(self.pos_ids[q])
        if pid == self.adp_id:
            return True
        return pid == self.x_id and self.lemma(q) in CLOSED_PREPOSITIONS


def _slot_matches(view: _SentenceView, slot: SlotSpec, q: int, node_pos: str) -> bool:
    if slot.prep:
        return view.is_prep(q)
    if slot.match_node_pos and view.pos(q) != node_pos:
        return False
    if slot.pos is not None and view.pos(q) not in slot.pos:
        return False
    if slot.lemmas is not None and view.lemma(q) not in slot.lemmas:
        return False
    return True


def _match_arm(
    view: _SentenceView,
    slots: tuple[SlotSpec, ...],
    start: int,
    step: int,
    lo: int,
    hi: int,
    node_pos: str,
) -> list[str] | None:
    """Walk one pattern arm outward; return captured lemmas or None."""
    q = start
    captured: list[str] = []
    for slot in slots:
        if slot.repeat:
            taken = 0
            while taken < MODIFIER_RUN_CAP and lo <= q < hi and _slot_matches(view, slot, q, node_pos):
                if slot.capture:
                    captured.append(view.lemma(q))
                q += step
                taken += 1
            if taken == 0:
                return None
            continue
        if lo <= q < hi and _slot_matches(view, slot, q, node_pos):
            if slot.capture:
                captured.append(view.lemma(q))
            q += step
        elif not slot.optional:
            return None
    return captured


def scope_is_tagged(scope: Scope) -> bool:
    """True when any scope token carries a real POS tag.

    X and PUNCT don't count: the plain-text tokenizer emits exactly those
    two, and such corpora only support the prepositional patterns.
    """
    untagged = np.array([POS_IDS["X"], POS_IDS["PUNCT"]], np.uint8)
    index = scope.index
    if scope.doc_count == index.doc_count:
        return bool(np.any(~np.isin(index.pos_ids, untagged)))
    for ordinal in scope.doc_ordinals.tolist():
        doc = index.doc_table[ordinal]
        if np.any(~np.isin(index.pos_ids[doc.start:doc.end], untagged)):
            return True
    return False


def match_relations(
    scope: Scope,
    node: NodeSpec,
    relations: tuple[str, ...] | None = None,
) -> dict[str, Counter]:
    """Per-relation collocate counts for every node hit in the scope."""
    wanted = tuple(relations) if relations else RELATIONS
    for name in wanted:
        if name not in RELATIONS:
            raise ValueError(f"unknown relation {name!r}")
    if not scope_is_tagged(scope):
        non_prep = [name for name in wanted if name not in PREP_RELATIONS]
        if non_prep:
            raise UntaggedScopeError(
                f"relations {non_prep} need POS tags; only prepositional "
                "patterns work on untagged corpora"
            )

    index = scope.index
    view = _SentenceView(index)
    counts: dict[str, Counter] = {name: Counter() for name in wanted}
    hits = count_node(scope, node).positions
    if len(hits) == 0:
        return counts

    sent_ids = index.sent_ids
    sent_starts = index.sent_starts
    n = index.token_count
    span = node.span
    for p in hits.tolist():
        sid = int(sent_ids[p])
        lo = int(sent_starts[sid])
        hi = int(sent_starts[sid + 1]) if sid + 1 < len(sent_starts) else n
        node_pos = view.pos(p + span - 1)
        for pattern in PATTERNS:
            if pattern.name not in counts:
                continue
            if pattern.pre:
                got = _match_arm(view, pattern.pre, p - 1, -1, lo, hi, node_pos)
            else:
                got = _match_arm(view, pattern.post, p + span, +1, lo, hi, node_pos)
            if got:
                counts[pattern.name].update(got)
    return counts


def sketch(
    scope: Scope,
    node: NodeSpec,
    top: int = DEFAULT_TOP,
    min_cof: int = 1,
    relations: tuple[str, ...] | None = None,
) -> dict[str, list[CollocateRow]]:
    """Four ranked relation tables: modifiers, modified nouns, and/or,
    and a merged prepositional table.

    Grammatical tables are scored by logDice with scope-wide marginals;
    prepositional rows rank by raw frequency (their share of node hits is
    derived as co_f / node_f at render time).
    """
    counts = match_relations(scope, node, relations)
    node_f = count_node(scope, node).f
    tables: dict[str, list[CollocateRow]] = {}
    for name in ("modifier_of", "noun_modified_by", "and_or"):
        if name in counts:
            tables[name] = rank_rows(
                scope, dict(counts[name]), node_f, relation=name, min_cof=min_cof, top=top
            )
    prep_rows: list[CollocateRow] = []
    for name in ("prep_phrase_pre", "prep_phrase_post"):
        if name not in counts:
            continue
        if counts[name]:
            scope_f = scope.lemma_frequencies()
        for lemma, co_f in counts[name].items():
            if co_f < min_cof:
                continue
            lid = scope.index.lemma_id(lemma)
            coll_f = int(scope_f[lid]) if lid is not None else 0
            prep_rows.append(
                CollocateRow(lemma, name, co_f, node_f, coll_f, log_dice(co_f, node_f, coll_f))
            )
    prep_rows.sort(key=lambda r: (-r.co_f, r.collocate, r.relation == "prep_phrase_post"))
    if "prep_phrase_pre" in counts or "prep_phrase_post" in counts:
        tables["prep_phrase"] = prep_rows[:top]
    return tables

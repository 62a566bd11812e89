"""Windowed co-occurrence counting and logDice association scoring."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import NodeSpec, POS_IDS
from .errors import NodeAbsentError, ZeroCooccurrenceError
from .index import Scope, count_node

DEFAULT_WINDOW = 5
DEFAULT_MIN_COF = 5
DEFAULT_TOP = 15

LOG_DICE_CEILING = 14.0


@dataclass(frozen=True, slots=True)
class CollocateRow:
    collocate: str
    relation: str  # grammatical relation name or "window"
    co_f: int
    node_f: int
    coll_f: int
    log_dice: float


def log_dice(f_xy: int, f_x: int, f_y: int) -> float:
    """14 + log2(2 * f_xy / (f_x + f_y)); symmetric in the marginals."""
    if f_xy < 1:
        raise ZeroCooccurrenceError("logDice needs a co-occurrence count >= 1")
    return 14.0 + math.log2(2.0 * f_xy / (f_x + f_y))


def cooccurrences(
    scope: Scope,
    node: NodeSpec,
    window: int = DEFAULT_WINDOW,
    skip_tags: frozenset[str] = frozenset({"PUNCT"}),
) -> dict[str, int]:
    """Per-lemma neighbor counts within +/-window of each node hit.

    Each (hit, position) pairing counts once; windows never cross a
    sentence boundary; the hit's own tokens and tokens with a tag in
    skip_tags are excluded.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    index = scope.index
    hits = count_node(scope, node).positions
    if len(hits) == 0:
        return {}

    from . import kernels

    excluded = np.zeros(index.token_count, bool)
    for tag in skip_tags:
        excluded |= index.pos_ids == POS_IDS[tag]
    counts = kernels.window_counts(
        index.token_lemma_ids,
        index.sent_ids,
        excluded,
        hits,
        node.span,
        window,
        index.vocab_size,
    )
    present = np.flatnonzero(counts)
    return {index.lemmas[i]: int(counts[i]) for i in present.tolist()}


def collocates(
    scope: Scope,
    node: NodeSpec,
    relation_source: str = "window",
    window: int = DEFAULT_WINDOW,
    min_cof: int = DEFAULT_MIN_COF,
    top: int = DEFAULT_TOP,
    skip_tags: frozenset[str] = frozenset({"PUNCT", "NUM"}),
) -> list[CollocateRow]:
    """Ranked collocate rows for a node.

    With relation_source="window", candidates come from windowed
    co-occurrence; "sketch" delegates to the grammatical relation tables
    and returns their union. Rows are ordered by logDice desc, co-count
    desc, then lemma.
    """
    if top < 1:
        raise ValueError("top must be >= 1")
    hits = count_node(scope, node)
    if hits.f == 0:
        raise NodeAbsentError(f"node {node.printed()!r} has no hits in scope")
    if relation_source == "sketch":
        from .sketch import sketch

        tables = sketch(scope, node, top=top, min_cof=min_cof)
        return [row for rows in tables.values() for row in rows]
    if relation_source != "window":
        raise ValueError(f"unknown relation source {relation_source!r}")

    counts = cooccurrences(scope, node, window, skip_tags)
    return rank_rows(scope, counts, hits.f, relation="window", min_cof=min_cof, top=top)


def rank_rows(
    scope: Scope,
    counts: dict[str, int],
    node_f: int,
    relation: str,
    min_cof: int,
    top: int,
) -> list[CollocateRow]:
    """Score counts with scope-wide marginals and rank/truncate them."""
    scope_f = scope.lemma_frequencies()
    rows = []
    for lemma, co_f in counts.items():
        if co_f < min_cof:
            continue
        lid = scope.index.lemma_id(lemma)
        coll_f = int(scope_f[lid]) if lid is not None else 0
        rows.append(
            CollocateRow(
                collocate=lemma,
                relation=relation,
                co_f=co_f,
                node_f=node_f,
                coll_f=coll_f,
                log_dice=log_dice(co_f, node_f, coll_f),
            )
        )
    rows.sort(key=lambda r: (-r.log_dice, -r.co_f, r.collocate))
    return rows[:top]

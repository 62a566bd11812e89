"""Node-centered word network built from collocate tables, exported as
DOT or a JSON node/link graph. Emission is deterministic: equal networks
produce equal bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .colloc import CollocateRow
from .core import NodeSpec
from .errors import UnknownFormatError
from .sketch import PREP_RELATIONS

GRAPH_FORMATS = ("dot", "json-graph")


@dataclass(frozen=True, slots=True)
class NetworkEdge:
    collocate: str
    relations: tuple[str, ...]  # sorted labels this collocate appeared under
    weight: float  # max over merged rows: logDice, or hit share for preps
    co_f: int


@dataclass(frozen=True, slots=True)
class WordNetwork:
    center: NodeSpec
    edges: tuple[NetworkEdge, ...]


def _row_weight(row: CollocateRow) -> float:
    if row.relation in PREP_RELATIONS:
        return row.co_f / row.node_f if row.node_f else 0.0
    return row.log_dice


def build_network(
    center: NodeSpec,
    tables: dict[str, list[CollocateRow]],
    top: int = 15,
) -> WordNetwork:
    """Merge the top rows per relation into one edge set.

    Duplicate collocates keep the maximum weight and the union of their
    relation labels; the center's own forms never become edges.
    """
    own = set(center.forms) | {form.lower() for form in center.forms}
    merged: dict[str, dict] = {}
    for rows in tables.values():
        for row in rows[:top]:
            if row.collocate in own:
                continue
            weight = _row_weight(row)
            entry = merged.setdefault(
                row.collocate, {"relations": set(), "weight": weight, "co_f": row.co_f}
            )
            entry["relations"].add(row.relation)
            if (weight, row.co_f) > (entry["weight"], entry["co_f"]):
                entry["weight"] = weight
                entry["co_f"] = row.co_f
    edges = tuple(
        NetworkEdge(lemma, tuple(sorted(e["relations"])), e["weight"], e["co_f"])
        for lemma, e in sorted(
            merged.items(), key=lambda kv: (-kv[1]["weight"], kv[0])
        )
    )
    return WordNetwork(center, edges)


def emit_graph(network: WordNetwork, fmt: str) -> str:
    if fmt == "dot":
        return _emit_dot(network)
    if fmt == "json-graph":
        return _emit_json_graph(network)
    raise UnknownFormatError(f"unknown graph format {fmt!r}; use one of {GRAPH_FORMATS}")


def _penwidths(weights: list[float]) -> list[float]:
    """Min-max rescale to [1, 5]; a degenerate all-equal set renders at 3."""
    if not weights:
        return []
    lo, hi = min(weights), max(weights)
    if hi == lo:
        return [3.0] * len(weights)
    return [1.0 + 4.0 * (w - lo) / (hi - lo) for w in weights]


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _emit_dot(network: WordNetwork) -> str:
    center = network.center.printed()
    lines = ["graph wordnet {"]
    lines.append(f"  {_dot_quote(center)} [shape=doublecircle];")
    widths = _penwidths([e.weight for e in network.edges])
    for edge, width in zip(network.edges, widths):
        label = ",".join(edge.relations)
        lines.append(
            f"  {_dot_quote(center)} -- {_dot_quote(edge.collocate)} "
            f'[label={_dot_quote(label)}, weight={edge.weight:.4f}, penwidth={width:.2f}];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def _emit_json_graph(network: WordNetwork) -> str:
    center = network.center.printed()
    nodes = [{"id": center, "label": center}]
    nodes.extend({"id": e.collocate, "label": e.collocate} for e in network.edges)
    links = [
        {
            "source": center,
            "target": e.collocate,
            "relation": ",".join(e.relations),
            "weight": e.weight,
            "co_f": e.co_f,
        }
        for e in network.edges
    ]
    return json.dumps({"center": center, "nodes": nodes, "links": links}, indent=2) + "\n"

import json

import jsonschema
import pyparsing as pp
import pytest

import corpex
from corpex.colloc import CollocateRow
from corpex.errors import UnknownFormatError
from corpex.network import build_network, emit_graph, _penwidths
from corpex.sketch import sketch


def make_row(lemma, relation="and_or", co_f=5, node_f=20, coll_f=10, log_dice=10.0):
    return CollocateRow(lemma, relation, co_f, node_f, coll_f, log_dice)


JSON_GRAPH_SCHEMA = {
    "type": "object",
    "required": ["center", "nodes", "links"],
    "additionalProperties": False,
    "properties": {
        "center": {"type": "string"},
        "nodes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "label"],
                "additionalProperties": False,
                "properties": {"id": {"type": "string"}, "label": {"type": "string"}},
            },
        },
        "links": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["source", "target", "relation", "weight", "co_f"],
                "additionalProperties": False,
                "properties": {
                    "source": {"type": "string"},
                    "target": {"type": "string"},
                    "relation": {"type": "string"},
                    "weight": {"type": "number"},
                    "co_f": {"type": "integer"},
                },
            },
        },
    },
}


def dot_grammar():
    """Strict parser for the emitted DOT subset (undirected graph)."""
    ident = pp.QuotedString('"', esc_char="\\") | pp.Word(pp.alphanums + "_.")
    attr = pp.Group(pp.Word(pp.alphas + "_") + pp.Suppress("=") + (ident | pp.pyparsing_common.number))
    attr_list = pp.Suppress("[") + pp.Opt(pp.DelimitedList(attr)) + pp.Suppress("]")
    edge_stmt = pp.Group(ident + pp.Suppress("--") + ident + pp.Opt(attr_list))
    node_stmt = pp.Group(ident + pp.Opt(attr_list))
    stmt = (edge_stmt | node_stmt) + pp.Suppress(";")
    return (
        pp.Suppress(pp.Keyword("graph"))
        + pp.Word(pp.alphanums + "_")
        + pp.Suppress("{")
        + pp.ZeroOrMore(stmt)
        + pp.Suppress("}")
    )


DOT = dot_grammar()


class TestBuildNetwork:
    def test_empty_tables(self):
        net = build_network(corpex.make_node("VR", "initialism"), {})
        assert net.edges == ()

    def test_truncates_to_top(self):
        rows = [make_row(f"w{i:02d}", log_dice=13 - i * 0.1) for i in range(20)]
        net = build_network(corpex.make_node("vr", "lemma"), {"window": rows}, top=15)
        assert len(net.edges) == 15

    def test_merges_duplicates_keeping_max_weight_and_labels(self):
        tables = {
            "modifier_of": [make_row("shared", "modifier_of", co_f=3, log_dice=9.0)],
            "and_or": [make_row("shared", "and_or", co_f=7, log_dice=12.0)],
        }
        net = build_network(corpex.make_node("vr", "lemma"), tables)
        assert len(net.edges) == 1
        edge = net.edges[0]
        assert edge.relations == ("and_or", "modifier_of")
        assert edge.weight == 12.0
        assert edge.co_f == 7

    def test_no_self_edges(self):
        tables = {"and_or": [make_row("vr", "and_or"), make_row("other", "and_or")]}
        net = build_network(corpex.make_node("VR", "initialism"), tables)
        assert [e.collocate for e in net.edges] == ["other"]

    def test_prep_rows_weighted_by_hit_share(self):
        row = make_row("of", "prep_phrase_pre", co_f=5, node_f=20, log_dice=3.0)
        net = build_network(corpex.make_node("vr", "lemma"), {"prep_phrase": [row]})
        assert net.edges[0].weight == 0.25

    def test_fixture_edge_set_matches_manual_merge(self, focus_scope):
        node = corpex.make_node("VR", "initialism")
        tables = sketch(focus_scope, node, min_cof=1)
        net = build_network(node, tables, top=15)
        manual = set()
        for rows in tables.values():
            for r in rows[:15]:
                if r.collocate not in ("vr", "VR"):
                    manual.add(r.collocate)
        assert {e.collocate for e in net.edges} == manual


class TestEmission:
    def network(self):
        tables = {
            "and_or": [make_row("ar", log_dice=12.5, co_f=3)],
            "noun_modified_by": [make_row("headset", "noun_modified_by", log_dice=12.9, co_f=5)],
            "prep_phrase": [make_row("in", "prep_phrase_pre", co_f=2, node_f=20, log_dice=5.0)],
        }
        return build_network(corpex.make_node("VR", "initialism"), tables)

    def test_unknown_format(self):
        with pytest.raises(UnknownFormatError):
            emit_graph(self.network(), "graphml")

    def test_zero_edge_graph_is_valid(self):
        net = build_network(corpex.make_node("VR", "initialism"), {})
        DOT.parse_string(emit_graph(net, "dot"), parse_all=True)
        doc = json.loads(emit_graph(net, "json-graph"))
        jsonschema.validate(doc, JSON_GRAPH_SCHEMA)
        assert doc["nodes"] == [{"id": "VR", "label": "VR"}]
        assert doc["links"] == []

    def test_deterministic_bytes(self):
        net = self.network()
        assert emit_graph(net, "dot") == emit_graph(net, "dot")
        assert emit_graph(net, "json-graph") == emit_graph(net, "json-graph")

    def test_dot_parses_and_has_center(self):
        text = emit_graph(self.network(), "dot")
        parsed = DOT.parse_string(text, parse_all=True)
        flat = text
        assert '"VR" [shape=doublecircle];' in flat
        assert "--" in flat

    def test_json_schema_and_weight_roundtrip(self):
        net = self.network()
        doc = json.loads(emit_graph(net, "json-graph"))
        jsonschema.validate(doc, JSON_GRAPH_SCHEMA)
        weights = {e.collocate: e.weight for e in net.edges}
        for link in doc["links"]:
            assert link["source"] == "VR"
            assert link["weight"] == weights[link["target"]]

    def test_each_edge_in_one_relation_group_per_label(self):
        doc = json.loads(emit_graph(self.network(), "json-graph"))
        seen = set()
        for link in doc["links"]:
            for label in link["relation"].split(","):
                key = (label, link["target"])
                assert key not in seen
                seen.add(key)

    def test_penwidth_rescaling(self):
        assert _penwidths([2.0, 2.0]) == [3.0, 3.0]
        widths = _penwidths([1.0, 3.0, 5.0])
        assert widths[0] == 1.0
        assert widths[-1] == 5.0
        assert widths[1] == 3.0

    def test_fixture_outputs_validate(self, focus_scope):
        node = corpex.make_node("virtual reality", "bigram")
        tables = sketch(focus_scope, node, min_cof=1)
        net = build_network(node, tables)
        DOT.parse_string(emit_graph(net, "dot"), parse_all=True)
        jsonschema.validate(json.loads(emit_graph(net, "json-graph")), JSON_GRAPH_SCHEMA)

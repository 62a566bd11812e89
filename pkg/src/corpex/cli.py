"""Command-line front end.

Subcommands: index, subcorpus, stats, keywords, collocates, sketch,
network. Options can come from a JSON config file (--config or the
CORPEX_CONFIG environment variable); explicit flags override file values.
Exit codes: 0 success, 2 usage/config errors, 3 data/format errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .colloc import collocates
from .core import load_pos_map, make_node, parse_vertical, tokenize_plain
from .errors import CorpexError, DuplicateDocIdError, UsageError
from .index import build_index, load_index, load_scope, save_index, save_scope, whole_scope
from .keyness import keywords
from .network import GRAPH_FORMATS, build_network, emit_graph
from .queries import PRESETS, select_scope
from .reports import (
    REPORT_FORMATS,
    collocates_report,
    keywords_report,
    report_header,
    sketch_report,
    stats_report,
)
from .sketch import RELATIONS, sketch
from .stats import profile

log = logging.getLogger("corpex")


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="corpex: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as err:
        print(f"corpex: error: {err}", file=sys.stderr)
        return 2
    except (CorpexError, OSError) as err:
        print(f"corpex: error: {err}", file=sys.stderr)
        return 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="corpex", description=__doc__)
    parser.add_argument("--version", action="version", version=f"corpex {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file (or set CORPEX_CONFIG)")
        p.add_argument("--threads", type=int, help="parallelism bound (never affects output)")
        p.add_argument("--seed-order", type=int, dest="seed_order",
                       help="shuffle internal work order; output must not change")

    p = sub.add_parser("index", help="parse .vert/.txt inputs and build an index")
    p.add_argument("inputs", nargs="+", help="vertical/plain files or directories")
    p.add_argument("-o", "--out", required=True, help="index file to write")
    p.add_argument("--pos-map", dest="pos_map", help="JSON raw-to-coarse tag mapping")
    common(p)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("subcorpus", help="select a document scope by boolean query")
    p.add_argument("--index", required=True)
    p.add_argument("--query", help='e.g. \'("virtual reality" OR "VR") AND ("anxiety")\'')
    p.add_argument("--preset", choices=sorted(PRESETS), help="named query preset")
    p.add_argument("-o", "--out", required=True, help="scope file to write")
    common(p)
    p.set_defaults(func=cmd_subcorpus)

    def analysis(p, node=True):
        p.add_argument("--index", required=True)
        p.add_argument("--scope", help="scope file; omit for the whole corpus")
        if node:
            p.add_argument("--node", required=True, help="node text")
            p.add_argument("--node-kind", dest="node_kind",
                           choices=["lemma", "bigram", "initialism"])
        p.add_argument("--format", choices=REPORT_FORMATS)
        p.add_argument("--out", help="write report here instead of stdout")
        common(p)

    p = sub.add_parser("stats", help="frequency/dispersion profile of one node")
    analysis(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("keywords", help="keyness of a focus scope vs its complement")
    analysis(p, node=False)
    p.add_argument("--smoothing", type=float, help="simple-maths k (default 1)")
    p.add_argument("--min-f", dest="min_f", type=int, help="minimum focus frequency (default 5)")
    p.add_argument("--top", type=int, help="rows to report (default 15)")
    p.set_defaults(func=cmd_keywords)

    p = sub.add_parser("collocates", help="ranked collocates of a node")
    analysis(p)
    p.add_argument("--source", choices=["window", "sketch"], help="candidate source")
    p.add_argument("--window", type=int, help="token window each side (default 5)")
    p.add_argument("--min-cof", dest="min_cof", type=int, help="minimum co-count (default 5)")
    p.add_argument("--top", type=int)
    p.add_argument("--include-num", dest="include_num", action="store_true", default=None)
    p.add_argument("--include-punct", dest="include_punct", action="store_true", default=None)
    p.set_defaults(func=cmd_collocates)

    p = sub.add_parser("sketch", help="per-relation collocate tables")
    analysis(p)
    p.add_argument("--top", type=int)
    p.add_argument("--min-cof", dest="min_cof", type=int)
    p.add_argument("--relations", help="comma-separated relation subset")
    p.set_defaults(func=cmd_sketch)

    p = sub.add_parser("network", help="word network around a node")
    analysis(p)
    p.add_argument("--source", choices=["sketch", "window"])
    p.add_argument("--top", type=int)
    p.add_argument("--min-cof", dest="min_cof", type=int)
    p.add_argument("--graph-format", dest="graph_format", choices=GRAPH_FORMATS)
    p.set_defaults(func=cmd_network)

    return parser


# --- config merging ---

def _load_config_file(args) -> dict:
    path = args.config or os.environ.get("CORPEX_CONFIG")
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as err:
        raise UsageError(f"cannot read config file {path}: {err}") from err
    if not isinstance(cfg, dict):
        raise UsageError(f"config file {path} must hold a JSON object")
    return cfg


def effective_config(args, defaults: dict) -> dict:
    """Flags override config-file values, which override built-in defaults."""
    file_cfg = _load_config_file(args)
    out = {}
    for key, default in defaults.items():
        value = getattr(args, key, None)
        if value is None:
            value = file_cfg.get(key, default)
        out[key] = value
    return out


def _threads(args) -> int:
    cfg = effective_config(args, {"threads": None})
    return cfg["threads"] or os.cpu_count() or 1


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _infer_kind(node_text: str) -> str:
    parts = node_text.split()
    if len(parts) == 2:
        return "bigram"
    if len(parts) == 1 and parts[0].isupper() and parts[0].isalpha():
        return "initialism"
    return "lemma"


def _node_from(cfg: dict):
    kind = cfg.get("node_kind") or _infer_kind(cfg["node"])
    cfg["node_kind"] = kind
    return make_node(cfg["node"], kind)


def _load_scoped(cfg: dict):
    index = load_index(cfg["index"])
    if cfg.get("scope"):
        scope = load_scope(index, cfg["scope"])
        inputs = [("index", cfg["index"]), ("scope", cfg["scope"])]
    else:
        scope = whole_scope(index)
        inputs = [("index", cfg["index"])]
    return scope, inputs


# --- corpus ingestion ---

def _expand_inputs(paths: list[str]) -> list[Path]:
    files: set[Path] = set()
    for raw in paths:
        p = Path(raw)
        if p.is_dir():
            files.update(q for q in p.rglob("*") if q.suffix in (".vert", ".txt"))
        elif p.exists():
            files.add(p)
        else:
            raise UsageError(f"input path {raw} does not exist")
    return sorted(files, key=str)


def _parse_file(path: Path, pos_map):
    if path.suffix == ".vert":
        with open(path, encoding="utf-8") as fh:
            return list(parse_vertical(fh, pos_map))
    if path.suffix == ".txt":
        text = path.read_text(encoding="utf-8")
        return [tokenize_plain(text, doc_id=path.stem, source=path.name)]
    log.warning("skipping %s (unsupported extension)", path)
    return []


def iter_corpus(files: list[Path], pos_map, threads: int, seed_order: int | None):
    """Parse files concurrently, merging in lexicographic file order."""
    if threads > 1 and len(files) > 1:
        from concurrent.futures import ThreadPoolExecutor

        order = list(range(len(files)))
        if seed_order is not None:
            import random

            random.Random(seed_order).shuffle(order)
        results: list = [None] * len(files)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = {pool.submit(_parse_file, files[i], pos_map): i for i in order}
            for fut, i in futures.items():
                results[i] = fut.result()
    else:
        results = [_parse_file(path, pos_map) for path in files]

    seen: set[str] = set()
    for per_file in results:
        for doc, tokens in per_file:
            if doc.doc_id in seen:
                raise DuplicateDocIdError(f"duplicate doc id {doc.doc_id!r} across inputs")
            seen.add(doc.doc_id)
            yield doc, tokens


# --- commands ---

def cmd_index(args) -> int:
    cfg = effective_config(args, {"pos_map": None, "seed_order": None})
    pos_map = load_pos_map(cfg["pos_map"]) if cfg["pos_map"] else None
    threads = _threads(args)
    files = _expand_inputs(args.inputs)
    docs = iter_corpus(files, pos_map, threads, cfg["seed_order"])
    index = build_index(docs, workers=threads, seed_order=cfg["seed_order"])
    save_index(index, args.out)
    log.info("indexed %d docs, %d tokens, %d lemmas -> %s",
             index.doc_count, index.token_count, index.vocab_size, args.out)
    return 0


def cmd_subcorpus(args) -> int:
    cfg = effective_config(args, {"index": None, "query": None, "preset": None})
    if bool(cfg["query"]) == bool(cfg["preset"]):
        raise UsageError("give exactly one of --query or --preset")
    query = cfg["query"] or PRESETS[cfg["preset"]]
    index = load_index(cfg["index"])
    scope = select_scope(index, query)
    save_scope(scope, args.out)
    log.info("scope %s: %d of %d docs, %d tokens",
             args.out, scope.doc_count, index.doc_count, scope.token_count)
    return 0


_REPORT_DEFAULTS = {"index": None, "scope": None, "format": "tsv"}
_NODE_DEFAULTS = {**_REPORT_DEFAULTS, "node": None, "node_kind": None}


def cmd_stats(args) -> int:
    cfg = effective_config(args, _NODE_DEFAULTS)
    node = _node_from(cfg)
    scope, inputs = _load_scoped(cfg)
    p = profile(scope, node)
    header = report_header("stats", cfg, inputs)
    _write(stats_report(node.printed(), p, cfg["format"], header), args.out)
    return 0


def cmd_keywords(args) -> int:
    cfg = effective_config(args, {**_REPORT_DEFAULTS, "smoothing": 1.0, "min_f": 5, "top": 15})
    scope, inputs = _load_scoped(cfg)
    rows = keywords(scope, k=cfg["smoothing"], top=cfg["top"], min_f=cfg["min_f"])
    header = report_header("keywords", cfg, inputs)
    _write(keywords_report(rows, cfg["format"], header), args.out)
    return 0


def cmd_collocates(args) -> int:
    cfg = effective_config(args, {
        **_NODE_DEFAULTS, "source": "window", "window": 5,
        "min_cof": 5, "top": 15, "include_num": False, "include_punct": False,
    })
    node = _node_from(cfg)
    scope, inputs = _load_scoped(cfg)
    skip = set()
    if not cfg["include_punct"]:
        skip.add("PUNCT")
    if not cfg["include_num"]:
        skip.add("NUM")
    rows = collocates(
        scope, node,
        relation_source=cfg["source"],
        window=cfg["window"],
        min_cof=cfg["min_cof"],
        top=cfg["top"],
        skip_tags=frozenset(skip),
    )
    header = report_header("collocates", cfg, inputs)
    _write(collocates_report(rows, cfg["format"], header), args.out)
    return 0


def _parse_relations(raw: str | None):
    if not raw:
        return None
    names = []
    for name in raw.split(","):
        name = name.strip()
        if name == "prep_phrase":
            names.extend(["prep_phrase_pre", "prep_phrase_post"])
        elif name in RELATIONS:
            names.append(name)
        else:
            raise UsageError(f"unknown relation {name!r}; choose from {RELATIONS}")
    return tuple(names)


def cmd_sketch(args) -> int:
    cfg = effective_config(args, {**_NODE_DEFAULTS, "top": 15, "min_cof": 1, "relations": None})
    node = _node_from(cfg)
    scope, inputs = _load_scoped(cfg)
    tables = sketch(scope, node, top=cfg["top"], min_cof=cfg["min_cof"],
                    relations=_parse_relations(cfg["relations"]))
    header = report_header("sketch", cfg, inputs)
    _write(sketch_report(tables, node.printed(), cfg["format"], header), args.out)
    return 0


def cmd_network(args) -> int:
    cfg = effective_config(args, {
        **_NODE_DEFAULTS, "source": "sketch", "top": 15, "min_cof": 1,
        "graph_format": "json-graph",
    })
    del cfg["format"]
    node = _node_from(cfg)
    scope, inputs = _load_scoped(cfg)
    if cfg["source"] == "sketch":
        tables = sketch(scope, node, top=cfg["top"], min_cof=cfg["min_cof"])
    else:
        rows = collocates(scope, node, relation_source="window",
                          min_cof=cfg["min_cof"], top=cfg["top"])
        tables = {"window": rows}
    net = build_network(node, tables, top=cfg["top"])
    text = emit_graph(net, cfg["graph_format"])
    if cfg["graph_format"] == "dot":
        header = "".join(f"// {line[2:]}\n" for line in report_header("network", cfg, inputs))
    else:
        header = ""
    _write(header + text, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())

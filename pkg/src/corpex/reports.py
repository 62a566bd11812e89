"""Report rendering: TSV, aligned text, and JSON emitters with a
reproducibility header (tool version, effective config, input digests).
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from . import __version__
from .colloc import CollocateRow
from .errors import UnknownFormatError
from .keyness import KeynessRow
from .stats import FreqProfile

REPORT_FORMATS = ("tsv", "text", "json")

KEYWORD_COLUMNS = (
    "lemma",
    "f_focus", "f_ref",
    "fpm_focus", "fpm_ref",
    "docf_focus", "docf_ref",
    "reldocf_focus", "reldocf_ref",
    "arf_focus", "arf_ref",
    "aldf_focus", "aldf_ref",
    "score",
)

STATS_COLUMNS = ("node", "f", "fpm", "docf", "reldocf", "arf", "aldf")
COLLOCATE_COLUMNS = ("collocate", "co_f", "log_dice")
SKETCH_COLUMNS = ("relation", "collocate", "co_f", "score")


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def report_header(command: str, config: dict, inputs: list[tuple[str, str]]) -> list[str]:
    """Comment lines embedded in every report; identical inputs and
    configuration yield identical bytes."""
    lines = [
        f"# corpex {__version__}",
        f"# command: {command}",
        f"# config: {json.dumps(config, sort_keys=True)}",
    ]
    for label, path in inputs:
        lines.append(f"# input {label}={path} sha256={file_digest(path)}")
    return lines


def _pct(fraction: float) -> str:
    if 0 < fraction < 0.0001:
        return "< 0.01 %"
    return f"{fraction * 100:.2f} %"


def _share(co_f: int, node_f: int) -> str:
    return f"{co_f / node_f * 100:.1f}%" if node_f else "0.0%"


def render_prep_collocate(row: CollocateRow, node_text: str) -> str:
    if row.relation == "prep_phrase_pre":
        return f'{row.collocate} "{node_text}"'
    if row.relation == "prep_phrase_post":
        return f'"{node_text}" {row.collocate} ...'
    return row.collocate


def _keyword_cells(row: KeynessRow, percent: bool) -> list[str]:
    fo, re_ = row.focus, row.reference
    reldocf = (_pct(fo.rel_docf), _pct(re_.rel_docf)) if percent else (
        f"{fo.rel_docf:.6f}", f"{re_.rel_docf:.6f}")
    return [
        row.lemma,
        str(fo.f), str(re_.f),
        f"{fo.fpm:.2f}", f"{re_.fpm:.2f}",
        str(fo.docf), str(re_.docf),
        reldocf[0], reldocf[1],
        f"{fo.arf:.2f}", f"{re_.arf:.2f}",
        f"{fo.aldf:.2f}", f"{re_.aldf:.2f}",
        f"{row.score:.1f}",
    ]


def _tsv(header: list[str], columns: tuple[str, ...], rows: list[list[str]]) -> str:
    lines = list(header)
    lines.append("\t".join(columns))
    lines.extend("\t".join(cells) for cells in rows)
    return "\n".join(lines) + "\n"


def _aligned(header: list[str], columns: tuple[str, ...], rows: list[list[str]]) -> str:
    widths = [len(c) for c in columns]
    for cells in rows:
        for i, cell in enumerate(cells):
            widths[i] = max(widths[i], len(cell))
    lines = list(header)
    lines.append("  ".join(c.ljust(w) if i == 0 else c.rjust(w)
                           for i, (c, w) in enumerate(zip(columns, widths))))
    for cells in rows:
        lines.append("  ".join(c.ljust(w) if i == 0 else c.rjust(w)
                               for i, (c, w) in enumerate(zip(cells, widths))))
    return "\n".join(lines) + "\n"


def _json_report(header: list[str], rows: list[dict]) -> str:
    return json.dumps({"header": header, "rows": rows}, sort_keys=True, indent=2) + "\n"


def keywords_report(rows: list[KeynessRow], fmt: str, header: list[str]) -> str:
    if fmt == "tsv":
        return _tsv(header, KEYWORD_COLUMNS, [_keyword_cells(r, False) for r in rows])
    if fmt == "text":
        return _aligned(header, KEYWORD_COLUMNS, [_keyword_cells(r, True) for r in rows])
    if fmt == "json":
        return _json_report(header, [
            {
                "lemma": r.lemma,
                "rank": r.rank,
                "score": r.score,
                "focus": _profile_dict(r.focus),
                "reference": _profile_dict(r.reference),
            }
            for r in rows
        ])
    raise UnknownFormatError(f"unknown report format {fmt!r}")


def _profile_dict(p: FreqProfile) -> dict:
    return {
        "f": p.f, "fpm": p.fpm, "docf": p.docf, "rel_docf": p.rel_docf,
        "arf": p.arf, "aldf": p.aldf, "aldf_clamped": p.aldf_clamped,
    }


def collocates_report(rows: list[CollocateRow], fmt: str, header: list[str]) -> str:
    cells = [[r.collocate, str(r.co_f), f"{r.log_dice:.2f}"] for r in rows]
    if fmt == "tsv":
        return _tsv(header, COLLOCATE_COLUMNS, cells)
    if fmt == "text":
        return _aligned(header, COLLOCATE_COLUMNS, cells)
    if fmt == "json":
        return _json_report(header, [
            {
                "collocate": r.collocate, "relation": r.relation, "co_f": r.co_f,
                "node_f": r.node_f, "coll_f": r.coll_f, "log_dice": r.log_dice,
            }
            for r in rows
        ])
    raise UnknownFormatError(f"unknown report format {fmt!r}")


def sketch_report(
    tables: dict[str, list[CollocateRow]],
    node_text: str,
    fmt: str,
    header: list[str],
) -> str:
    """Four-table layout: grammatical tables score by logDice, the merged
    prepositional table shows each row's share of node hits instead."""
    rows = []
    for name, table in tables.items():
        for r in table:
            if name == "prep_phrase":
                rows.append([name, render_prep_collocate(r, node_text),
                             str(r.co_f), _share(r.co_f, r.node_f)])
            else:
                rows.append([name, r.collocate, str(r.co_f), f"{r.log_dice:.2f}"])
    if fmt == "tsv":
        return _tsv(header, SKETCH_COLUMNS, rows)
    if fmt == "text":
        blocks = list(header)
        for name, table in tables.items():
            blocks.append("")
            blocks.append(f"[{name}]")
            if name == "prep_phrase":
                cells = [[render_prep_collocate(r, node_text), str(r.co_f),
                          _share(r.co_f, r.node_f)] for r in table]
                blocks.append(_aligned([], ("collocate", "co_f", "share"), cells).rstrip("\n"))
            else:
                cells = [[r.collocate, str(r.co_f), f"{r.log_dice:.2f}"] for r in table]
                blocks.append(_aligned([], COLLOCATE_COLUMNS, cells).rstrip("\n"))
        return "\n".join(blocks) + "\n"
    if fmt == "json":
        return _json_report(header, [
            {
                "relation": name,
                "collocate": r.collocate,
                "rendered": render_prep_collocate(r, node_text) if name == "prep_phrase" else r.collocate,
                "co_f": r.co_f,
                "node_f": r.node_f,
                "coll_f": r.coll_f,
                "log_dice": r.log_dice,
            }
            for name, table in tables.items()
            for r in table
        ])
    raise UnknownFormatError(f"unknown report format {fmt!r}")


def stats_report(node_text: str, p: FreqProfile, fmt: str, header: list[str]) -> str:
    if fmt == "json":
        return _json_report(header, [{"node": node_text, **_profile_dict(p)}])
    cells = [[
        node_text, str(p.f), f"{p.fpm:.2f}", str(p.docf),
        _pct(p.rel_docf) if fmt == "text" else f"{p.rel_docf:.6f}",
        f"{p.arf:.2f}", f"{p.aldf:.2f}",
    ]]
    if fmt == "tsv":
        return _tsv(header, STATS_COLUMNS, cells)
    if fmt == "text":
        return _aligned(header, STATS_COLUMNS, cells)
    raise UnknownFormatError(f"unknown report format {fmt!r}")

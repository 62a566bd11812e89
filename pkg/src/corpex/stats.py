"""Per-node frequency and dispersion statistics.

ARF and ALDF treat the scope as a circular token stream: gaps between
consecutive hits wrap from the last hit back to the first, which makes
both statistics translation-invariant. Evenly spaced hits give the raw
frequency back; clumping discounts it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import NodeSpec
from .errors import ZeroCorpusError
from .index import Scope, count_node


@dataclass(frozen=True, slots=True)
class FreqProfile:
    f: int
    fpm: float
    docf: int
    rel_docf: float
    arf: float
    aldf: float
    aldf_clamped: bool = False


EMPTY_PROFILE = FreqProfile(0, 0.0, 0, 0.0, 0.0, 0.0)


def per_million(f: int, n: int) -> float:
    """Occurrences per million tokens; unrounded."""
    if n <= 0:
        raise ZeroCorpusError("per-million needs a non-empty scope")
    return f * 1_000_000 / n


def rel_docf(docf: int, d: int) -> float:
    """Document frequency as a fraction of scope documents."""
    if d <= 0:
        raise ZeroCorpusError("relative DOCF needs a non-empty scope")
    return docf / d


def _circular_gaps(positions: np.ndarray, n: int) -> np.ndarray:
    gaps = np.empty(len(positions), np.int64)
    gaps[:-1] = np.diff(positions)
    gaps[-1] = n - positions[-1] + positions[0]
    return gaps


def arf(positions: np.ndarray, n: int) -> float:
    """Average reduced frequency over circular gaps.

    With f hits and v = n / f, each gap contributes min(gap, v) / v, so
    evenly spaced hits score exactly f and a lone hit scores exactly 1.
    """
    positions = np.asarray(positions, np.int64)
    f = len(positions)
    if f == 0:
        return 0.0
    v = n / f
    gaps = _circular_gaps(positions, n)
    return float(np.minimum(gaps, v).sum() / v)


def aldf(positions: np.ndarray, n: int) -> float:
    """Average logarithmic distance frequency.

    f * 2**mean(log2(gap * f / n)) over circular gaps: the raw frequency
    scaled by the ratio of the geometric to the arithmetic mean gap. Even
    spacing gives f; clumping shrinks it toward 0. The result is clamped
    to f, which only engages via floating-point roundoff.
    """
    value, _ = _aldf_with_flag(np.asarray(positions, np.int64), n)
    return value


def _aldf_with_flag(positions: np.ndarray, n: int) -> tuple[float, bool]:
    f = len(positions)
    if f == 0:
        return 0.0, False
    gaps = _circular_gaps(positions, n)
    mean_log = float(np.mean(np.log2(gaps.astype(np.float64)))) + math.log2(f) - math.log2(n)
    value = f * 2.0 ** mean_log
    if value > f:
        return float(f), True
    return value, False


def profile(scope: Scope, node: NodeSpec) -> FreqProfile:
    """All five statistics of a node within one scope."""
    hits = count_node(scope, node)
    return profile_from_positions(scope, hits.positions, hits.docf)


def profile_from_positions(scope: Scope, positions: np.ndarray, docf: int) -> FreqProfile:
    f = len(positions)
    if f == 0:
        return EMPTY_PROFILE
    n = scope.token_count
    local = scope.localize(positions)
    aldf_value, clamped = _aldf_with_flag(local, n)
    return FreqProfile(
        f=f,
        fpm=per_million(f, n),
        docf=docf,
        rel_docf=rel_docf(docf, scope.doc_count),
        arf=arf(local, n),
        aldf=aldf_value,
        aldf_clamped=clamped,
    )

"""Simple Maths keyness: score a focus scope against its complement."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadSmoothingError, EmptyScopeError
from .index import Scope, complement_scope
from .stats import EMPTY_PROFILE, FreqProfile, profile_from_positions

DEFAULT_SMOOTHING = 1.0
DEFAULT_MIN_F = 5
DEFAULT_TOP = 15


@dataclass(frozen=True, slots=True)
class KeynessRow:
    lemma: str
    focus: FreqProfile
    reference: FreqProfile
    score: float
    rank: int


def simple_maths(fpm_focus: float, fpm_ref: float, k: float = DEFAULT_SMOOTHING) -> float:
    """(fpm_focus + k) / (fpm_ref + k) with smoothing constant k > 0."""
    if k <= 0:
        raise BadSmoothingError(f"smoothing constant must be positive, got {k}")
    if fpm_focus < 0 or fpm_ref < 0:
        raise ValueError("per-million frequencies cannot be negative")
    return (fpm_focus + k) / (fpm_ref + k)


def keywords(
    focus: Scope,
    k: float = DEFAULT_SMOOTHING,
    top: int = DEFAULT_TOP,
    min_f: int = DEFAULT_MIN_F,
) -> list[KeynessRow]:
    """Top keyness rows of the focus scope against its complement.

    Every lemma with focus frequency >= min_f is scored; rows are ordered
    by score desc, focus frequency desc, then lemma.
    """
    if k <= 0:
        raise BadSmoothingError(f"smoothing constant must be positive, got {k}")
    if top < 1:
        raise ValueError("top must be >= 1")
    if focus.doc_count == 0 or focus.token_count == 0:
        raise EmptyScopeError("focus scope is empty")
    index = focus.index
    reference = complement_scope(index, focus)

    from . import kernels

    df_docs, df_counts, df_offsets = index._ensure_df()
    f_focus, docf_focus = kernels.scope_counts(df_docs, df_counts, df_offsets, focus.mask)
    f_total = index.lemma_frequencies()
    docf_total = np.diff(df_offsets)
    f_ref = f_total - f_focus
    docf_ref = docf_total - docf_focus

    n_focus = focus.token_count
    n_ref = reference.token_count
    fpm_focus = f_focus * 1_000_000.0 / n_focus
    if n_ref > 0:
        fpm_ref = f_ref * 1_000_000.0 / n_ref
    else:
        fpm_ref = np.zeros_like(fpm_focus)
    scores = (fpm_focus + k) / (fpm_ref + k)

    eligible = np.flatnonzero(f_focus >= max(1, min_f))
    if len(eligible) == 0:
        return []
    order = np.lexsort((eligible, -f_focus[eligible], -scores[eligible]))
    chosen = eligible[order][:top]

    rows = []
    for rank, lid in enumerate(chosen.tolist(), 1):
        lemma = index.lemmas[lid]
        rows.append(
            KeynessRow(
                lemma=lemma,
                focus=_lemma_profile(focus, lid, int(docf_focus[lid])),
                reference=_lemma_profile(reference, lid, int(docf_ref[lid])),
                score=float(scores[lid]),
                rank=rank,
            )
        )
    return rows


def _lemma_profile(scope: Scope, lemma_id: int, docf: int) -> FreqProfile:
    if scope.doc_count == 0 or scope.token_count == 0:
        return EMPTY_PROFILE
    positions = scope.filter_positions(scope.index.positions_of(lemma_id))
    return profile_from_positions(scope, positions, docf)

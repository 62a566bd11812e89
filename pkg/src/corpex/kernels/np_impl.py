"""Pure-numpy kernel implementations."""

from __future__ import annotations

import numpy as np

BACKEND = "numpy"


def scope_counts(df_docs, df_counts, df_offsets, doc_mask):
    """Per-lemma token and document counts restricted to masked documents.

    df_docs/df_counts hold one entry per (lemma, doc) pair, grouped by
    lemma with group boundaries in df_offsets (len V+1; segments may be
    empty). Returns (f, docf) int64 arrays of length V.
    """
    n_lemmas = len(df_offsets) - 1
    if n_lemmas == 0 or len(df_docs) == 0:
        return np.zeros(n_lemmas, np.int64), np.zeros(n_lemmas, np.int64)
    inside = doc_mask[df_docs]
    seg_ids = np.repeat(np.arange(n_lemmas, dtype=np.int64), np.diff(df_offsets))
    picked = seg_ids[inside]
    # counts stay well under 2**53, so float-weighted bincount is exact
    f = np.bincount(
        picked, weights=df_counts[inside].astype(np.float64), minlength=n_lemmas
    ).astype(np.int64)
    docf = np.bincount(picked, minlength=n_lemmas).astype(np.int64)
    return f, docf


def window_counts(lemma_ids, sent_ids, excluded, hits, span, window, vocab):
    """Per-lemma co-occurrence counts within +/-window of each hit.

    A hit occupies positions [p, p+span); neighbors are counted per
    (hit, position) pairing, never across a sentence boundary, and
    positions flagged in `excluded` are skipped.
    """
    counts = np.zeros(vocab, np.int64)
    if len(hits) == 0 or window < 1:
        return counts
    n = len(lemma_ids)
    offs = np.concatenate([np.arange(-window, 0), np.arange(span, span + window)])
    neighbors = hits[:, None] + offs[None, :]
    ok = (neighbors >= 0) & (neighbors < n)
    clipped = np.clip(neighbors, 0, n - 1)
    ok &= sent_ids[clipped] == sent_ids[hits][:, None]
    ok &= ~excluded[clipped]
    picked = clipped[ok]
    if len(picked):
        counts += np.bincount(lemma_ids[picked], minlength=vocab).astype(np.int64)
    return counts

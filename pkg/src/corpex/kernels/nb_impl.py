"""Numba-compiled kernel implementations; same contracts as np_impl."""

from __future__ import annotations

import numpy as np
from numba import njit

BACKEND = "numba"


@njit(cache=True)
def scope_counts(df_docs, df_counts, df_offsets, doc_mask):
    n_lemmas = len(df_offsets) - 1
    f = np.zeros(n_lemmas, np.int64)
    docf = np.zeros(n_lemmas, np.int64)
    for v in range(n_lemmas):
        for j in range(df_offsets[v], df_offsets[v + 1]):
            if doc_mask[df_docs[j]]:
                f[v] += df_counts[j]
                docf[v] += 1
    return f, docf


@njit(cache=True)
def window_counts(lemma_ids, sent_ids, excluded, hits, span, window, vocab):
    counts = np.zeros(vocab, np.int64)
    n = len(lemma_ids)
    for i in range(len(hits)):
        p = hits[i]
        sent = sent_ids[p]
        lo = p - window
        if lo < 0:
            lo = 0
        hi = p + span + window
        if hi > n:
            hi = n
        for q in range(lo, hi):
            if p <= q < p + span:
                continue
            if sent_ids[q] != sent or excluded[q]:
                continue
            counts[lemma_ids[q]] += 1
    return counts

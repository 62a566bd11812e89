"""Hot counting kernels with a numba backend and a pure-numpy fallback.

The backend is picked on first use: ``CORPEX_KERNELS=numpy`` forces the
fallback, ``CORPEX_KERNELS=numba`` requires numba, and by default numba
is used when importable. Both backends produce identical outputs; see
benchmarks/bench_kernels.py for the speed comparison.
"""

from __future__ import annotations

import os

_impl = None


def _resolve():
    global _impl
    if _impl is not None:
        return _impl
    choice = os.environ.get("CORPEX_KERNELS", "auto").strip().lower()
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(f"CORPEX_KERNELS must be 'numba' or 'numpy', got {choice!r}")
    if choice == "numpy":
        from . import np_impl as _impl_mod
    else:
        try:
            from . import nb_impl as _impl_mod
        except ImportError:
            if choice == "numba":
                raise
            from . import np_impl as _impl_mod
    _impl = _impl_mod
    return _impl


def backend_name() -> str:
    return _resolve().BACKEND


def scope_counts(df_docs, df_counts, df_offsets, doc_mask):
    return _resolve().scope_counts(df_docs, df_counts, df_offsets, doc_mask)


def window_counts(lemma_ids, sent_ids, excluded, hits, span, window, vocab):
    return _resolve().window_counts(lemma_ids, sent_ids, excluded, hits, span, window, vocab)

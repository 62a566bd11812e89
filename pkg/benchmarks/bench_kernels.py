#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Runs both backends on the same synthetic inputs and prints a timing
table. The numba numbers exclude the first (compiling) call.

Usage: python benchmarks/bench_kernels.py [--tokens N] [--repeat R]
"""

import argparse
import time

import numpy as np

from corpex.kernels import np_impl

try:
    from corpex.kernels import nb_impl
except ImportError:
    nb_impl = None


def make_inputs(n_tokens, vocab=30_000, docs=2_000, sent_len=25, hits=10_000, seed=42):
    rng = np.random.default_rng(seed)
    lemma_ids = np.clip(rng.zipf(1.3, n_tokens) - 1, 0, vocab - 1).astype(np.int32)
    sent_ids = (np.arange(n_tokens) // sent_len).astype(np.int32)
    excluded = rng.random(n_tokens) < 0.1
    hit_positions = np.sort(
        rng.choice(n_tokens, size=min(hits, n_tokens // 2), replace=False)
    ).astype(np.int64)

    doc_of = (np.arange(n_tokens) // max(1, n_tokens // docs)).astype(np.int64)
    keys = lemma_ids.astype(np.int64) * docs + doc_of
    uniq, counts = np.unique(keys, return_counts=True)
    df_docs = (uniq % docs).astype(np.int64)
    offsets = np.zeros(vocab + 1, np.int64)
    np.cumsum(np.bincount((uniq // docs).astype(np.int64), minlength=vocab), out=offsets[1:])
    mask = rng.random(docs) < 0.15
    return {
        "scope_counts": (df_docs, counts.astype(np.int64), offsets, mask),
        "window_counts": (lemma_ids, sent_ids, excluded, hit_positions, 1, 5, vocab),
    }


def best_of(fn, args, repeat):
    fn(*args)  # warm (numba: compile)
    timings = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        timings.append(time.perf_counter() - t0)
    return min(timings)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--tokens", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    inputs = make_inputs(args.tokens)
    print(f"tokens={args.tokens:,}  repeat={args.repeat}")
    print(f"{'kernel':<15} {'numpy':>12} {'numba':>12} {'speedup':>9}")
    for name in ("scope_counts", "window_counts"):
        t_np = best_of(getattr(np_impl, name), inputs[name], args.repeat)
        if nb_impl is None:
            print(f"{name:<15} {t_np * 1e3:>10.2f}ms {'n/a':>12} {'n/a':>9}")
            continue
        t_nb = best_of(getattr(nb_impl, name), inputs[name], args.repeat)
        out_np = getattr(np_impl, name)(*inputs[name])
        out_nb = getattr(nb_impl, name)(*inputs[name])
        same = all(
            np.array_equal(a, b)
            for a, b in zip(np.atleast_1d(out_np), np.atleast_1d(out_nb))
        ) if isinstance(out_np, tuple) else np.array_equal(out_np, out_nb)
        print(f"{name:<15} {t_np * 1e3:>10.2f}ms {t_nb * 1e3:>10.2f}ms {t_np / t_nb:>8.1f}x"
              + ("" if same else "  MISMATCH"))


if __name__ == "__main__":
    main()

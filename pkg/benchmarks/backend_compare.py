#!/usr/bin/env python3
"""Compare the compiled kernel backend against the pure-Python fallback.

The learned cost models are only as honest as the loops they time: latency
through the pure backend is interpreter dispatch, not memory hierarchy.
This script quantifies that gap per kernel so there is no temptation to
train on the fallback.

    python benchmarks/backend_compare.py [--sizes small|full]
"""

import argparse
import time

import numpy as np

from dscalc.kernels import get_backend


def timed(fn, *args, reps=3):
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter_ns()
        fn(*args)
        best = min(best, time.perf_counter_ns() - t0)
    return best / 1e9


def build_cases(n, rng):
    keys = np.sort(rng.choice(n * 8, n, replace=False)).astype(np.int64)
    vals = rng.integers(0, 2**40, n).astype(np.int64)
    pairs = np.empty(2 * n, np.int64)
    pairs[0::2], pairs[1::2] = keys, vals
    probes = rng.choice(keys, 64).astype(np.int64)
    misses = np.full(16, -1, np.int64)
    out = np.empty(n, np.int64)

    k = n
    pa = rng.integers(0, k - 20, k).astype(np.int64)
    sa = rng.integers(0, 20, 4096).astype(np.int64)
    sab = rng.integers(0, k, 4096).astype(np.int64)
    a = int(rng.integers(1, 2**62)) | 1

    src = rng.integers(0, 2**40, n).astype(np.int64)
    buf, tmp = np.empty_like(src), np.empty_like(src)
    dst = np.empty_like(pairs)

    shift = 64 - int(np.log2(1 << int(np.ceil(np.log2(k)))))
    return [
        ("scan_col_eq (miss)", lambda b: b.scan_col_eq(keys, vals, misses)),
        ("binary_col", lambda b: b.binary_col(keys, vals, probes)),
        ("interp_col", lambda b: b.interp_col(keys, vals, probes)),
        ("random_access", lambda b: b.random_access(pa, sa)),
        ("batched_random_access", lambda b: b.batched_random_access(pa, sab)),
        ("hash_probe_ms", lambda b: b.hash_probe_ms(pa, sa, a, shift)),
        ("quicksort", lambda b: b.quicksort_iter(src, buf, 1)),
        ("mergesort", lambda b: b.mergesort_iter(src, buf, tmp, 1)),
        ("write_unordered_row", lambda b: b.write_unordered_row(dst, pairs, 1)),
        ("scan_col_range", lambda b: b.scan_col_range(keys, vals, probes[:4], out)),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", choices=["small", "full"], default="small")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    n = 1 << (14 if args.sizes == "small" else 18)
    rng = np.random.default_rng(args.seed)
    compiled = get_backend("compiled")
    pure = get_backend("pure")
    cases = build_cases(n, rng)

    print("kernel backend comparison at n=%d" % n)
    print("%-28s %12s %12s %9s" % ("kernel", "compiled", "pure", "speedup"))
    overall = []
    for name, call in cases:
        assert call(compiled) == call(pure), "backends disagree on %s" % name
        tc = timed(call, compiled)
        tp = timed(call, pure)
        overall.append(tp / tc)
        print("%-28s %10.3f ms %10.3f ms %8.1fx" % (name, tc * 1e3, tp * 1e3, tp / tc))
    print("geometric mean speedup: %.1fx" % float(np.exp(np.mean(np.log(overall)))))


if __name__ == "__main__":
    main()

"""Measured reference structures: array, sorted array, hash table, B-tree.

These are real Get paths built over the same kernels the cost models are
trained on. They exist to verify predictions against ground truth on the
host machine: build one at a given size, time a batch of point lookups,
and compare with the synthesized cost of the matching layout spec.
"""

from __future__ import annotations

import math
import time

import numpy as np

from . import builders, kernels
from .instance import DataProfile, build_instance
from .models import HardwareProfile
from .synthesis import cost_get_set

I64_MAX = np.iinfo(np.int64).max

REFERENCE_NAMES = ("array", "sorted_array", "hash_table", "btree")


def make_dataset(n: int, seed: int, domain=(0, 2**40)):
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0xEF]))
    keys = rng.choice(np.int64(domain[1] - domain[0]), size=n, replace=False).astype(np.int64)
    keys += domain[0]
    vals = rng.integers(0, 2**40, size=n, dtype=np.int64)
    return keys, vals


def make_probes(keys, count: int, seed: int):
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0xAB]))
    return rng.choice(keys, size=count).astype(np.int64)


# ---------------------------------------------------------------------------
# builders for the measured structures


def build_array(keys, vals):
    return {"keys": keys.copy(), "vals": vals.copy()}


def build_sorted_array(keys, vals):
    order = np.argsort(keys)
    return {"keys": keys[order], "vals": vals[order]}


def build_hash_table(keys, vals, buckets: int = 100, cap: int = 5):
    idx = (keys % buckets).astype(np.int64)
    order = np.argsort(idx, kind="stable")
    skeys, svals, sidx = keys[order], vals[order], idx[order]
    counts = np.bincount(sidx, minlength=buckets)
    pages_per_bucket = np.maximum(1, np.ceil(counts / cap).astype(np.int64))
    total_pages = int(pages_per_bucket.sum())
    pkeys = np.full(total_pages * cap, I64_MAX, np.int64)
    pvals = np.zeros(total_pages * cap, np.int64)
    pcounts = np.zeros(total_pages, np.int64)
    nexts = np.full(total_pages, -1, np.int64)
    heads = np.full(buckets, -1, np.int64)
    page = 0
    offset = 0
    for b in range(buckets):
        c = int(counts[b])
        heads[b] = page
        taken = 0
        while True:
            take = min(cap, c - taken)
            pkeys[page * cap: page * cap + take] = skeys[offset + taken: offset + taken + take]
            pvals[page * cap: page * cap + take] = svals[offset + taken: offset + taken + take]
            pcounts[page] = take
            taken += take
            if taken >= c:
                page += 1
                break
            nexts[page] = page + 1
            page += 1
        offset += c
    return {
        "heads": heads, "nexts": nexts, "pkeys": pkeys, "pvals": pvals,
        "pcounts": pcounts, "cap": cap, "buckets": buckets,
    }


def build_btree(keys, vals, fanout: int = 20, cap: int = 250):
    order = np.argsort(keys)
    skeys, svals = keys[order], vals[order]
    n = len(skeys)
    pages = max(1, math.ceil(n / cap))
    nlevels = 0
    while fanout**nlevels < pages:
        nlevels += 1
    slots = fanout**nlevels  # leaf slots after padding to a full tree
    leaf_keys = np.full(slots * cap, I64_MAX, np.int64)
    leaf_vals = np.zeros(slots * cap, np.int64)
    leaf_keys[:n] = skeys
    leaf_vals[:n] = svals
    # min key of each leaf slot (MAX for absent leaves)
    mins = np.full(slots, I64_MAX, np.int64)
    for p in range(pages):
        mins[p] = leaf_keys[p * cap]
    nf = fanout - 1
    level_fences = []
    cur = mins
    for level in range(nlevels - 1, -1, -1):
        nodes = fanout**level
        fences = np.full(nodes * nf, I64_MAX, np.int64)
        nxt = np.full(nodes, I64_MAX, np.int64)
        for node in range(nodes):
            base = node * fanout
            nxt[node] = cur[base]
            for j in range(nf):
                child = base + j + 1
                fences[node * nf + j] = cur[child] if child < len(cur) else I64_MAX
        level_fences.append(fences)
        cur = nxt
    level_fences.reverse()
    offsets = np.zeros(nlevels, np.int64)
    total = 0
    for i, f in enumerate(level_fences):
        offsets[i] = total
        total += len(f)
    flat = np.concatenate(level_fences) if level_fences else np.zeros(0, np.int64)
    return {
        "fences": flat, "offsets": offsets, "nlevels": nlevels, "fanout": fanout,
        "leaf_keys": leaf_keys, "leaf_vals": leaf_vals, "cap": cap,
    }


def run_get(name: str, state: dict, probes, backend=None):
    b = backend or kernels.backend
    if name == "array":
        return b.ref_array_get(state["keys"], state["vals"], probes)
    if name == "sorted_array":
        return b.ref_sorted_get(state["keys"], state["vals"], probes)
    if name == "hash_table":
        return b.ref_hash_get(
            state["heads"], state["nexts"], state["pkeys"], state["pvals"],
            state["pcounts"], state["cap"], state["buckets"], probes,
        )
    if name == "btree":
        return b.ref_btree_get(
            state["fences"], state["offsets"], state["nlevels"], state["fanout"],
            state["leaf_keys"], state["leaf_vals"], state["cap"], probes,
        )
    raise ValueError("unknown reference structure %r" % name)


def build_structure(name: str, keys, vals, hash_buckets: int = 100):
    if name == "array":
        return build_array(keys, vals)
    if name == "sorted_array":
        return build_sorted_array(keys, vals)
    if name == "hash_table":
        return build_hash_table(keys, vals, buckets=hash_buckets)
    if name == "btree":
        return build_btree(keys, vals)
    raise ValueError("unknown reference structure %r" % name)


def measure_get_latency(
    name: str, n_entries: int, n_queries: int = 100, seed: int = 42,
    backend=None, min_seconds: float = 0.02, hash_buckets: int = 100,
) -> float:
    """Average measured seconds per Get over the built structure."""
    keys, vals = make_dataset(n_entries, seed)
    state = build_structure(name, keys, vals, hash_buckets)
    probes = make_probes(keys, n_queries, seed)
    run_get(name, state, probes, backend)  # warm up
    reps = 1
    for _ in range(24):
        t0 = time.perf_counter_ns()
        for _ in range(reps):
            run_get(name, state, probes, backend)
        elapsed = (time.perf_counter_ns() - t0) / 1e9
        if elapsed >= min_seconds:
            break
        reps *= 4
    return elapsed / (reps * len(probes))


def spec_for(name: str, n_entries: int, hash_buckets: int = 100):
    if name == "array":
        return builders.array_spec(n_entries)
    if name == "sorted_array":
        return builders.sorted_array_spec(n_entries)
    if name == "hash_table":
        return builders.hash_table_spec(hash_buckets, 5)
    if name == "btree":
        return builders.btree_spec(20, 250, leaf_links="none")
    raise ValueError("unknown reference structure %r" % name)


def predict_get_latency(
    name: str, n_entries: int, profile: HardwareProfile,
    n_queries: int = 100, seed: int = 42, hash_buckets: int = 100,
) -> float:
    """Average synthesized seconds per Get under the matching layout spec."""
    dp = DataProfile(entry_count=n_entries)
    spec = spec_for(name, n_entries, hash_buckets)
    instance = build_instance(spec, dp, seed=seed)
    keys, _ = make_dataset(n_entries, seed)
    probes = make_probes(keys, n_queries, seed)
    cost = cost_get_set(instance, probes, profile)
    return cost.total_seconds / len(probes)


def spearman(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ra = np.argsort(np.argsort(a)).astype(float)
    rb = np.argsort(np.argsort(b)).astype(float)
    ra -= ra.mean()
    rb -= rb.mean()
    denom = math.sqrt(float((ra**2).sum() * (rb**2).sum()))
    return float((ra * rb).sum() / denom) if denom else 1.0

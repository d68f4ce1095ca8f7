# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled access-pattern kernels.

Each kernel runs its inner action over a whole probe batch and returns a
checksum so the work cannot be optimized away. Array setup and timing live
in the benchmark harness; these functions are the measured loops.
"""

import numpy as np

cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t

COMPILED = True


# ---------------------------------------------------------------------------
# scans

def scan_row_eq(int64_t[::1] pairs, int64_t[::1] probes):
    cdef Py_ssize_t n = pairs.shape[0] // 2
    cdef Py_ssize_t i, j
    cdef int64_t x, acc = 0
    for j in range(probes.shape[0]):
        x = probes[j]
        for i in range(n):
            if pairs[2 * i] == x:
                acc += pairs[2 * i + 1]
                break
    return acc


def scan_col_eq(int64_t[::1] keys, int64_t[::1] vals, int64_t[::1] probes):
    cdef Py_ssize_t n = keys.shape[0]
    cdef Py_ssize_t i, j
    cdef int64_t x, acc = 0
    for j in range(probes.shape[0]):
        x = probes[j]
        for i in range(n):
            if keys[i] == x:
                acc += vals[i]
                break
    return acc


def scan_row_range(int64_t[::1] pairs, int64_t[::1] cutoffs, int64_t[::1] out):
    cdef Py_ssize_t n = pairs.shape[0] // 2
    cdef Py_ssize_t i, j, count
    cdef int64_t x, acc = 0
    for j in range(cutoffs.shape[0]):
        x = cutoffs[j]
        count = 0
        for i in range(n):
            if pairs[2 * i] < x:
                out[count] = pairs[2 * i + 1]
                count += 1
        acc += count
    return acc


def scan_col_range(int64_t[::1] keys, int64_t[::1] vals, int64_t[::1] cutoffs,
                   int64_t[::1] out):
    cdef Py_ssize_t n = keys.shape[0]
    cdef Py_ssize_t i, j, count
    cdef int64_t x, acc = 0
    for j in range(cutoffs.shape[0]):
        x = cutoffs[j]
        count = 0
        for i in range(n):
            if keys[i] < x:
                out[count] = vals[i]
                count += 1
        acc += count
    return acc


# ---------------------------------------------------------------------------
# sorted search

def binary_row(int64_t[::1] pairs, int64_t[::1] probes):
    cdef Py_ssize_t n = pairs.shape[0] // 2
    cdef Py_ssize_t low, high, middle, j
    cdef int64_t x, acc = 0
    for j in range(probes.shape[0]):
        x = probes[j]
        low = 0
        high = n - 1
        middle = (low + high) // 2
        while low < high:
            if pairs[2 * middle] < x:
                low = middle + 1
            else:
                high = middle
            middle = (low + high) // 2
        if pairs[2 * middle] == x:
            acc += pairs[2 * middle + 1]
    return acc


def binary_col(int64_t[::1] keys, int64_t[::1] vals, int64_t[::1] probes):
    cdef Py_ssize_t n = keys.shape[0]
    cdef Py_ssize_t low, high, middle, j
    cdef int64_t x, acc = 0
    for j in range(probes.shape[0]):
        x = probes[j]
        low = 0
        high = n - 1
        middle = (low + high) // 2
        while low < high:
            if keys[middle] < x:
                low = middle + 1
            else:
                high = middle
            middle = (low + high) // 2
        if keys[middle] == x:
            acc += vals[middle]
    return acc


cdef inline Py_ssize_t _interp_step(int64_t lo_key, int64_t hi_key,
                                    Py_ssize_t low, Py_ssize_t high,
                                    int64_t x) nogil:
    cdef double frac
    cdef Py_ssize_t si
    if hi_key <= lo_key:
        return low
    frac = (<double>(x - lo_key)) / (<double>(hi_key - lo_key))
    si = low + <Py_ssize_t>(frac * (high - low))
    if si < low:
        si = low
    if si > high:
        si = high
    return si


def interp_row(int64_t[::1] pairs, int64_t[::1] probes):
    cdef Py_ssize_t n = pairs.shape[0] // 2
    cdef Py_ssize_t low, high, si, j
    cdef int64_t x, acc = 0
    for j in range(probes.shape[0]):
        x = probes[j]
        low = 0
        high = n - 1
        while low < high:
            si = _interp_step(pairs[2 * low], pairs[2 * high], low, high, x)
            if pairs[2 * si] < x:
                low = si + 1
            elif pairs[2 * si] == x:
                acc += pairs[2 * si + 1]
                break
            else:
                high = si - 1 if si > low else low
        else:
            if low == high and pairs[2 * low] == x:
                acc += pairs[2 * low + 1]
    return acc


def interp_col(int64_t[::1] keys, int64_t[::1] vals, int64_t[::1] probes):
    cdef Py_ssize_t n = keys.shape[0]
    cdef Py_ssize_t low, high, si, j
    cdef int64_t x, acc = 0
    for j in range(probes.shape[0]):
        x = probes[j]
        low = 0
        high = n - 1
        while low < high:
            si = _interp_step(keys[low], keys[high], low, high, x)
            if keys[si] < x:
                low = si + 1
            elif keys[si] == x:
                acc += vals[si]
                break
            else:
                high = si - 1 if si > low else low
        else:
            if low == high and keys[low] == x:
                acc += vals[low]
    return acc


# ---------------------------------------------------------------------------
# hash and bloom probes

def hash_probe_ms(int64_t[::1] pa, int64_t[::1] sa, uint64_t a, int shift):
    cdef uint64_t x = 0
    cdef Py_ssize_t i
    for i in range(sa.shape[0]):
        x = (a * (<uint64_t>pa[x] + <uint64_t>sa[i])) >> shift
    return <int64_t>x


def hash_probe_kwise(int64_t[::1] pa, int64_t[::1] sa, uint64_t a, uint64_t b,
                     uint64_t p):
    cdef uint64_t x = 0
    cdef Py_ssize_t i
    for i in range(sa.shape[0]):
        x = (a * (<uint64_t>pa[x] + <uint64_t>sa[i]) + b) % p
    return <int64_t>x


def bloom_build_ms(unsigned char[::1] bf, int64_t[::1] entries,
                   uint64_t[::1] acoef, int shift, int k):
    cdef Py_ssize_t i
    cdef int j
    cdef uint64_t h
    for i in range(bf.shape[0]):
        bf[i] = 0
    for i in range(entries.shape[0]):
        for j in range(k):
            h = (acoef[j] * <uint64_t>entries[i]) >> shift
            bf[h >> 3] |= <unsigned char>(1 << (h & 7))
    return entries.shape[0]


def bloom_probe_ms(unsigned char[::1] bf, int64_t[::1] probes,
                   uint64_t[::1] acoef, int shift, int k):
    cdef Py_ssize_t i
    cdef int j
    cdef uint64_t h
    cdef int64_t count = 0
    for i in range(probes.shape[0]):
        for j in range(k):
            h = (acoef[j] * <uint64_t>probes[i]) >> shift
            if not (bf[h >> 3] & (1 << (h & 7))):
                count += 1
    return count


def bloom_build_kwise(unsigned char[::1] bf, int64_t[::1] entries,
                      uint64_t[::1] acoef, uint64_t[::1] bcoef, uint64_t p,
                      int k):
    cdef Py_ssize_t i
    cdef int j
    cdef uint64_t h
    for i in range(bf.shape[0]):
        bf[i] = 0
    for i in range(entries.shape[0]):
        for j in range(k):
            h = (acoef[j] * <uint64_t>entries[i] + bcoef[j]) % p
            bf[h >> 3] |= <unsigned char>(1 << (h & 7))
    return entries.shape[0]


def bloom_probe_kwise(unsigned char[::1] bf, int64_t[::1] probes,
                      uint64_t[::1] acoef, uint64_t[::1] bcoef, uint64_t p,
                      int k):
    cdef Py_ssize_t i
    cdef int j
    cdef uint64_t h
    cdef int64_t count = 0
    for i in range(probes.shape[0]):
        for j in range(k):
            h = (acoef[j] * <uint64_t>probes[i] + bcoef[j]) % p
            if not (bf[h >> 3] & (1 << (h & 7))):
                count += 1
    return count


# ---------------------------------------------------------------------------
# sorting

cdef void _quicksort(int64_t[::1] a, Py_ssize_t low, Py_ssize_t high) nogil:
    cdef Py_ssize_t i, j
    cdef int64_t pivot, tmp
    while low < high:
        pivot = a[high]
        i = low - 1
        for j in range(low, high):
            if a[j] < pivot:
                i += 1
                tmp = a[i]; a[i] = a[j]; a[j] = tmp
        tmp = a[i + 1]; a[i + 1] = a[high]; a[high] = tmp
        # recurse into the smaller side, loop on the larger
        if i + 1 - low < high - i - 1:
            _quicksort(a, low, i)
            low = i + 2
        else:
            _quicksort(a, i + 2, high)
            high = i


def quicksort_iter(int64_t[::1] src, int64_t[::1] buf, int iters):
    cdef Py_ssize_t n = src.shape[0]
    cdef Py_ssize_t i
    cdef int r
    cdef int64_t acc = 0
    for r in range(iters):
        for i in range(n):
            buf[i] = src[i]
        _quicksort(buf, 0, n - 1)
        acc += buf[n // 2]
    return acc


cdef void _merge_runs(int64_t[::1] a, int64_t[::1] tmp, Py_ssize_t n,
                      Py_ssize_t width) nogil:
    cdef Py_ssize_t lo, mid, hi, i, j, k
    while width < n:
        lo = 0
        while lo < n:
            mid = lo + width
            hi = lo + 2 * width
            if mid > n: mid = n
            if hi > n: hi = n
            i = lo; j = mid; k = lo
            while i < mid and j < hi:
                if a[i] <= a[j]:
                    tmp[k] = a[i]; i += 1
                else:
                    tmp[k] = a[j]; j += 1
                k += 1
            while i < mid:
                tmp[k] = a[i]; i += 1; k += 1
            while j < hi:
                tmp[k] = a[j]; j += 1; k += 1
            lo += 2 * width
        for i in range(n):
            a[i] = tmp[i]
        width *= 2


def mergesort_iter(int64_t[::1] src, int64_t[::1] buf, int64_t[::1] tmp, int iters):
    cdef Py_ssize_t n = src.shape[0]
    cdef Py_ssize_t i
    cdef int r
    cdef int64_t acc = 0
    for r in range(iters):
        for i in range(n):
            buf[i] = src[i]
        _merge_runs(buf, tmp, n, 1)
        acc += buf[n // 2]
    return acc


def external_mergesort_iter(int64_t[::1] src, int64_t[::1] buf, int64_t[::1] tmp,
                            Py_ssize_t run, int iters):
    """Sort cache-sized runs in place, then merge passes over the runs."""
    cdef Py_ssize_t n = src.shape[0]
    cdef Py_ssize_t i, lo, hi
    cdef int r
    cdef int64_t acc = 0
    if run < 2:
        run = 2
    for r in range(iters):
        for i in range(n):
            buf[i] = src[i]
        lo = 0
        while lo < n:
            hi = lo + run - 1
            if hi >= n:
                hi = n - 1
            _quicksort(buf, lo, hi)
            lo += run
        _merge_runs(buf, tmp, n, run)
        acc += buf[n // 2]
    return acc


# ---------------------------------------------------------------------------
# memory access

def random_access(int64_t[::1] pa, int64_t[::1] sa):
    cdef int64_t p = 0
    cdef Py_ssize_t i
    for i in range(sa.shape[0]):
        p = pa[p] + sa[i]
    return p


def batched_random_access(int64_t[::1] pa, int64_t[::1] sa):
    cdef int64_t p = 0
    cdef Py_ssize_t i
    for i in range(sa.shape[0]):
        p += pa[sa[i]]
    return p


# ---------------------------------------------------------------------------
# batch writes

def write_unordered_row(int64_t[::1] dst, int64_t[::1] src, int iters):
    cdef Py_ssize_t n = src.shape[0]
    cdef Py_ssize_t i
    cdef int r
    cdef int64_t acc = 0
    for r in range(iters):
        for i in range(n):
            dst[i] = src[i]
        acc += dst[n - 1]
    return acc


def write_unordered_col(int64_t[::1] dstk, int64_t[::1] dstv,
                        int64_t[::1] srck, int64_t[::1] srcv, int iters):
    cdef Py_ssize_t n = srck.shape[0]
    cdef Py_ssize_t i
    cdef int r
    cdef int64_t acc = 0
    for r in range(iters):
        for i in range(n):
            dstk[i] = srck[i]
        for i in range(n):
            dstv[i] = srcv[i]
        acc += dstk[n - 1] + dstv[n - 1]
    return acc


def write_ordered(int64_t[::1] existing, int64_t[::1] batch, int64_t[::1] out,
                  int iters):
    """Merge a sorted batch into sorted existing data (ordered placement)."""
    cdef Py_ssize_t n = existing.shape[0], w = batch.shape[0]
    cdef Py_ssize_t i, j, k
    cdef int r
    cdef int64_t acc = 0
    for r in range(iters):
        i = 0; j = 0; k = 0
        while i < n and j < w:
            if existing[i] <= batch[j]:
                out[k] = existing[i]; i += 1
            else:
                out[k] = batch[j]; j += 1
            k += 1
        while i < n:
            out[k] = existing[i]; i += 1; k += 1
        while j < w:
            out[k] = batch[j]; j += 1; k += 1
        acc += out[n + w - 1]
    return acc


def write_scattered(int64_t[::1] region, int64_t[::1] idxs, int64_t[::1] vals,
                    int iters):
    cdef Py_ssize_t m = idxs.shape[0]
    cdef Py_ssize_t i
    cdef int r
    cdef int64_t acc = 0
    for r in range(iters):
        for i in range(m):
            region[idxs[i]] = vals[i]
        acc += region[idxs[m - 1]]
    return acc


# ---------------------------------------------------------------------------
# reference structures: measured Get paths for verification

def ref_array_get(int64_t[::1] keys, int64_t[::1] vals, int64_t[::1] probes):
    cdef Py_ssize_t n = keys.shape[0]
    cdef Py_ssize_t i, j
    cdef int64_t x, acc = 0
    for j in range(probes.shape[0]):
        x = probes[j]
        for i in range(n):
            if keys[i] == x:
                acc += vals[i]
                break
    return acc


def ref_sorted_get(int64_t[::1] keys, int64_t[::1] vals, int64_t[::1] probes):
    return binary_col(keys, vals, probes)


def ref_hash_get(int64_t[::1] heads, int64_t[::1] nexts, int64_t[::1] pkeys,
                 int64_t[::1] pvals, int64_t[::1] pcounts, Py_ssize_t cap,
                 int64_t nbuckets, int64_t[::1] probes):
    cdef Py_ssize_t j, base, c
    cdef int64_t x, page, acc = 0
    cdef Py_ssize_t i
    for j in range(probes.shape[0]):
        x = probes[j]
        page = heads[x % nbuckets]
        while page >= 0:
            base = page * cap
            c = pcounts[page]
            for i in range(c):
                if pkeys[base + i] == x:
                    acc += pvals[base + i]
                    page = -2
                    break
            if page == -2:
                break
            page = nexts[page]
    return acc


def ref_btree_get(int64_t[::1] fences, int64_t[::1] level_offsets, int nlevels,
                  Py_ssize_t fanout, int64_t[::1] leaf_keys, int64_t[::1] leaf_vals,
                  Py_ssize_t cap, int64_t[::1] probes):
    """Descend fence levels (f-1 fences per node), then search one leaf."""
    cdef Py_ssize_t node, level, low, high, middle, base
    cdef int64_t x, acc = 0
    cdef Py_ssize_t j, nf = fanout - 1
    for j in range(probes.shape[0]):
        x = probes[j]
        node = 0
        for level in range(nlevels):
            base = level_offsets[level] + node * nf
            low = 0
            high = nf
            # first fence greater than x picks the slot
            while low < high:
                middle = (low + high) // 2
                if fences[base + middle] <= x:
                    low = middle + 1
                else:
                    high = middle
            node = node * fanout + low
        base = node * cap
        low = 0
        high = cap - 1
        middle = (low + high) // 2
        while low < high:
            if leaf_keys[base + middle] < x:
                low = middle + 1
            else:
                high = middle
            middle = (low + high) // 2
        if leaf_keys[base + middle] == x:
            acc += leaf_vals[base + middle]
    return acc

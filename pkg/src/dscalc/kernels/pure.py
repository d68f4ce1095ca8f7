"""Pure-Python kernel fallback.

Mirrors the compiled kernel signatures and produces identical checksums.
Latencies measured through this backend are dominated by interpreter
dispatch, so hardware-shape assertions only apply to the compiled backend;
this one keeps the package functional everywhere and anchors equivalence
tests.
"""

from __future__ import annotations

COMPILED = False

_M64 = (1 << 64) - 1


def scan_row_eq(pairs, probes):
    n = len(pairs) // 2
    pairs = pairs.tolist()
    acc = 0
    for x in probes.tolist():
        for i in range(n):
            if pairs[2 * i] == x:
                acc += pairs[2 * i + 1]
                break
    return acc


def scan_col_eq(keys, vals, probes):
    keys_l, vals_l = keys.tolist(), vals.tolist()
    acc = 0
    for x in probes.tolist():
        for i, k in enumerate(keys_l):
            if k == x:
                acc += vals_l[i]
                break
    return acc


def scan_row_range(pairs, cutoffs, out):
    n = len(pairs) // 2
    pairs = pairs.tolist()
    acc = 0
    for x in cutoffs.tolist():
        count = 0
        for i in range(n):
            if pairs[2 * i] < x:
                out[count] = pairs[2 * i + 1]
                count += 1
        acc += count
    return acc


def scan_col_range(keys, vals, cutoffs, out):
    keys_l, vals_l = keys.tolist(), vals.tolist()
    acc = 0
    for x in cutoffs.tolist():
        count = 0
        for i, k in enumerate(keys_l):
            if k < x:
                out[count] = vals_l[i]
                count += 1
        acc += count
    return acc


def binary_row(pairs, probes):
    n = len(pairs) // 2
    pairs = pairs.tolist()
    acc = 0
    for x in probes.tolist():
        low, high = 0, n - 1
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


def binary_col(keys, vals, probes):
    keys_l, vals_l = keys.tolist(), vals.tolist()
    n = len(keys_l)
    acc = 0
    for x in probes.tolist():
        low, high = 0, n - 1
        middle = (low + high) // 2
        while low < high:
            if keys_l[middle] < x:
                low = middle + 1
            else:
                high = middle
            middle = (low + high) // 2
        if keys_l[middle] == x:
            acc += vals_l[middle]
    return acc


def _interp_step(lo_key, hi_key, low, high, x):
    if hi_key <= lo_key:
        return low
    si = low + int((x - lo_key) / (hi_key - lo_key) * (high - low))
    return min(max(si, low), high)


def interp_row(pairs, probes):
    n = len(pairs) // 2
    pairs = pairs.tolist()
    acc = 0
    for x in probes.tolist():
        low, high = 0, n - 1
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


def interp_col(keys, vals, probes):
    keys_l, vals_l = keys.tolist(), vals.tolist()
    n = len(keys_l)
    acc = 0
    for x in probes.tolist():
        low, high = 0, n - 1
        while low < high:
            si = _interp_step(keys_l[low], keys_l[high], low, high, x)
            if keys_l[si] < x:
                low = si + 1
            elif keys_l[si] == x:
                acc += vals_l[si]
                break
            else:
                high = si - 1 if si > low else low
        else:
            if low == high and keys_l[low] == x:
                acc += vals_l[low]
    return acc


def hash_probe_ms(pa, sa, a, shift):
    pa_l = pa.tolist()
    x = 0
    for s in sa.tolist():
        x = ((a * ((pa_l[x] + s) & _M64)) & _M64) >> shift
    return x


def hash_probe_kwise(pa, sa, a, b, p):
    pa_l = pa.tolist()
    x = 0
    for s in sa.tolist():
        x = ((a * ((pa_l[x] + s) & _M64) + b) & _M64) % p
    return x


def bloom_build_ms(bf, entries, acoef, shift, k):
    bf[:] = 0
    coeffs = [int(c) for c in acoef[:k]]
    for e in entries.tolist():
        for a in coeffs:
            h = ((a * e) & _M64) >> shift
            bf[h >> 3] |= 1 << (h & 7)
    return len(entries)


def bloom_probe_ms(bf, probes, acoef, shift, k):
    coeffs = [int(c) for c in acoef[:k]]
    count = 0
    for x in probes.tolist():
        for a in coeffs:
            h = ((a * x) & _M64) >> shift
            if not (bf[h >> 3] & (1 << (h & 7))):
                count += 1
    return count


def bloom_build_kwise(bf, entries, acoef, bcoef, p, k):
    bf[:] = 0
    coeffs = [(int(a), int(b)) for a, b in zip(acoef[:k], bcoef[:k])]
    for e in entries.tolist():
        for a, b in coeffs:
            h = ((a * e + b) & _M64) % p
            bf[h >> 3] |= 1 << (h & 7)
    return len(entries)


def bloom_probe_kwise(bf, probes, acoef, bcoef, p, k):
    coeffs = [(int(a), int(b)) for a, b in zip(acoef[:k], bcoef[:k])]
    count = 0
    for x in probes.tolist():
        for a, b in coeffs:
            h = ((a * x + b) & _M64) % p
            if not (bf[h >> 3] & (1 << (h & 7))):
                count += 1
    return count


def _quicksort(a, low, high):
    while low < high:
        pivot = a[high]
        i = low - 1
        for j in range(low, high):
            if a[j] < pivot:
                i += 1
                a[i], a[j] = a[j], a[i]
        a[i + 1], a[high] = a[high], a[i + 1]
        if i + 1 - low < high - i - 1:
            _quicksort(a, low, i)
            low = i + 2
        else:
            _quicksort(a, i + 2, high)
            high = i


def quicksort_iter(src, buf, iters):
    src_l = src.tolist()
    n = len(src_l)
    acc = 0
    for _ in range(iters):
        work = list(src_l)
        _quicksort(work, 0, n - 1)
        acc += work[n // 2]
    return acc


def _merge_runs(a, tmp, n, width):
    while width < n:
        lo = 0
        while lo < n:
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j, k = lo, mid, lo
            while i < mid and j < hi:
                if a[i] <= a[j]:
                    tmp[k] = a[i]
                    i += 1
                else:
                    tmp[k] = a[j]
                    j += 1
                k += 1
            tmp[k:k + (mid - i)] = a[i:mid]
            k += mid - i
            tmp[k:k + (hi - j)] = a[j:hi]
            lo += 2 * width
        a[:n] = tmp[:n]
        width *= 2


def mergesort_iter(src, buf, tmp, iters):
    src_l = src.tolist()
    n = len(src_l)
    acc = 0
    for _ in range(iters):
        work = list(src_l)
        scratch = [0] * n
        _merge_runs(work, scratch, n, 1)
        acc += work[n // 2]
    return acc


def external_mergesort_iter(src, buf, tmp, run, iters):
    src_l = src.tolist()
    n = len(src_l)
    run = max(2, int(run))
    acc = 0
    for _ in range(iters):
        work = list(src_l)
        lo = 0
        while lo < n:
            hi = min(lo + run - 1, n - 1)
            _quicksort(work, lo, hi)
            lo += run
        scratch = [0] * n
        _merge_runs(work, scratch, n, run)
        acc += work[n // 2]
    return acc


def random_access(pa, sa):
    pa_l = pa.tolist()
    p = 0
    for s in sa.tolist():
        p = pa_l[p] + s
    return p


def batched_random_access(pa, sa):
    pa_l = pa.tolist()
    p = 0
    for s in sa.tolist():
        p += pa_l[s]
    return p


def write_unordered_row(dst, src, iters):
    n = len(src)
    acc = 0
    for _ in range(iters):
        for i in range(n):
            dst[i] = src[i]
        acc += int(dst[n - 1])
    return acc


def write_unordered_col(dstk, dstv, srck, srcv, iters):
    n = len(srck)
    acc = 0
    for _ in range(iters):
        for i in range(n):
            dstk[i] = srck[i]
        for i in range(n):
            dstv[i] = srcv[i]
        acc += int(dstk[n - 1]) + int(dstv[n - 1])
    return acc


def write_ordered(existing, batch, out, iters):
    ex, ba = existing.tolist(), batch.tolist()
    n, w = len(ex), len(ba)
    acc = 0
    for _ in range(iters):
        i = j = k = 0
        while i < n and j < w:
            if ex[i] <= ba[j]:
                out[k] = ex[i]
                i += 1
            else:
                out[k] = ba[j]
                j += 1
            k += 1
        while i < n:
            out[k] = ex[i]
            i += 1
            k += 1
        while j < w:
            out[k] = ba[j]
            j += 1
            k += 1
        acc += int(out[n + w - 1])
    return acc


def write_scattered(region, idxs, vals, iters):
    idx_l, val_l = idxs.tolist(), vals.tolist()
    acc = 0
    for _ in range(iters):
        for i, v in zip(idx_l, val_l):
            region[i] = v
        acc += int(region[idx_l[-1]])
    return acc


# ---------------------------------------------------------------------------
# reference structures


def ref_array_get(keys, vals, probes):
    return scan_col_eq(keys, vals, probes)


def ref_sorted_get(keys, vals, probes):
    return binary_col(keys, vals, probes)


def ref_hash_get(heads, nexts, pkeys, pvals, pcounts, cap, nbuckets, probes):
    heads_l, nexts_l = heads.tolist(), nexts.tolist()
    pk, pv, pc = pkeys.tolist(), pvals.tolist(), pcounts.tolist()
    acc = 0
    for x in probes.tolist():
        page = heads_l[x % nbuckets]
        while page >= 0:
            base = page * cap
            found = False
            for i in range(pc[page]):
                if pk[base + i] == x:
                    acc += pv[base + i]
                    found = True
                    break
            if found:
                break
            page = nexts_l[page]
    return acc


def ref_btree_get(fences, level_offsets, nlevels, fanout, leaf_keys, leaf_vals,
                  cap, probes):
    fences_l = fences.tolist()
    offs = level_offsets.tolist()
    lk, lv = leaf_keys.tolist(), leaf_vals.tolist()
    nf = fanout - 1
    acc = 0
    for x in probes.tolist():
        node = 0
        for level in range(nlevels):
            base = offs[level] + node * nf
            low, high = 0, nf
            while low < high:
                middle = (low + high) // 2
                if fences_l[base + middle] <= x:
                    low = middle + 1
                else:
                    high = middle
            node = node * fanout + low
        base = node * cap
        low, high = 0, cap - 1
        middle = (low + high) // 2
        while low < high:
            if lk[base + middle] < x:
                low = middle + 1
            else:
                high = middle
            middle = (low + high) // 2
        if lk[base + middle] == x:
            acc += lv[base + middle]
    return acc

"""Operation and cost synthesis.

The rule set walks an instance the way the operation would, emitting an
ordered tree of conceptual access calls (scan, sorted search, random
access, ...). Per-node decisions follow the layout primitives: retention
separates internal from terminal work, zone maps choose fence search,
partitioning functions route children arithmetically, bloom filters gate
descent, and every hop into a node costs a random access whose region is
the cumulative byte size of the structure down to that level, which is how
caching enters the calculation. Lowering then picks one concrete variant
per call and sums the fitted model predictions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .instance import StructureInstance, fence_count
from .layout import ElementSpec
from .models import HardwareProfile, Prediction

POINTER_BYTES = 8

KIND_LETTER = {
    "Scan": "S",
    "SortedSearch": "B",
    "HashProbe": "P",
    "BloomProbe": "F",
    "Sort": "Q",
    "RandomAccess": "P",
    "BatchedRandomAccess": "P",
    "UnorderedBatchWrite": "W",
    "OrderedBatchWrite": "W",
    "ScatteredBatchWrite": "W",
}


class SynthesisError(ValueError):
    pass


@dataclass(frozen=True)
class Level1Call:
    kind: str
    layout: str = ""  # row | col | ""
    count: int = 0  # elements touched
    bytes: int = 0  # region bytes for probes, key bytes for searches
    aux: tuple = ()  # (name, value) pairs: num_hashes, data_bytes, ...
    role: str = ""  # hop | head | fence | terminal | value | filter | sort | write
    depth: int = 0
    comparison: str = "eq"  # eq | range (scans)
    node_uid: int = -1
    multiplicity: float = 1.0

    def aux_get(self, name, default=None):
        for k, v in self.aux:
            if k == name:
                return v
        return default

    def describe(self) -> str:
        arg = self.bytes if self.kind != "Sort" else self.count
        tag = "%s(%s%s)" % (
            self.kind,
            {"row": "RowStore,", "col": "ColumnStore,"}.get(self.layout, ""),
            arg,
        )
        return tag


@dataclass(frozen=True)
class CostedCall:
    call: Level1Call
    variant: str
    seconds: float
    extrapolated: bool = False

    @property
    def weighted_seconds(self) -> float:
        return self.seconds * self.call.multiplicity


@dataclass(frozen=True)
class AccessTree:
    operation: str
    calls: tuple

    def kinds(self) -> str:
        return "".join(KIND_LETTER[c.kind] for c in self.calls)


@dataclass(frozen=True)
class CostedTree:
    operation: str
    calls: tuple  # of CostedCall
    total_seconds: float
    machine_id: str = ""
    extrapolated: bool = False

    def kinds(self) -> str:
        return "".join(KIND_LETTER[c.call.kind] for c in self.calls)


def _tree(operation, calls) -> AccessTree:
    return AccessTree(operation, tuple(calls))


# ---------------------------------------------------------------------------
# Get


def _fence_layout(elem: ElementSpec) -> str:
    # consolidated fences form their own array; scattered ones sit next to
    # the child pointers as pairs
    return "col" if elem.tag("filters_layout") == "consolidate" else "row"


def _terminal_layout(elem: ElementSpec) -> str:
    return "col" if elem.tag("key_value_layout") == "columnar" else "row"


def _bloom_call(elem, block, depth, mult=1.0) -> Level1Call:
    hashes, bits = elem.param("bloom_filters", 0), elem.param("bloom_filters", 1)
    return Level1Call(
        "BloomProbe", count=1, bytes=max(1, int(bits) // 8),
        aux=(("num_hashes", int(hashes)),), role="filter", depth=depth,
        node_uid=block.uid, multiplicity=mult,
    )


def bloom_false_positive_rate(bits: int, hashes: int, entries: int) -> float:
    if bits <= 0 or hashes <= 0:
        return 1.0
    return (1.0 - math.exp(-hashes * entries / bits)) ** hashes


def _terminal_calls(elem, block, instance, depth, hit, expected, mult=1.0):
    """Search work inside a data node plus the value fetch."""
    calls = []
    n = block.entry_count
    if n == 0:
        return calls
    layout = _terminal_layout(elem)
    keysz = instance.profile.key_size
    if elem.tag("bloom_filters") == "on":
        calls.append(_bloom_call(elem, block, depth, mult))
        if not hit:
            bits = int(elem.param("bloom_filters", 1))
            hashes = int(elem.param("bloom_filters", 0))
            if expected:
                mult = mult * bloom_false_positive_rate(bits, hashes, n)
            else:
                return calls  # negative filter prunes the node entirely
    if elem.is_sorted:
        calls.append(Level1Call(
            "SortedSearch", layout=layout, count=n, bytes=n * keysz,
            role="terminal", depth=depth, node_uid=block.uid, multiplicity=mult,
        ))
    else:
        scanned = max(1, n // 2) if (expected and hit) else n
        calls.append(Level1Call(
            "Scan", layout=layout, count=scanned, bytes=scanned * keysz,
            role="terminal", depth=depth, node_uid=block.uid, multiplicity=mult,
        ))
    if hit and layout == "col" and elem.retains_values:
        vals = n * instance.profile.value_size
        calls.append(Level1Call(
            "RandomAccess", layout=layout, count=n, bytes=vals,
            role="value", depth=depth, node_uid=block.uid, multiplicity=mult,
        ))
    return calls


def _arrival_call(elem, block, instance, depth, mult=1.0) -> Level1Call:
    region = instance.region_through_level(block.level)
    kind = "HashProbe" if (not elem.is_terminal and elem.hash_routed) else "RandomAccess"
    return Level1Call(
        kind, count=len(block.children) or block.entry_count, bytes=region,
        role="hop", depth=depth, node_uid=block.uid, multiplicity=mult,
    )


def _fence_search_calls(elem, block, depth, keysz, mult=1.0):
    nchildren = len(block.children)
    fences = fence_count(elem, nchildren)
    if fences == 0:
        return []
    kind = "SortedSearch" if elem.is_sorted else "Scan"
    return [Level1Call(
        kind, layout=_fence_layout(elem), count=fences, bytes=fences * keysz,
        role="fence", depth=depth, node_uid=block.uid, multiplicity=mult,
    )]


def _chain_visit_count(n_children: int, expected: bool) -> int:
    if n_children <= 1:
        return n_children
    return max(1, (n_children + 1) // 2) if expected else n_children


def synthesize_get(
    instance: StructureInstance,
    key: int,
    expected: bool = False,
) -> AccessTree:
    """Point-lookup access tree. ``expected`` halves scans and chain walks
    (set semantics); the default costs the guaranteed upper bound."""
    spec, profile = instance.spec, instance.profile
    lo, hi = profile.key_domain
    hit = lo <= key < hi and instance.root.entry_count > 0
    calls = []
    if instance.root.entry_count == 0:
        return _tree("get", calls)

    def enter(block, depth, arrival_needed, same_depth):
        elem = spec.elements[block.element_name]
        if block.materialized:
            if arrival_needed and not (block is instance.root and elem.is_terminal):
                calls.append(_arrival_call(elem, block, instance, depth))
            if elem.is_terminal:
                calls.extend(_terminal_calls(elem, block, instance, depth, hit, expected))
                return
            if elem.tag("bloom_filters") == "on":
                calls.append(_bloom_call(elem, block, depth))
            routing = block.routing
            if routing == "fences":
                calls.extend(_fence_search_calls(elem, block, depth, profile.key_size))
            if routing in ("fences", "compute"):
                from .instance import route_child

                idx = route_child(block, key, profile, spec, same_depth)
                child = block.child_at(idx) if idx is not None else None
                if child is None and block.children:
                    if idx is None:
                        child = block.children[0]
                    else:
                        # lazily absent partition: the lookup ends here
                        return
                if child is None:
                    return
                nd = same_depth + 1 if child.element_name == block.element_name else 0
                enter(child, depth + 1, True, nd)
                return
            # materialized but unroutable: walk children as a chain
            _walk_chain(block, depth)
            return
        # connector element without a node of its own
        if block is instance.root:
            calls.append(Level1Call(
                "RandomAccess", count=1, bytes=POINTER_BYTES, role="head",
                depth=depth, node_uid=block.uid,
            ))
        _walk_chain(block, depth)

    def _walk_chain(block, depth):
        elem = spec.elements[block.element_name]
        children = block.children
        if not children:
            return
        if elem.tag("skip_links") != "none":
            hops = max(1, math.ceil(math.log2(len(children))) )
            target = children[min(len(children) // 2, len(children) - 1)]
            region = instance.region_through_level(target.level)
            for _ in range(hops):
                calls.append(Level1Call(
                    "RandomAccess", count=1, bytes=region, role="hop",
                    depth=depth + 1, node_uid=target.uid,
                ))
            enter(target, depth + 1, False, 0)
            return
        visits = _chain_visit_count(len(children), expected)
        for i in range(visits):
            child = children[min(i, len(children) - 1)]
            last = i == visits - 1
            if not last:
                child_elem = spec.elements[child.element_name]
                calls.append(_arrival_call(child_elem, child, instance, depth + 1))
                if child_elem.is_terminal and child.entry_count:
                    calls.append(Level1Call(
                        "Scan", layout=_terminal_layout(child_elem),
                        count=child.entry_count,
                        bytes=child.entry_count * profile.key_size,
                        role="terminal", depth=depth + 1, node_uid=child.uid,
                    ))
                else:
                    enter(child, depth + 1, False, 0)
            else:
                enter(child, depth + 1, True, 0)

    enter(instance.root, 0, True, 0)
    return _tree("get", calls)


# ---------------------------------------------------------------------------
# Range


def _qualifying_terminals(instance, lo, hi):
    out = []
    for block in instance.root.walk():
        if not block.children and block.entry_count > 0:
            b = block.partition_bounds
            if b is None or (b[0] <= hi and lo <= b[1]):
                out.append(block)
    return out


def synthesize_range(instance: StructureInstance, lo: int, hi: int) -> AccessTree:
    """Descend to the low bound, then sweep qualifying terminals through
    links when the layout provides them, re-descents when only fences do,
    or a full terminal scan otherwise."""
    if lo > hi:
        raise SynthesisError("range bounds out of order")
    spec, profile = instance.spec, instance.profile
    if instance.root.entry_count == 0:
        return _tree("range", [])

    point = synthesize_get(instance, lo)
    calls = [c for c in point.calls if c.role not in ("value", "terminal")]
    leaves = _qualifying_terminals(instance, lo, hi)
    ordered = all(b.partition_bounds is not None for b in leaves)
    if not ordered:
        # no order information: every data node must be visited
        leaves = [b for b in instance.root.walk() if not b.children and b.entry_count > 0]

    first_elem = spec.elements[leaves[0].element_name] if leaves else None
    linked = first_elem is not None and (
        first_elem.tag("area_links") != "none"
        or _parent_chain_links(instance, leaves[0])
    )

    for i, leaf in enumerate(leaves):
        elem = spec.elements[leaf.element_name]
        if i > 0:
            if linked or not ordered:
                calls.append(Level1Call(
                    "RandomAccess", count=1,
                    bytes=instance.region_through_level(leaf.level),
                    role="hop", depth=leaf.level, node_uid=leaf.uid,
                ))
            else:
                # fences only: re-descend for each qualifying partition
                descent = synthesize_get(instance, leaf.partition_bounds[0])
                calls.extend(c for c in descent.calls if c.role not in ("value", "terminal"))
        calls.append(Level1Call(
            "Scan", layout=_terminal_layout(elem), count=leaf.entry_count,
            bytes=leaf.entry_count * profile.key_size, role="terminal",
            depth=leaf.level, comparison="range", node_uid=leaf.uid,
        ))
    return _tree("range", calls)


def _parent_chain_links(instance, leaf):
    parent = _parent_of(instance.root, leaf)
    if parent is None:
        return False
    elem = instance.spec.elements[parent.element_name]
    return elem.tag("immediate_links") != "none"


def _parent_of(root, target):
    for block in root.walk():
        if target in block.children:
            return block
    return None


# ---------------------------------------------------------------------------
# Bulk load / update


def synthesize_bulk_load(instance: StructureInstance) -> AccessTree:
    spec, profile = instance.spec, instance.profile
    n = profile.entry_count
    calls = []
    if n == 0:
        return _tree("bulk_load", calls)
    chain = spec.chain_from_root()
    if any(e.is_sorted for e in chain):
        calls.append(Level1Call(
            "Sort", count=n, bytes=n * profile.record_bytes, role="sort", depth=0,
        ))

    per_level: dict = {}
    for block in instance.root.walk():
        if not block.materialized:
            continue
        key = (block.level, block.element_name)
        bytes_, nodes = per_level.get(key, (0, 0))
        per_level[key] = (bytes_ + block.byte_size, nodes + 1)

    for (level, elem_name), (level_bytes, nodes) in sorted(per_level.items()):
        elem = spec.elements[elem_name]
        layout = _terminal_layout(elem)
        region = instance.region_through_level(level)
        if elem.is_terminal:
            if elem.is_sorted:
                calls.append(Level1Call(
                    "OrderedBatchWrite", layout=layout, count=nodes,
                    bytes=level_bytes, aux=(("data_bytes", region),),
                    role="write", depth=level,
                ))
            else:
                calls.append(Level1Call(
                    "UnorderedBatchWrite", layout=layout, count=nodes,
                    bytes=level_bytes, role="write", depth=level,
                ))
        else:
            scattered = (
                elem.tag("sub_block_location") in ("pointed", "double_pointed")
                or elem.tag("sub_block_layout") == "scatter"
            )
            if scattered:
                calls.append(Level1Call(
                    "ScatteredBatchWrite", layout=layout, count=nodes,
                    bytes=region, aux=(("elements", nodes),),
                    role="write", depth=level,
                ))
            elif elem.is_sorted:
                calls.append(Level1Call(
                    "OrderedBatchWrite", layout=layout, count=nodes,
                    bytes=level_bytes, aux=(("data_bytes", region),),
                    role="write", depth=level,
                ))
            else:
                calls.append(Level1Call(
                    "UnorderedBatchWrite", layout=layout, count=nodes,
                    bytes=level_bytes, role="write", depth=level,
                ))
    return _tree("bulk_load", calls)


def synthesize_update(instance: StructureInstance, key: int,
                      expected: bool = False) -> AccessTree:
    """Value update: the point-query path plus one record-sized write."""
    get_tree = synthesize_get(instance, key, expected)
    calls = list(get_tree.calls)
    if calls:
        leaf = calls[-1]
        layout = leaf.layout or "row"
        calls.append(Level1Call(
            "UnorderedBatchWrite", layout=layout, count=1,
            bytes=instance.profile.record_bytes, role="write",
            depth=leaf.depth, node_uid=leaf.node_uid,
        ))
    return _tree("update", calls)


# ---------------------------------------------------------------------------
# skew


@dataclass
class SkewState:
    refresh_period: int = 100
    popularity: dict = field(default_factory=dict)  # node uid -> p
    counts: dict = field(default_factory=dict)
    total: int = 0

    def record(self, tree: AccessTree) -> None:
        seen = {c.node_uid for c in tree.calls if c.node_uid >= 0}
        for uid in seen:
            self.counts[uid] = self.counts.get(uid, 0) + 1
            self.total += 1

    def refresh(self) -> None:
        if self.total:
            self.popularity = {u: c / self.total for u, c in self.counts.items()}
        self.counts = {}
        self.total = 0


def skew_weight(count: int, total: int, sid: int) -> float:
    if total <= 0 or sid < 1:
        raise SynthesisError("skew weight needs total > 0 and sid >= 1")
    if count == 0:
        return math.inf
    return 1.0 / ((count / total) * sid)


def apply_skew(tree: AccessTree, skew: SkewState, sid: int) -> AccessTree:
    """Scale hop regions by min(1, w): hot nodes act as if cached in a
    smaller effective region."""
    if not skew.popularity:
        return tree
    calls = []
    for c in tree.calls:
        if c.role in ("hop", "head") and c.node_uid in skew.popularity:
            p = skew.popularity[c.node_uid]
            w = 1.0 / (p * sid) if p > 0 else math.inf
            scale = min(1.0, w)
            calls.append(replace(c, bytes=max(1, int(c.bytes * scale))))
        else:
            calls.append(c)
    return AccessTree(tree.operation, tuple(calls))


# ---------------------------------------------------------------------------
# lowering to concrete variants


def _scan_variant(call: Level1Call, profile: HardwareProfile) -> str:
    cmp_tag = "range" if call.comparison == "range" else "eq"
    if call.layout == "col":
        scalar = "scan_scalar_col_%s" % cmp_tag
        simd = "scan_simd_col_%s" % cmp_tag
        if profile.has(simd):
            n = max(1, call.count)
            if profile.predict(simd, [n]).seconds < profile.predict(scalar, [n]).seconds:
                return simd
        return scalar
    return "scan_scalar_row_%s" % cmp_tag


def _sorted_search_variant(call, profile, uniform_keys):
    layout = "col" if call.layout == "col" else "row"
    binary = "sorted_search_binary_%s" % layout
    interp = "sorted_search_interp_%s" % layout
    if uniform_keys and profile.has(interp) and call.count > 1:
        b = profile.predict(binary, [call.count]).seconds
        i = profile.predict(interp, [call.count]).seconds
        if i < b:
            return interp
    return binary


def lower_call(call: Level1Call, profile: HardwareProfile,
               uniform_keys: bool = True) -> CostedCall:
    kind = call.kind
    if kind == "Scan":
        variant, params = _scan_variant(call, profile), [max(1, call.count)]
    elif kind == "SortedSearch":
        variant = _sorted_search_variant(call, profile, uniform_keys)
        params = [max(1, call.count)]
    elif kind == "HashProbe":
        variant = "hash_probe_multiply_shift"
        if not profile.has(variant):
            variant = "hash_probe_kwise"
        params = [max(1, call.bytes)]
    elif kind == "BloomProbe":
        variant = "bloom_probe_multiply_shift"
        if not profile.has(variant):
            variant = "bloom_probe_kwise"
        params = [max(1, call.bytes), max(1, call.aux_get("num_hashes", 1))]
    elif kind == "Sort":
        variant, params = "sort_quicksort", [max(1, call.count)]
    elif kind == "RandomAccess":
        variant, params = "random_access", [max(1, call.bytes)]
    elif kind == "BatchedRandomAccess":
        variant, params = "batched_random_access", [max(1, call.bytes)]
    elif kind == "UnorderedBatchWrite":
        variant = "write_unordered_col" if call.layout == "col" else "write_unordered_row"
        params = [max(1, call.bytes)]
    elif kind == "OrderedBatchWrite":
        variant = "write_ordered_col" if call.layout == "col" else "write_ordered_row"
        params = [max(1, call.bytes), max(1, call.aux_get("data_bytes", call.bytes))]
    elif kind == "ScatteredBatchWrite":
        variant = "write_scattered"
        params = [max(1, call.bytes), max(1, call.aux_get("elements", call.count))]
    else:
        raise SynthesisError("unknown Level-1 call kind %r" % kind)
    pred: Prediction = profile.predict(variant, params)
    return CostedCall(call, variant, pred.seconds, pred.extrapolated)


def lower_to_level2(tree: AccessTree, profile: HardwareProfile,
                    uniform_keys: bool = True) -> CostedTree:
    profile.check_complete()
    costed = tuple(lower_call(c, profile, uniform_keys) for c in tree.calls)
    total = sum(c.weighted_seconds for c in costed)
    return CostedTree(
        operation=tree.operation,
        calls=costed,
        total_seconds=total,
        machine_id=profile.machine_id,
        extrapolated=any(c.extrapolated for c in costed),
    )


# ---------------------------------------------------------------------------
# workload-level costing


@dataclass(frozen=True)
class WorkloadCost:
    total_seconds: float
    per_operation: tuple  # (op kind, seconds) in sequence order
    trees: tuple = ()


def cost_get_set(instance, keys, profile: HardwareProfile,
                 skew: SkewState | None = None) -> WorkloadCost:
    """Cost a set of point lookups in one pass (expected sizes, optional
    skew-aware caching)."""
    uniform = instance.profile.key_distribution == "uniform"
    per_op = []
    total = 0.0
    sid = 0
    for key in keys:
        sid += 1
        tree = synthesize_get(instance, int(key), expected=True)
        if skew is not None:
            tree = apply_skew(tree, skew, sid)
        costed = lower_to_level2(tree, profile, uniform)
        per_op.append(("get", costed.total_seconds))
        total += costed.total_seconds
        if skew is not None:
            skew.record(tree)
            if sid % skew.refresh_period == 0:
                skew.refresh()
                sid = 0
    return WorkloadCost(total, tuple(per_op))


# ---------------------------------------------------------------------------
# renderers


def render_trace(costed: CostedTree) -> str:
    lines = []
    for c in costed.calls:
        mult = "" if c.call.multiplicity == 1.0 else "%.3gx " % c.call.multiplicity
        flag = " [extrapolated]" if c.extrapolated else ""
        lines.append("%s%s = %.6e s  (%s)%s"
                     % (mult, c.call.describe(), c.seconds, c.variant, flag))
    lines.append("total = %.6e s" % costed.total_seconds)
    return "\n".join(lines)


def _psb_arg(call: Level1Call) -> int:
    if call.kind in ("Scan", "SortedSearch", "Sort"):
        return call.count
    if call.role == "value":
        return call.count
    return call.bytes


def render_psb(tree) -> str:
    """Compact probe/scan/binary-search notation with run-length grouping."""
    calls = [c.call if isinstance(c, CostedCall) else c for c in tree.calls]
    terms = [(KIND_LETTER[c.kind], _psb_arg(c)) for c in calls]
    grouped = []
    for letter, arg in terms:
        if grouped and grouped[-1][0] == (letter, arg):
            grouped[-1][1] += 1
        else:
            grouped.append([(letter, arg), 1])
    parts = []
    for (letter, arg), reps in grouped:
        prefix = "%d" % reps if reps > 1 else ""
        parts.append("%s%s(%s)" % (prefix, letter, arg))
    return " + ".join(parts)


def costed_tree_to_dict(costed: CostedTree) -> dict:
    return {
        "operation": costed.operation,
        "machine_id": costed.machine_id,
        "total_seconds": costed.total_seconds,
        "extrapolated": costed.extrapolated,
        "psb": render_psb(costed),
        "calls": [
            {
                "kind": c.call.kind,
                "layout": c.call.layout,
                "count": c.call.count,
                "bytes": c.call.bytes,
                "role": c.call.role,
                "depth": c.call.depth,
                "comparison": c.call.comparison,
                "multiplicity": c.call.multiplicity,
                "aux": {k: v for k, v in c.call.aux},
                "variant": c.variant,
                "seconds": c.seconds,
                "extrapolated": c.extrapolated,
            }
            for c in costed.calls
        ],
    }

"""Simulated population of a structure: blocks, node counts and byte sizes.

Costing an operation needs the expected state of the structure: how many
nodes exist, how deep they sit, and how many bytes each level occupies.
This module recursively divides a block of synthetic data through the
elements of a spec. Only counts and partition bounds are produced; no keys
or values are stored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .layout import ElementSpec, SpecError, StructureSpec, validate_structure

POINTER_BYTES = 8
PARTIAL_KEY_BYTES = 1  # width costed for functional (partial) retention
MAX_DEPTH = 64


class BuildError(SpecError):
    pass


@dataclass(frozen=True)
class DataProfile:
    entry_count: int
    key_size: int = 8
    value_size: int = 8
    key_distribution: str = "uniform"  # uniform | zipf | explicit
    zipf_alpha: float = 1.0
    key_domain: tuple = (0, 2**40)
    explicit_keys: object = None

    def __post_init__(self):
        if self.entry_count < 0:
            raise ValueError("entry_count must be nonnegative")
        if self.key_size < 1 or self.value_size < 0:
            raise ValueError("key_size >= 1 and value_size >= 0 required")
        if self.key_distribution == "zipf" and self.zipf_alpha <= 0:
            raise ValueError("zipf alpha must be positive")
        lo, hi = self.key_domain
        if hi <= lo:
            raise ValueError("key_domain must be a nonempty range")

    @property
    def record_bytes(self) -> int:
        return self.key_size + self.value_size

    def to_dict(self) -> dict:
        return {
            "entry_count": self.entry_count,
            "key_size": self.key_size,
            "value_size": self.value_size,
            "key_distribution": self.key_distribution,
            "zipf_alpha": self.zipf_alpha,
            "key_domain": list(self.key_domain),
        }

    @staticmethod
    def from_dict(doc: dict) -> "DataProfile":
        return DataProfile(
            entry_count=int(doc["entry_count"]),
            key_size=int(doc.get("key_size", 8)),
            value_size=int(doc.get("value_size", 8)),
            key_distribution=doc.get("key_distribution", "uniform"),
            zipf_alpha=float(doc.get("zipf_alpha", 1.0)),
            key_domain=tuple(doc.get("key_domain", (0, 2**40))),
        )


def zipf_weights(n_ranks: int, alpha: float) -> np.ndarray:
    ranks = np.arange(1, n_ranks + 1, dtype=np.float64)
    w = ranks ** (-alpha)
    return w / w.sum()


def generate_keys(profile: DataProfile, seed: int, count: int | None = None) -> np.ndarray:
    """Deterministic key sample driving distribution-dependent partitioning."""
    n = profile.entry_count if count is None else count
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0xD5CA1C]))
    lo, hi = profile.key_domain
    if n == 0:
        return np.empty(0, dtype=np.int64)
    if profile.key_distribution == "explicit":
        keys = np.asarray(profile.explicit_keys, dtype=np.int64)
        return keys[:n] if len(keys) >= n else np.resize(keys, n)
    if profile.key_distribution == "zipf":
        span = hi - lo
        n_ranks = int(min(n, span, 10**6))
        weights = zipf_weights(n_ranks, profile.zipf_alpha)
        ranks = rng.choice(n_ranks, size=n, p=weights)
        stride = max(1, span // max(1, n_ranks))
        return (lo + ranks.astype(np.int64) * stride).astype(np.int64)
    return rng.integers(lo, hi, size=n, dtype=np.int64)


# ---------------------------------------------------------------------------
# byte accounting


def _fence_bytes_per_child(element: ElementSpec, key_size: int) -> int:
    zm = element.tag("zone_maps")
    if zm == "off":
        return 0
    return 2 * key_size if zm == "both" else key_size


def fence_count(element: ElementSpec, n_children: int) -> int:
    zm = element.tag("zone_maps")
    if zm == "off" or n_children == 0:
        return 0
    if zm == "exact":
        return n_children
    if zm == "both":
        return 2 * (n_children - 1)
    return max(0, n_children - 1)


def pointers_eliminated(element: ElementSpec) -> bool:
    """Offset-addressable children need no pointers (inline BFS homogeneous)."""
    return (
        element.tag("sub_block_location") == "inline"
        and element.tag("sub_block_layout") in ("bfs", "bfs_layer")
        and element.tag("sub_blocks_homogeneous") == "true"
    )


def materializes_node(element: ElementSpec) -> bool:
    """False for connector elements (linked/skip lists): they retain nothing,
    address no child directly, and keep all metadata scattered on children."""
    if element.is_terminal or element.retains_keys or element.retains_values:
        return True
    if element.tag("intra_node_access") == "direct":
        return True
    if element.tag("zone_maps") != "off" and element.tag("filters_layout") == "consolidate":
        return True
    if element.tag("bloom_filters") == "on" and element.tag("filters_layout") == "consolidate":
        return True
    if element.tag("links_layout") == "consolidate" and (
        element.tag("immediate_links") != "none" or element.tag("skip_links") != "none"
    ):
        return True
    return False


def _link_dirs(tag: str) -> int:
    return {"none": 0, "next": 1, "prev": 1, "both": 2, "forward": 1, "backward": 1}[tag]


def child_overhead_bytes(parent: ElementSpec, profile: DataProfile) -> int:
    """Metadata a parent scatters onto each of its children."""
    bytes_ = 0
    if parent.tag("links_layout") == "scatter":
        bytes_ += _link_dirs(parent.tag("immediate_links")) * POINTER_BYTES
        if parent.tag("skip_links") != "none":
            bytes_ += 2 * POINTER_BYTES  # expected tower height
    if not materializes_node(parent) and parent.tag("filters_layout") == "scatter":
        bytes_ += _fence_bytes_per_child(parent, profile.key_size)
        if parent.tag("bloom_filters") == "on":
            bytes_ += int(parent.param("bloom_filters", 1)) // 8
    return bytes_


def node_byte_size(
    element: ElementSpec,
    entries: int,
    profile: DataProfile,
    n_children: int = 0,
    parent: ElementSpec | None = None,
) -> int:
    """Bytes of one node: retained data + pointers + fences + filters + links."""
    if not materializes_node(element):
        return 0
    bytes_ = 0

    kr = element.tag("key_retention")
    if kr == "full":
        bytes_ += entries * profile.key_size
    elif kr == "func":
        bytes_ += entries * PARTIAL_KEY_BYTES
    vr = element.tag("value_retention")
    if vr == "full":
        bytes_ += entries * profile.value_size
    elif vr == "func":
        bytes_ += entries * PARTIAL_KEY_BYTES

    if not element.is_terminal and n_children > 0:
        access = element.tag("intra_node_access")
        if access == "direct":
            if not pointers_eliminated(element):
                per = 2 if element.tag("sub_block_location") == "double_pointed" else 1
                bytes_ += n_children * per * POINTER_BYTES
        else:
            bytes_ += POINTER_BYTES  # head/tail/functional entry point
        bytes_ += fence_count(element, n_children) * profile.key_size
        if element.tag("bloom_filters") == "on":
            bytes_ += n_children * (int(element.param("bloom_filters", 1)) // 8)
        if element.tag("links_layout") == "consolidate":
            bytes_ += _link_dirs(element.tag("immediate_links")) * n_children * POINTER_BYTES
            if element.tag("skip_links") != "none":
                bytes_ += n_children * POINTER_BYTES
    elif element.is_terminal:
        if element.tag("bloom_filters") == "on":
            bytes_ += int(element.param("bloom_filters", 1)) // 8

    bytes_ += _link_dirs(element.tag("area_links")) * POINTER_BYTES
    if parent is not None:
        bytes_ += child_overhead_bytes(parent, profile)
    return bytes_


# ---------------------------------------------------------------------------
# block tree


@dataclass
class BlockInstance:
    element_name: str
    level: int
    entry_count: int
    byte_size: int
    materialized: bool
    children: list = field(default_factory=list)
    partition_bounds: tuple | None = None  # (lo, hi) when derivable
    routing: str = "chain"  # compute | fences | chain | terminal
    child_boundaries: object = None  # sorted child split keys for fence routing
    child_slots: dict | None = None  # partition index -> children position when lazily sparse
    uid: int = 0  # stable pre-order id within one instance

    def child_at(self, partition_idx: int):
        """Child for a partition index, None when lazily absent."""
        if self.child_slots is not None:
            pos = self.child_slots.get(partition_idx)
            return None if pos is None else self.children[pos]
        if 0 <= partition_idx < len(self.children):
            return self.children[partition_idx]
        return None

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass(frozen=True)
class InstanceStats:
    height: int
    nodes_per_level: tuple
    bytes_per_level: tuple
    cumulative_bytes: tuple
    total_bytes: int
    total_nodes: int

    def to_dict(self) -> dict:
        return {
            "height": self.height,
            "nodes_per_level": list(self.nodes_per_level),
            "bytes_per_level": list(self.bytes_per_level),
            "cumulative_bytes": list(self.cumulative_bytes),
            "total_bytes": self.total_bytes,
            "total_nodes": self.total_nodes,
        }


def path_region_size(stats: InstanceStats, level: int) -> int:
    """Cumulative bytes of all nodes at levels 0..level inclusive."""
    if level < 0 or level > stats.height:
        raise IndexError("level %d out of range (height %d)" % (level, stats.height))
    return stats.cumulative_bytes[level]


@dataclass(frozen=True)
class StructureInstance:
    spec: StructureSpec
    profile: DataProfile
    seed: int
    root: BlockInstance
    stats: InstanceStats

    def region_through_level(self, level: int) -> int:
        return path_region_size(self.stats, level)


def chain_terminal_capacity(spec: StructureSpec, start: str) -> int:
    cur = start
    seen = set()
    while cur not in seen:
        seen.add(cur)
        elem = spec.elements[cur]
        if elem.is_terminal:
            return elem.terminal_capacity
        cur = spec.edges.get(cur)
        if cur is None:
            break
    raise BuildError("no terminal reachable from %r" % start)


def _fanout_value(elem: ElementSpec, entries: int, dest_cap: int) -> int:
    tag = elem.tag("fanout")
    if tag == "fixed":
        return int(elem.param("fanout"))
    if tag == "unlimited":
        cap = dest_cap
        if elem.tag("sub_block_capacity") == "fixed":
            cap = int(elem.param("sub_block_capacity"))
        return max(1, math.ceil(entries / max(1, cap)))
    if tag == "func":
        expr = elem.param("fanout")
        if expr == "sqrt_entries":
            return max(1, math.ceil(math.sqrt(entries)))
        # entries_div_page and anything unrecognized: one page per capacity
        return max(1, math.ceil(entries / max(1, dest_cap)))
    raise BuildError("terminal element cannot partition")


def _radix_digits(span: int, radix: int) -> int:
    digits, covered = 1, radix
    while covered < span:
        covered *= radix
        digits += 1
    return digits


def _split_counts(elem, keys, f, profile, same_depth, interval=None):
    """Return (counts, boundaries, bounds_list, child_key_slices).

    ``interval`` is the key range this block covers; data-independent
    partitioning (range, radix) subdivides it, not the whole domain.
    """
    n = len(keys)
    part = elem.tag("partitioning")
    lo, hi = interval if interval is not None else profile.key_domain
    if hi <= lo:
        hi = lo + 1

    if part in ("sorted", "k_ary", "dd_func"):
        keys = np.sort(keys)
        edges = [round(i * n / f) for i in range(f + 1)]
        counts = [edges[i + 1] - edges[i] for i in range(f)]
        slices = [keys[edges[i]:edges[i + 1]] for i in range(f)]
        boundaries = [int(keys[e - 1]) if e > 0 else int(lo) for e in edges[1:-1]]
        bounds = [
            (int(s[0]), int(s[-1])) if len(s) else None for s in slices
        ]
        return counts, boundaries, bounds, slices

    if part == "di_func":
        idx = (keys % f).astype(np.int64) if n else np.empty(0, dtype=np.int64)
        order = np.argsort(idx, kind="stable")
        sorted_keys = keys[order]
        counts = np.bincount(idx, minlength=f).tolist()
        offsets = np.concatenate(([0], np.cumsum(counts)))
        slices = [sorted_keys[offsets[i]:offsets[i + 1]] for i in range(f)]
        return counts, None, [None] * f, slices

    if part == "range":
        span = hi - lo
        cuts = [lo + (i * span) // f for i in range(1, f)]
        idx = np.searchsorted(np.asarray(cuts), keys, side="right") if n else np.empty(0, np.int64)
        order = np.argsort(idx, kind="stable")
        sorted_keys = keys[order]
        counts = np.bincount(idx, minlength=f).tolist()
        offsets = np.concatenate(([0], np.cumsum(counts)))
        slices = [sorted_keys[offsets[i]:offsets[i + 1]] for i in range(f)]
        edges_lo = [lo] + cuts
        edges_hi = cuts + [hi]
        bounds = [(int(a), int(b)) for a, b in zip(edges_lo, edges_hi)]
        return counts, [int(c) for c in cuts], bounds, slices

    if part == "radix":
        span = hi - lo
        digits = _radix_digits(span, f)
        shift = f ** max(0, digits - 1 - same_depth)
        idx = (((keys - lo) // shift) % f).astype(np.int64) if n else np.empty(0, np.int64)
        order = np.argsort(idx, kind="stable")
        sorted_keys = keys[order]
        counts = np.bincount(idx, minlength=f).tolist()
        offsets = np.concatenate(([0], np.cumsum(counts)))
        slices = [sorted_keys[offsets[i]:offsets[i + 1]] for i in range(f)]
        return counts, None, [None] * f, slices

    # append / temporal: pages fill in arrival order
    cap = max(1, math.ceil(n / f))
    if elem.tag("sub_block_capacity") == "fixed":
        cap = int(elem.param("sub_block_capacity"))
        if cap * f < n:
            cap = max(1, math.ceil(n / f))
    counts, remaining = [], n
    for _ in range(f):
        take = min(cap, remaining)
        counts.append(take)
        remaining -= take
    if remaining:
        counts[-1] += remaining
    offsets = np.concatenate(([0], np.cumsum(counts)))
    slices = [keys[offsets[i]:offsets[i + 1]] for i in range(f)]
    return counts, None, [None] * f, slices


def _routing_kind(elem: ElementSpec) -> str:
    if elem.is_terminal:
        return "terminal"
    return elem.partition_routing


def build_instance(
    spec: StructureSpec, profile: DataProfile, seed: int = 0
) -> StructureInstance:
    """Apply the spec to a synthetic data sample and aggregate stats."""
    report = validate_structure(spec)
    if not report.ok:
        raise BuildError("invalid spec: %s" % (report.violations,))

    keys = generate_keys(profile, seed)
    level_nodes: list = []
    level_bytes: list = []

    def account(level, node_bytes, materialized):
        while len(level_nodes) <= level:
            level_nodes.append(0)
            level_bytes.append(0)
        if materialized:
            level_nodes[level] += 1
            level_bytes[level] += node_bytes

    def make_terminal(elem, keys_slice, level, parent_elem, bounds):
        n = len(keys_slice)
        if n > elem.terminal_capacity and parent_elem is not None:
            raise BuildError(
                "terminal %r over capacity: %d > %d"
                % (elem.name, n, elem.terminal_capacity)
            )
        materialized = n > 0 or elem.tag("sub_block_instantiation") == "eager"
        size = node_byte_size(elem, n, profile, parent=parent_elem) if materialized else 0
        account(level, size, materialized)
        # bounds come only from order-derived partitioning; append-order
        # pages cannot prune ranges
        return BlockInstance(elem.name, level, n, size, materialized,
                             partition_bounds=bounds, routing="terminal")

    def descend(elem, keys_slice, level, parent_elem, same_depth, bounds):
        if level > MAX_DEPTH:
            raise BuildError("non-shrinking recursion")
        n = len(keys_slice)
        if elem.is_terminal or n == 0:
            target = elem
            if not elem.is_terminal:
                # empty block: fall through to the terminal element
                cur = elem.name
                while not spec.elements[cur].is_terminal:
                    cur = spec.edges[cur]
                target = spec.elements[cur]
            return make_terminal(target, keys_slice, level, parent_elem, bounds)

        dest = spec.destination(elem.name)
        dest_cap = chain_terminal_capacity(spec, elem.name)
        f = _fanout_value(elem, n, dest_cap)
        counts, boundaries, bounds_list, slices = _split_counts(
            elem, keys_slice, f, profile, same_depth, interval=bounds
        )

        recursion = elem.tag("recursion") == "yes"
        depth_expr = elem.param("recursion") if recursion else ""
        lazy = elem.tag("sub_block_instantiation") == "lazy"

        children = []
        slots = {}
        for i in range(f):
            child_keys = slices[i]
            m = counts[i]
            if m == 0 and lazy:
                continue
            slots[i] = len(children)
            if recursion:
                if depth_expr.startswith("depth_"):
                    keep = same_depth + 1 < int(depth_expr.split("_", 1)[1])
                else:  # fit: recurse until a block fits the terminal
                    keep = m > dest_cap
                nxt = elem if keep else dest
            else:
                nxt = dest
            if nxt is elem and m >= n and f == 1:
                raise BuildError("non-shrinking recursion")
            if nxt is elem and m >= n:
                raise BuildError("non-shrinking recursion")
            children.append(
                descend(nxt, child_keys, level + 1, elem,
                        same_depth + 1 if nxt is elem else 0, bounds_list[i])
            )

        materialized = materializes_node(elem)
        size = node_byte_size(elem, n, profile, n_children=f, parent=parent_elem)
        account(level, size, materialized)
        block = BlockInstance(
            elem.name, level, n, size, materialized, children=children,
            partition_bounds=bounds, routing=_routing_kind(elem),
            child_boundaries=boundaries,
            child_slots=slots if len(slots) != f else None,
        )
        return block

    root = descend(spec.root_element, keys, 0, None, 0, None)
    for uid, block in enumerate(root.walk()):
        block.uid = uid

    cumulative, running = [], 0
    for b in level_bytes:
        running += b
        cumulative.append(running)
    stats = InstanceStats(
        height=len(level_nodes) - 1,
        nodes_per_level=tuple(level_nodes),
        bytes_per_level=tuple(level_bytes),
        cumulative_bytes=tuple(cumulative),
        total_bytes=running,
        total_nodes=sum(level_nodes),
    )
    return StructureInstance(spec=spec, profile=profile, seed=seed, root=root, stats=stats)


# ---------------------------------------------------------------------------
# query routing over an instance


def route_child(block: BlockInstance, key: int, profile: DataProfile,
                spec: StructureSpec, same_depth: int = 0) -> int | None:
    """Index of the child a key descends into, None when not routable."""
    elem = spec.elements[block.element_name]
    if block.routing == "compute":
        part = elem.tag("partitioning")
        f = len(block.children)
        if f == 0:
            return None
        lo, hi = block.partition_bounds or profile.key_domain
        if hi <= lo:
            hi = lo + 1
        if part == "di_func":
            return int(key % f)
        if part == "range":
            span = hi - lo
            i = ((key - lo) * f) // span
            return int(min(max(i, 0), f - 1))
        if part == "radix":
            radix = f
            digits = _radix_digits(hi - lo, radix)
            shift = radix ** max(0, digits - 1 - same_depth)
            return int(((key - lo) // shift) % radix)
        return None
    if block.routing == "fences" and block.child_boundaries is not None:
        return int(np.searchsorted(np.asarray(block.child_boundaries), key, side="left"))
    return None


def descend_path(instance: StructureInstance, key: int) -> list:
    """Blocks visited by a point lookup, root to terminal. Chain levels
    contribute the first page (traversal length is a costing concern)."""
    path = []
    block = instance.root
    same_depth = 0
    while block is not None:
        path.append(block)
        if not block.children:
            break
        idx = route_child(block, key, instance.profile, instance.spec, same_depth)
        if idx is None:
            # chain: lookup enters the first child
            nxt = block.children[0] if block.children else None
        else:
            nxt = block.child_at(idx)
        if nxt is not None and nxt.element_name == block.element_name:
            same_depth += 1
        else:
            same_depth = 0
        block = nxt
    return path


# ---------------------------------------------------------------------------
# graph export


def export_dot(instance: StructureInstance) -> str:
    """Graph description of the block tree, deterministic pre-order ids."""
    lines = ["digraph instance {", '  node [shape=box, fontsize=9];']
    counter = [0]

    def visit(block, parent_id):
        my_id = counter[0]
        counter[0] += 1
        label = "%s\\nlevel=%d entries=%d bytes=%d" % (
            block.element_name, block.level, block.entry_count, block.byte_size
        )
        lines.append('  n%d [label="%s"];' % (my_id, label))
        if parent_id is not None:
            lines.append("  n%d -> n%d;" % (parent_id, my_id))
        for child in block.children:
            visit(child, my_id)

    visit(instance.root, None)
    lines.append("}")
    return "\n".join(lines) + "\n"

"""What-if comparison and auto-completion of partial designs.

What-if questions re-cost a design with exactly one input changed (layout,
hardware profile, or workload) so the two numbers are comparable. The
completion search is a depth-limited dynamic program: at each block it
tries every candidate element, recursively solves the query blocks the
candidate's partitioning creates, and memoizes best sub-solutions keyed by
an exact query-block signature, so cached and uncached runs produce
identical costs.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass, field, replace

import numpy as np

from .catalog import DomainValue
from .instance import DataProfile, build_instance, node_byte_size
from .layout import ElementSpec, StructureSpec, validate_element, validate_structure
from .models import HardwareProfile
from .synthesis import (
    SkewState,
    apply_skew,
    lower_to_level2,
    synthesize_bulk_load,
    synthesize_get,
    synthesize_range,
    synthesize_update,
)
from .workload import WorkloadSpec

POINTER_BYTES = 8


class SearchError(ValueError):
    pass


# ---------------------------------------------------------------------------
# workload costing


@dataclass(frozen=True)
class WorkloadReport:
    total_seconds: float
    by_operation: dict  # op kind -> seconds
    by_depth: dict  # depth -> seconds
    operations: int
    extrapolated: bool = False

    def to_dict(self) -> dict:
        return {
            "total_seconds": self.total_seconds,
            "by_operation": dict(self.by_operation),
            "by_depth": {str(k): v for k, v in self.by_depth.items()},
            "operations": self.operations,
            "extrapolated": self.extrapolated,
        }


def cost_workload(
    spec: StructureSpec,
    workload: WorkloadSpec,
    profile: HardwareProfile,
    mode: str = "set",
    seed: int = 0,
    skew: bool = False,
) -> WorkloadReport:
    """Total predicted latency of the operation sequence over the spec."""
    report = validate_structure(spec)
    if not report.ok:
        raise SearchError("invalid spec: %s" % (report.violations,))
    instance = build_instance(spec, workload.data, seed=seed)
    expected = mode == "set"
    uniform = workload.data.key_distribution == "uniform"
    state = SkewState() if skew else None
    totals: dict = {}
    by_depth: dict = {}
    total = 0.0
    extrapolated = False
    sid_in_window = 0
    for op in workload.operations:
        if op.op == "get":
            tree = synthesize_get(instance, op.key, expected=expected)
        elif op.op == "range_get":
            tree = synthesize_range(instance, op.key, op.hi)
        elif op.op == "update":
            tree = synthesize_update(instance, op.key, expected=expected)
        elif op.op == "bulk_load":
            tree = synthesize_bulk_load(instance)
        else:
            raise SearchError("unknown operation %r" % op.op)
        if state is not None:
            sid_in_window += 1
            tree = apply_skew(tree, state, sid_in_window)
        costed = lower_to_level2(tree, profile, uniform)
        total += costed.total_seconds
        totals[op.op] = totals.get(op.op, 0.0) + costed.total_seconds
        extrapolated = extrapolated or costed.extrapolated
        for call in costed.calls:
            by_depth[call.call.depth] = (
                by_depth.get(call.call.depth, 0.0) + call.weighted_seconds
            )
        if state is not None:
            state.record(tree)
            if sid_in_window >= state.refresh_period:
                state.refresh()
                sid_in_window = 0
    return WorkloadReport(
        total_seconds=total, by_operation=totals, by_depth=by_depth,
        operations=len(workload.operations), extrapolated=extrapolated,
    )


# ---------------------------------------------------------------------------
# what-if


@dataclass(frozen=True)
class WhatIfRequest:
    base: StructureSpec
    layout_delta: dict | None = None  # element -> {primitive: DomainValue}
    profile_swap: HardwareProfile | None = None
    workload_delta: WorkloadSpec | None = None
    mode: str = "set"

    def __post_init__(self):
        axes = sum(
            x is not None
            for x in (self.layout_delta, self.profile_swap, self.workload_delta)
        )
        if axes != 1:
            raise SearchError("a what-if request varies exactly one axis")


@dataclass(frozen=True)
class ComparisonReport:
    base: WorkloadReport
    variant: WorkloadReport
    delta_seconds: float
    axis: str
    depth_deltas: dict

    def to_dict(self) -> dict:
        return {
            "axis": self.axis,
            "base": self.base.to_dict(),
            "variant": self.variant.to_dict(),
            "delta_seconds": self.delta_seconds,
            "depth_deltas": {str(k): v for k, v in self.depth_deltas.items()},
        }


def apply_layout_delta(spec: StructureSpec, delta: dict) -> StructureSpec:
    elements = dict(spec.elements)
    for elem_name, changes in delta.items():
        if elem_name not in elements:
            raise SearchError("layout delta names unknown element %r" % elem_name)
        elem = elements[elem_name]
        for primitive, value in changes.items():
            if not isinstance(value, DomainValue):
                value = DomainValue(value[0], tuple(value[1:])) if isinstance(value, (list, tuple)) else DomainValue(str(value))
            elem = elem.with_value(primitive, value)
        elements[elem_name] = elem
    return replace(spec, elements=elements)


def what_if(
    req: WhatIfRequest,
    workload: WorkloadSpec,
    profile: HardwareProfile,
    seed: int = 0,
) -> ComparisonReport:
    """Cost base and variant under identical remaining inputs."""
    base_report = cost_workload(req.base, workload, profile, req.mode, seed)
    if req.layout_delta is not None:
        axis = "design"
        variant_spec = apply_layout_delta(req.base, req.layout_delta)
        check = validate_structure(variant_spec)
        if not check.ok:
            raise SearchError("variant spec invalid: %s" % (check.violations,))
        variant = cost_workload(variant_spec, workload, profile, req.mode, seed)
    elif req.profile_swap is not None:
        axis = "hardware"
        variant = cost_workload(req.base, workload, req.profile_swap, req.mode, seed)
    else:
        axis = "workload"
        variant = cost_workload(req.base, req.workload_delta, profile, req.mode, seed)
    depths = set(base_report.by_depth) | set(variant.by_depth)
    depth_deltas = {
        d: variant.by_depth.get(d, 0.0) - base_report.by_depth.get(d, 0.0)
        for d in sorted(depths)
    }
    return ComparisonReport(
        base=base_report,
        variant=variant,
        delta_seconds=variant.total_seconds - base_report.total_seconds,
        axis=axis,
        depth_deltas=depth_deltas,
    )


def rank_designs(specs, workload, profile, mode: str = "set", seed: int = 0):
    """Stable sort by total cost; equal costs keep submission order."""
    costed = [(spec, cost_workload(spec, workload, profile, mode, seed).total_seconds)
              for spec in specs]
    return sorted(costed, key=lambda pair: pair[1])


# ---------------------------------------------------------------------------
# design auto-completion


@dataclass(frozen=True)
class QueryBlock:
    entries: int
    lo: int
    hi: int
    get_keys: tuple
    update_keys: tuple
    ranges: tuple  # (lo, hi) pairs
    inserts: int

    def signature(self) -> tuple:
        keys_crc = zlib.crc32(np.asarray(self.get_keys, np.int64).tobytes())
        upd_crc = zlib.crc32(np.asarray(self.update_keys, np.int64).tobytes())
        rng_crc = zlib.crc32(np.asarray(self.ranges, np.int64).tobytes())
        return (self.entries, self.lo, self.hi, len(self.get_keys),
                len(self.update_keys), len(self.ranges), self.inserts,
                keys_crc, upd_crc, rng_crc)

    @property
    def op_count(self) -> int:
        return len(self.get_keys) + len(self.update_keys) + len(self.ranges) + self.inserts


def query_block_from_workload(workload: WorkloadSpec) -> QueryBlock:
    lo, hi = workload.data.key_domain
    gets = tuple(op.key for op in workload.operations if op.op == "get")
    updates = tuple(op.key for op in workload.operations if op.op == "update")
    ranges = tuple((op.key, op.hi) for op in workload.operations if op.op == "range_get")
    return QueryBlock(
        entries=workload.data.entry_count, lo=lo, hi=hi,
        get_keys=gets, update_keys=updates, ranges=ranges,
        inserts=sum(1 for op in workload.operations if op.op == "bulk_load"),
    )


@dataclass
class DesignNode:
    element: ElementSpec
    cost: float
    children: dict = field(default_factory=dict)  # block index -> DesignNode

    def chain(self) -> list:
        out = [self.element]
        node = self
        while node.children:
            node = node.children[min(node.children)]
            out.append(node.element)
        return out

    def to_dict(self) -> dict:
        return {
            "element": self.element.name,
            "cost": self.cost,
            "children": {str(i): c.to_dict() for i, c in sorted(self.children.items())},
        }


@dataclass(frozen=True)
class DesignResult:
    root: DesignNode
    cost: float
    cache_hits: int
    evaluated: int

    def as_structure_spec(self, name: str = "completed") -> StructureSpec:
        """Collapse the (possibly polymorphic) solution to the chain through
        the first block of each level."""
        chain = self.root.chain()
        elements, edges = {}, {}
        prev = None
        for i, elem in enumerate(chain):
            label = "%s_l%d" % (elem.name, i)
            elem = replace(elem, name=label)
            elements[label] = elem
            if prev is not None:
                edges[prev] = label
            prev = label
        return StructureSpec(name=name, elements=elements,
                             root=next(iter(elements)), edges=edges)


def _candidate_fanout(elem: ElementSpec, entries: int) -> int:
    tag = elem.tag("fanout")
    if tag == "fixed":
        return int(elem.param("fanout"))
    if tag == "unlimited":
        cap = 256
        if elem.tag("sub_block_capacity") == "fixed":
            cap = int(elem.param("sub_block_capacity"))
        return max(1, math.ceil(entries / cap))
    if tag == "func":
        return max(2, math.ceil(math.sqrt(max(1, entries))))
    return 0


def _route_index(elem, key, lo, hi, f):
    part = elem.tag("partitioning")
    if part == "di_func":
        return int(key) % f
    span = max(1, hi - lo)
    idx = ((int(key) - lo) * f) // span
    return min(max(idx, 0), f - 1)


def partition_block(block: QueryBlock, elem: ElementSpec) -> list:
    """Split data and route queries per the element's partitioning."""
    f = _candidate_fanout(elem, block.entries)
    if f <= 0:
        raise SearchError("cannot partition with a terminal element")
    part = elem.tag("partitioning")
    base, extra = divmod(block.entries, f)
    counts = [base + (1 if i < extra else 0) for i in range(f)]
    span = max(1, block.hi - block.lo)
    bounds = [
        (block.lo + (i * span) // f, block.lo + ((i + 1) * span) // f)
        for i in range(f)
    ]
    gets: list = [[] for _ in range(f)]
    updates: list = [[] for _ in range(f)]
    ranges: list = [[] for _ in range(f)]
    for k in block.get_keys:
        gets[_route_index(elem, k, block.lo, block.hi, f)].append(k)
    for k in block.update_keys:
        updates[_route_index(elem, k, block.lo, block.hi, f)].append(k)
    for r in block.ranges:
        if part in ("di_func", "radix"):
            for i in range(f):  # hash order cannot bound a range
                ranges[i].append(r)
        else:
            i0 = _route_index(elem, r[0], block.lo, block.hi, f)
            i1 = _route_index(elem, r[1], block.lo, block.hi, f)
            for i in range(i0, i1 + 1):
                ranges[i].append(r)
    ins = [block.inserts // f + (1 if i < block.inserts % f else 0) for i in range(f)]
    return [
        QueryBlock(
            entries=counts[i], lo=bounds[i][0], hi=bounds[i][1],
            get_keys=tuple(gets[i]), update_keys=tuple(updates[i]),
            ranges=tuple(ranges[i]), inserts=ins[i],
        )
        for i in range(f)
    ]


def _elem_fingerprint(elem: ElementSpec) -> tuple:
    return tuple(sorted((p, str(v)) for p, v in elem.assignments.items()))


class _GroupCoster:
    """Per-node cost of a query block under a candidate element. Region
    sizes assume the candidate fills its whole level (entry conservation
    keeps level totals exact even though blocks are solved independently)."""

    def __init__(self, profile: HardwareProfile, data: DataProfile, total_entries: int):
        self.profile = profile
        self.data = data
        self.total = max(1, total_entries)

    def level_region(self, elem, block, path_bytes):
        n = max(1, block.entries)
        f = 0 if elem.is_terminal else _candidate_fanout(elem, block.entries)
        node_bytes = node_byte_size(
            elem, block.entries if elem.is_terminal else 0, self.data, n_children=f
        )
        siblings = max(1, self.total // n)
        return path_bytes + node_bytes * siblings, node_bytes

    def node_cost(self, elem: ElementSpec, block: QueryBlock, path_bytes: int):
        if block.op_count == 0:
            return 0.0, path_bytes
        p = self.profile
        region, node_bytes = self.level_region(elem, block, path_bytes)
        region = max(1, region)
        keysz = self.data.key_size
        n_ops = 0.0

        arrival_variant = (
            "hash_probe_multiply_shift" if (not elem.is_terminal and elem.hash_routed)
            else "random_access"
        )
        arrival = p.predict(arrival_variant, [region]).seconds

        per_get = arrival
        if elem.is_terminal:
            n = max(1, block.entries)
            if elem.is_sorted:
                per_get += p.predict("sorted_search_binary_col", [n]).seconds
            else:
                per_get += p.predict("scan_scalar_col_eq", [max(1, n // 2)]).seconds
            per_get += p.predict("random_access", [max(1, n * self.data.value_size)]).seconds
        else:
            f = _candidate_fanout(elem, block.entries)
            if elem.partition_routing == "fences" and f > 1:
                per_get += p.predict("sorted_search_binary_row", [max(1, f - 1)]).seconds

        per_range = arrival
        if elem.is_terminal:
            n = max(1, block.entries)
            per_range += p.predict("scan_scalar_col_range", [n]).seconds

        record = self.data.record_bytes
        per_insert = arrival
        if elem.is_terminal:
            if elem.is_sorted:
                per_insert += p.predict(
                    "write_ordered_col", [record, max(record, node_bytes)]
                ).seconds
            else:
                per_insert += p.predict("write_unordered_col", [record]).seconds

        per_update = per_get + p.predict("write_unordered_col", [record]).seconds

        cost = (
            len(block.get_keys) * per_get
            + len(block.ranges) * per_range
            + block.inserts * per_insert
            + len(block.update_keys) * per_update
        )
        return cost, region


def meaningful_path(elem, block, path, candidates) -> bool:
    """Prune repeats of an identical (element, block) state and partitioners
    that cannot discriminate the block's queries, provided an alternative
    candidate exists."""
    state = (_elem_fingerprint(elem), block.signature())
    if state in path:
        return False
    if (
        elem.tag("partitioning") in ("di_func", "radix")
        and block.ranges
        and not block.get_keys
        and not block.update_keys
    ):
        others = [
            c for c in candidates
            if c is not elem and (c.is_terminal or c.tag("partitioning") not in ("di_func", "radix"))
        ]
        if others:
            return False
    return True


INFEASIBLE = math.inf


def complete_design(
    workload: WorkloadSpec,
    candidates: list,
    profile: HardwareProfile,
    depth_limit: int = 4,
    partial: list | None = None,
    use_cache: bool = True,
    prune: bool = True,
) -> DesignResult:
    """Fill the missing hierarchy below a (possibly empty) prefix chain.

    Every candidate is tried for every block; blocks created by a
    candidate's partitioning are solved independently and memoized by
    exact signature, preserving cost equality with the uncached search.
    """
    for elem in candidates:
        rep = validate_element(elem)
        if not rep.ok:
            raise SearchError("invalid candidate %r: %s" % (elem.name, rep.violations))
    if not any(e.is_terminal for e in candidates):
        raise SearchError("no terminal candidate: search is unsatisfiable")

    coster = _GroupCoster(profile, workload.data, workload.data.entry_count)
    page_size = profile.page_size
    cache: dict = {}
    stats = {"hits": 0, "evaluated": 0}

    def solve(block: QueryBlock, level: int, path: tuple, path_bytes: int):
        min_size = block.entries * workload.data.record_bytes <= page_size
        key = (block.signature(), level, path_bytes)
        if use_cache and key in cache:
            stats["hits"] += 1
            return cache[key]

        best: DesignNode | None = None
        for elem in candidates:
            if not elem.is_terminal and (min_size or level + 1 >= depth_limit):
                continue
            if prune and not elem.is_terminal and not meaningful_path(
                elem, block, path, candidates
            ):
                continue
            if elem.is_terminal and block.entries > elem.terminal_capacity:
                continue
            stats["evaluated"] += 1
            node_cost, region = coster.node_cost(elem, block, path_bytes)
            if elem.is_terminal:
                node = DesignNode(elem, node_cost)
            else:
                sub_blocks = partition_block(block, elem)
                children = {}
                total = node_cost
                state = (_elem_fingerprint(elem), block.signature())
                ok = True
                for i, sub in enumerate(sub_blocks):
                    child = solve(sub, level + 1, path + (state,), region)
                    if child is None:
                        ok = False
                        break
                    children[i] = child
                    total += child.cost
                if not ok:
                    continue
                node = DesignNode(elem, total, children)
            if best is None or node.cost < best.cost:
                best = node
        if use_cache:
            cache[key] = best
        return best

    block = query_block_from_workload(workload)
    level = 0
    path: tuple = ()
    path_bytes = 0
    prefix_nodes = []
    for elem in partial or []:
        cost, region = coster.node_cost(elem, block, path_bytes)
        prefix_nodes.append((elem, cost))
        path = path + ((_elem_fingerprint(elem), block.signature()),)
        blocks = partition_block(block, elem)
        # descend through the first block; sibling blocks share the layout
        block = blocks[0]
        path_bytes = region
        level += 1

    solution = solve(block, level, path, path_bytes)
    if solution is None:
        raise SearchError("no feasible completion within the depth limit")
    root = solution
    for elem, cost in reversed(prefix_nodes):
        root = DesignNode(elem, cost + root.cost, {0: root})
    return DesignResult(
        root=root, cost=root.cost,
        cache_hits=stats["hits"], evaluated=stats["evaluated"],
    )


def exhaustive_design(
    workload: WorkloadSpec,
    candidates: list,
    profile: HardwareProfile,
    depth_limit: int = 4,
) -> DesignResult:
    """Same recursion with no memoization and no pruning: the search oracle."""
    return complete_design(
        workload, candidates, profile, depth_limit,
        use_cache=False, prune=False,
    )

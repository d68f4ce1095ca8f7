"""Design-space cardinality math, exact over Python big integers.

The element space is the product of the primitive domain sizes minus the
combinations excluded by the invalidation rules. Whole-structure estimates
follow from the element count: two-element standard designs square it, and
polymorphic designs (every block free to pick its own element) multiply one
factor of fanout*|E| per recursion level.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .catalog import DEFAULT_CATALOG, PrimitiveCatalog
from .rules import DEFAULT_RULES, RuleTable


@dataclass(frozen=True)
class DesignSpaceEstimate:
    kind: str
    element_count: int
    fanout: int = 0
    page_count: int = 0
    height: int = 0
    result: int = 0

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "element_count": str(self.element_count),
            "fanout": self.fanout,
            "page_count": self.page_count,
            "height": self.height,
            "result": str(self.result),
        }


def domain_size(primitive: str, rules: RuleTable = DEFAULT_RULES) -> int:
    """Number of distinct values of a primitive under the finite grids."""
    return sum(rules.tag_weights[primitive].values())


def invalid_count(
    catalog: PrimitiveCatalog = DEFAULT_CATALOG, rules: RuleTable = DEFAULT_RULES
) -> int:
    """Count assignments violating at least one invalidation rule.

    Rules reference few primitives, so enumerate tag tuples over the
    referenced primitives only (weighted by parameter-grid multiplicity)
    and multiply by the free product of everything else. Exact for any
    rule arity.
    """
    referenced = sorted({p for r in rules.invalid for p in r.referenced})
    free = 1
    for prim in catalog.names:
        if prim not in referenced:
            free *= domain_size(prim, rules)

    bad = 0
    weighted = [
        [(tag, w) for tag, w in rules.tag_weights[p].items()] for p in referenced
    ]
    for combo in itertools.product(*weighted):
        tags = {p: tw[0] for p, tw in zip(referenced, combo)}
        if any(r.fires(tags) for r in rules.invalid):
            weight = 1
            for _, w in combo:
                weight *= w
            bad += weight
    return bad * free


def element_space_cardinality(
    catalog: PrimitiveCatalog = DEFAULT_CATALOG, rules: RuleTable = DEFAULT_RULES
) -> int:
    total = 1
    for prim in catalog.names:
        size = domain_size(prim, rules)
        if size <= 0:
            raise ValueError("primitive %r has an empty domain" % prim)
        total *= size
    return total - invalid_count(catalog, rules)


def design_space_estimate(
    kind: str, element_count: int, fanout: int = 2, page_count: int = 1
) -> DesignSpaceEstimate:
    """``standard`` designs use two distinct elements; ``polymorphic``
    designs pick an element per block across the whole hierarchy."""
    if element_count < 1:
        raise ValueError("element_count must be >= 1")
    if kind == "standard":
        return DesignSpaceEstimate(kind, element_count, result=element_count**2)
    if kind != "polymorphic":
        raise ValueError("kind must be 'standard' or 'polymorphic'")
    if fanout < 2 or page_count < 1:
        raise ValueError("polymorphic estimate needs fanout >= 2 and page_count >= 1")
    # ceil(log_f N) in exact integer arithmetic
    height, covered = 0, 1
    while covered < page_count:
        covered *= fanout
        height += 1
    result = element_count * (fanout * element_count) ** height
    return DesignSpaceEstimate(
        kind, element_count, fanout=fanout, page_count=page_count,
        height=height, result=result,
    )

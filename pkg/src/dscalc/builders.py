"""Programmatic construction of common elements and reference structures.

These are convenience wrappers over the primitive catalog; everything they
produce passes validation and serializes to the flat dotted-key format.
"""

from __future__ import annotations

from .catalog import DomainValue
from .layout import ElementSpec, StructureSpec

_BASE = {
    "key_retention": DomainValue("none"),
    "value_retention": DomainValue("none"),
    "key_value_layout": DomainValue("row_wise"),
    "intra_node_access": DomainValue("direct"),
    "utilization": DomainValue("none"),
    "bloom_filters": DomainValue("off"),
    "zone_maps": DomainValue("off"),
    "filters_layout": DomainValue("scatter"),
    "fanout": DomainValue("fixed", (2,)),
    "partitioning": DomainValue("append_fw"),
    "sub_block_capacity": DomainValue("balanced"),
    "immediate_links": DomainValue("none"),
    "skip_links": DomainValue("none"),
    "area_links": DomainValue("none"),
    "sub_block_location": DomainValue("pointed"),
    "sub_block_layout": DomainValue("scatter"),
    "sub_blocks_homogeneous": DomainValue("true"),
    "sub_block_consolidation": DomainValue("false"),
    "sub_block_instantiation": DomainValue("lazy"),
    "links_layout": DomainValue("scatter"),
    "recursion": DomainValue("none"),
}


def element(name: str, **overrides) -> ElementSpec:
    """Build an element from the neutral baseline. Override values are
    DomainValue instances, bare tags, or (tag, params...) tuples."""
    assignments = dict(_BASE)
    for prim, value in overrides.items():
        if isinstance(value, DomainValue):
            assignments[prim] = value
        elif isinstance(value, tuple):
            assignments[prim] = DomainValue(value[0], tuple(value[1:]))
        else:
            assignments[prim] = DomainValue(str(value))
    return ElementSpec(name=name, assignments=assignments)


def unordered_page(name: str = "page", capacity: int = 256, layout: str = "columnar",
                   area_links: str = "none", bloom=None) -> ElementSpec:
    """Terminal unsorted data page (append order, full retention)."""
    return element(
        name,
        fanout=("terminal", capacity),
        key_retention="full",
        value_retention="full",
        key_value_layout=layout,
        partitioning="append_fw",
        utilization="leq_capacity",
        sub_block_location="none",
        area_links=area_links,
        bloom_filters=DomainValue("on", tuple(bloom)) if bloom else DomainValue("off"),
    )


def ordered_page(name: str = "page", capacity: int = 256, layout: str = "columnar",
                 area_links: str = "none", bloom=None) -> ElementSpec:
    """Terminal sorted data page."""
    page = unordered_page(name, capacity, layout, area_links, bloom)
    return page.with_value("partitioning", DomainValue("sorted"))


def btree_internal(name: str = "internal", fanout: int = 20, recurse: bool = True) -> ElementSpec:
    """Sorted fence-pointer node: no data, min zone maps, pointed children.
    Fences and child pointers sit side by side (scattered filters), so fence
    search runs over a row layout."""
    return element(
        name,
        fanout=("fixed", fanout),
        partitioning="sorted",
        zone_maps="min",
        filters_layout="scatter",
        sub_block_capacity="balanced",
        recursion=("yes", "fit") if recurse else "none",
    )


def hash_partition(name: str = "hash", buckets: int = 100) -> ElementSpec:
    return element(
        name,
        fanout=("fixed", buckets),
        partitioning=("di_func", "KeyMod(%d)" % buckets),
        sub_block_capacity="unrestricted",
        sub_block_instantiation="eager",
    )


def range_partition(name: str = "range", parts: int = 100) -> ElementSpec:
    return element(
        name,
        fanout=("fixed", parts),
        partitioning="range",
        sub_block_capacity="unrestricted",
    )


def trie_node(name: str = "trie", radix: int = 256) -> ElementSpec:
    return element(
        name,
        fanout=("fixed", radix),
        partitioning="radix",
        key_retention=("func", "key_byte"),
        sub_block_capacity="unrestricted",
        recursion=("yes", "fit"),
    )


def linked_chain(name: str = "chain", page_capacity: int = 256) -> ElementSpec:
    """Linked-list connector: no node of its own, head access, next links
    scattered onto the pages it chains."""
    return element(
        name,
        fanout="unlimited",
        intra_node_access="head_link",
        sub_block_capacity=("fixed", page_capacity),
        immediate_links="next",
    )


def skip_chain(name: str = "skip", page_capacity: int = 256) -> ElementSpec:
    """Skip-list connector: ordered pages navigated via skip links."""
    return element(
        name,
        fanout="unlimited",
        intra_node_access="head_link",
        partitioning="sorted",
        zone_maps="exact",
        sub_block_capacity=("fixed", page_capacity),
        immediate_links="next",
        skip_links="perfect",
    )


# ---------------------------------------------------------------------------
# reference structures


def structure(name: str, chain: list, description: str = "") -> StructureSpec:
    """Wire elements into a root-to-terminal chain."""
    elements = {e.name: e for e in chain}
    edges = {a.name: b.name for a, b in zip(chain, chain[1:])}
    return StructureSpec(name=name, elements=elements, root=chain[0].name,
                         edges=edges, description=description)


def array_spec(capacity: int = 100_000) -> StructureSpec:
    return structure("array", [unordered_page("page", capacity)],
                     "single unsorted page holding everything")


def sorted_array_spec(capacity: int = 100_000) -> StructureSpec:
    return structure("sorted_array", [ordered_page("page", capacity)],
                     "single sorted page holding everything")


def linked_list_spec(page_capacity: int = 256) -> StructureSpec:
    return structure(
        "linked_list",
        [linked_chain("chain", page_capacity), unordered_page("page", page_capacity)],
        "chain of unsorted pages",
    )


def range_ll_spec(parts: int = 100, page_capacity: int = 256) -> StructureSpec:
    return structure(
        "range_ll",
        [range_partition("range", parts), linked_chain("chain", page_capacity),
         unordered_page("page", page_capacity)],
        "range directory over per-range page chains",
    )


def skiplist_spec(page_capacity: int = 256) -> StructureSpec:
    return structure(
        "skiplist",
        [skip_chain("skip", page_capacity), ordered_page("page", page_capacity)],
        "skip links over sorted pages",
    )


def trie_spec(radix: int = 256, page_capacity: int = 256) -> StructureSpec:
    return structure(
        "trie",
        [trie_node("trie", radix), unordered_page("page", page_capacity)],
        "radix tree over unsorted pages",
    )


def btree_spec(fanout: int = 20, page_capacity: int = 256,
               leaf_links: str = "forward", name: str = "btree") -> StructureSpec:
    return structure(
        name,
        [btree_internal("internal", fanout),
         ordered_page("leaf", page_capacity, area_links=leaf_links)],
        "fence-pointer internals over sorted columnar leaves",
    )


def btree_worked_example_spec() -> StructureSpec:
    """Fanout 20 over 250-record sorted columnar leaves, no leaf links."""
    return btree_spec(20, 250, leaf_links="none", name="btree_worked_example")


def hash_table_spec(buckets: int = 100, page_capacity: int = 5) -> StructureSpec:
    return structure(
        "hash_table",
        [hash_partition("hash", buckets), linked_chain("chain", page_capacity),
         unordered_page("page", page_capacity)],
        "hash directory over per-bucket page chains",
    )


def reference_structures() -> dict:
    """The bundled corpus at its reference sizes."""
    return {
        "array": array_spec(),
        "sorted_array": sorted_array_spec(),
        "linked_list": linked_list_spec(),
        "range_ll": range_ll_spec(),
        "skiplist": skiplist_spec(),
        "trie": trie_spec(),
        "btree": btree_spec(),
        "hash_table": hash_table_spec(),
        "btree_worked_example": btree_worked_example_spec(),
    }

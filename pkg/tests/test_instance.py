import numpy as np
import pytest

from dscalc import builders
from dscalc.catalog import DomainValue
from dscalc.instance import (
    BuildError,
    DataProfile,
    build_instance,
    export_dot,
    generate_keys,
    node_byte_size,
    path_region_size,
)

DP = DataProfile(entry_count=100_000)


def test_worked_example_shape():
    inst = build_instance(builders.btree_worked_example_spec(), DP, seed=42)
    assert inst.stats.nodes_per_level == (1, 20, 400)
    assert inst.stats.height == 2


def test_worked_example_regions_exact():
    inst = build_instance(builders.btree_worked_example_spec(), DP, seed=42)
    assert path_region_size(inst.stats, 0) == 312
    assert path_region_size(inst.stats, 1) == 6552
    assert path_region_size(inst.stats, 2) == 1_606_552
    assert inst.stats.total_bytes == 1_606_552


def test_internal_node_bytes():
    internal = builders.btree_internal(fanout=20)
    assert node_byte_size(internal, 0, DP, n_children=20) == 20 * 8 + 19 * 8


def test_terminal_page_bytes():
    leaf = builders.ordered_page("leaf", 250)
    assert node_byte_size(leaf, 250, DP) == 250 * 16


def test_offset_addressing_eliminates_pointers():
    elem = builders.element(
        "packed",
        fanout=("fixed", 1),
        sub_block_location="inline",
        sub_block_layout="bfs",
        sub_blocks_homogeneous="true",
    )
    assert node_byte_size(elem, 0, DP, n_children=1) == 0


def test_hash_partitioning_counts_match_key_sample():
    spec = builders.hash_table_spec()
    inst = build_instance(spec, DP, seed=42)
    buckets = inst.root.children
    assert len(buckets) == 100
    keys = generate_keys(DP, 42)
    expected = np.bincount(keys % 100, minlength=100)
    got = np.array([b.entry_count for b in buckets])
    assert np.array_equal(np.sort(got), np.sort(expected))
    assert 800 < got.min() and got.max() < 1200


def test_entry_conservation():
    for name in ("btree", "hash_table", "trie", "range_ll"):
        inst = build_instance(builders.reference_structures()[name], DP, seed=7)
        for block in inst.root.walk():
            if block.children:
                assert sum(c.entry_count for c in block.children) == block.entry_count


def test_balanced_split_within_one():
    inst = build_instance(builders.btree_spec(), DP, seed=7)
    for block in inst.root.walk():
        if block.children and block.routing == "fences":
            counts = [c.entry_count for c in block.children]
            assert max(counts) - min(counts) <= 1


def test_zero_entries_single_empty_terminal():
    inst = build_instance(builders.btree_spec(), DataProfile(entry_count=0), seed=1)
    assert inst.stats.total_bytes == 0
    assert inst.root.element_name == "leaf"
    assert inst.root.entry_count == 0
    assert not inst.root.materialized  # lazy instantiation: no node
    dot = export_dot(inst)
    assert dot.count("label=") == 1


def test_determinism():
    a = build_instance(builders.hash_table_spec(), DP, seed=9)
    b = build_instance(builders.hash_table_spec(), DP, seed=9)
    assert a.stats == b.stats
    assert export_dot(a) == export_dot(b)
    c = build_instance(builders.hash_table_spec(), DP, seed=10)
    assert export_dot(a) != export_dot(c)


def test_cumulative_bytes_nondecreasing():
    for name, spec in builders.reference_structures().items():
        inst = build_instance(spec, DP, seed=3)
        cum = inst.stats.cumulative_bytes
        assert all(a <= b for a, b in zip(cum, cum[1:])), name
        assert cum[-1] == inst.stats.total_bytes
        assert path_region_size(inst.stats, inst.stats.height) == inst.stats.total_bytes


def test_region_level_out_of_range():
    inst = build_instance(builders.array_spec(), DP, seed=1)
    with pytest.raises(IndexError):
        path_region_size(inst.stats, inst.stats.height + 1)


def test_non_shrinking_recursion_detected():
    stuck = builders.element(
        "stuck",
        fanout=("fixed", 1),
        recursion=("yes", "depth_99"),
        sub_block_location="pointed",
    )
    leaf = builders.unordered_page("leaf", 16)
    spec = builders.structure("stuck", [stuck, leaf])
    with pytest.raises(BuildError, match="non-shrinking"):
        build_instance(spec, DataProfile(entry_count=100), seed=1)


def test_terminal_capacity_respected_under_chain():
    inst = build_instance(builders.hash_table_spec(), DP, seed=42)
    for block in inst.root.walk():
        if block.routing == "terminal":
            assert block.entry_count <= 5


def test_skiplist_chain_page_overhead():
    # sorted pages under a skip chain pay for next link, tower, and fence
    inst = build_instance(builders.skiplist_spec(), DP, seed=1)
    pages = [b for b in inst.root.walk() if b.routing == "terminal"]
    full = [p for p in pages if p.entry_count == 256]
    assert full and full[0].byte_size == 256 * 16 + 8 + 16 + 8


def test_zipf_keys_concentrate():
    zipf = DataProfile(entry_count=50_000, key_distribution="zipf", zipf_alpha=2.0,
                       key_domain=(0, 1000))
    keys = generate_keys(zipf, 5)
    top_share = np.bincount(keys).max() / len(keys)
    assert top_share > 0.5  # rank-1 mass for alpha=2 over 1000 ranks is ~0.61

import math
import re

import pytest

from dscalc import builders
from dscalc.instance import DataProfile, build_instance
from dscalc.synthesis import (
    SkewState,
    apply_skew,
    bloom_false_positive_rate,
    cost_get_set,
    lower_to_level2,
    render_psb,
    render_trace,
    skew_weight,
    synthesize_bulk_load,
    synthesize_get,
    synthesize_range,
    synthesize_update,
)

DP = DataProfile(entry_count=100_000)

# expected probe/scan/search shapes for the bundled corpus
TRACE_PATTERNS = {
    "array": r"SP",
    "sorted_array": r"BP",
    "linked_list": r"P(PS)+P",
    "range_ll": r"PPS(PS)*P",
    "skiplist": r"P+BP",
    "trie": r"P{2,}SP",
    "btree": r"(PB)+P",
    "hash_table": r"PPS(PS)*P",
}


@pytest.fixture(scope="module")
def worked_example():
    return build_instance(builders.btree_worked_example_spec(), DP, seed=42)


def test_worked_example_seven_calls(worked_example):
    tree = synthesize_get(worked_example, 12345)
    assert len(tree.calls) == 7
    assert [c.kind for c in tree.calls] == [
        "RandomAccess", "SortedSearch", "RandomAccess", "SortedSearch",
        "RandomAccess", "SortedSearch", "RandomAccess",
    ]


def test_worked_example_region_arguments_exact(worked_example):
    tree = synthesize_get(worked_example, 12345)
    regions = [c.bytes for c in tree.calls if c.kind == "RandomAccess"]
    assert regions == [312, 6552, 1_606_552, 2000]
    searches = [(c.layout, c.count, c.bytes) for c in tree.calls if c.kind == "SortedSearch"]
    assert searches == [("row", 19, 152), ("row", 19, 152), ("col", 250, 2000)]


def test_bundled_trace_shapes():
    from dscalc.instance import generate_keys

    probe = int(generate_keys(DP, 42)[17])  # a stored key: full hit path
    for name, pattern in TRACE_PATTERNS.items():
        spec = builders.reference_structures()[name]
        inst = build_instance(spec, DP, seed=42)
        tree = synthesize_get(inst, probe)
        assert re.fullmatch(pattern, tree.kinds()), (name, tree.kinds()[:40])


def test_sorted_array_psb_numeric():
    from dscalc.instance import generate_keys

    inst = build_instance(builders.sorted_array_spec(100_000), DP, seed=42)
    tree = synthesize_get(inst, int(generate_keys(DP, 42)[17]))
    assert render_psb(tree) == "B(100000) + P(100000)"


def test_empty_structure_get_costs_nothing(synth_profile):
    inst = build_instance(builders.btree_spec(), DataProfile(entry_count=0), seed=1)
    tree = synthesize_get(inst, 5)
    assert tree.calls == ()
    costed = lower_to_level2(tree, synth_profile)
    assert costed.total_seconds == 0.0


def test_total_is_sum_of_calls(worked_example, synth_profile):
    costed = lower_to_level2(synthesize_get(worked_example, 7), synth_profile)
    assert costed.total_seconds == pytest.approx(
        sum(c.weighted_seconds for c in costed.calls), rel=0, abs=0
    )


def test_trace_determinism(worked_example):
    a = synthesize_get(worked_example, 99)
    b = synthesize_get(worked_example, 99)
    assert a == b


def test_set_mode_never_costs_more(synth_profile):
    for name in ("array", "hash_table", "linked_list", "btree"):
        inst = build_instance(builders.reference_structures()[name], DP, seed=4)
        key = 123_456_789
        single = lower_to_level2(synthesize_get(inst, key, expected=False), synth_profile)
        expected = lower_to_level2(synthesize_get(inst, key, expected=True), synth_profile)
        assert expected.total_seconds <= single.total_seconds + 1e-18, name


def test_hop_regions_nondecreasing_with_depth(worked_example):
    for name in ("btree", "hash_table", "trie", "skiplist", "range_ll"):
        inst = build_instance(builders.reference_structures()[name], DP, seed=4)
        tree = synthesize_get(inst, 77)
        hops = [c for c in tree.calls if c.role == "hop"]
        for a, b in zip(hops, hops[1:]):
            if b.depth >= a.depth:
                assert b.bytes >= a.bytes, name


def test_hop_costs_nondecreasing_with_monotone_models(worked_example, synth_profile):
    costed = lower_to_level2(synthesize_get(worked_example, 3), synth_profile)
    hop_costs = [c.seconds for c in costed.calls if c.call.role == "hop"]
    assert all(a <= b + 1e-18 for a, b in zip(hop_costs, hop_costs[1:]))


# -- lowering policy ---------------------------------------------------------


def test_scan_row_lowered_to_scalar_row(synth_profile):
    inst = build_instance(
        builders.structure("rowarr", [builders.unordered_page("p", 100_000, layout="row_wise")]),
        DP, seed=1,
    )
    costed = lower_to_level2(synthesize_get(inst, 5), synth_profile)
    assert costed.calls[0].variant == "scan_scalar_row_eq"


def test_uniform_keys_pick_interpolation_when_cheaper(trained_profile):
    inst = build_instance(builders.sorted_array_spec(100_000), DP, seed=1)
    tree = synthesize_get(inst, 5)
    uniform = lower_to_level2(tree, trained_profile, uniform_keys=True)
    search = [c for c in uniform.calls if c.call.kind == "SortedSearch"][0]
    binary = trained_profile.predict("sorted_search_binary_col", [search.call.count]).seconds
    interp = trained_profile.predict("sorted_search_interp_col", [search.call.count]).seconds
    expected = "sorted_search_interp_col" if interp < binary else "sorted_search_binary_col"
    assert search.variant == expected
    skewed = lower_to_level2(tree, trained_profile, uniform_keys=False)
    assert [c.variant for c in skewed.calls if c.call.kind == "SortedSearch"] == [
        "sorted_search_binary_col"
    ]


def test_hash_node_lowered_to_hash_probe(synth_profile):
    inst = build_instance(builders.hash_table_spec(), DP, seed=1)
    costed = lower_to_level2(synthesize_get(inst, 5, expected=True), synth_profile)
    assert costed.calls[0].call.kind == "HashProbe"
    assert costed.calls[0].variant == "hash_probe_multiply_shift"


def test_random_access_within_trained_range_not_flagged(trained_profile):
    inst = build_instance(builders.btree_worked_example_spec(), DP, seed=1)
    costed = lower_to_level2(synthesize_get(inst, 5), trained_profile)
    hop = [c for c in costed.calls if c.call.role == "hop"][0]
    assert hop.call.bytes == 312
    assert not hop.extrapolated


# -- bloom filters -------------------------------------------------------------


def bloom_btree():
    return builders.structure(
        "bloom_btree",
        [builders.btree_internal("internal", 20),
         builders.ordered_page("leaf", 250, area_links="none", bloom=(4, 8192))],
    )


def test_bloom_probe_emitted_before_leaf_search():
    inst = build_instance(bloom_btree(), DP, seed=1)
    tree = synthesize_get(inst, 500)
    kinds = [c.kind for c in tree.calls]
    assert "BloomProbe" in kinds
    assert kinds.index("BloomProbe") < kinds.index("SortedSearch") or \
        kinds[kinds.index("BloomProbe") - 1] == "RandomAccess"


def test_bloom_negative_prunes_miss_in_single_mode():
    inst = build_instance(bloom_btree(), DP, seed=1)
    miss_key = 2**50  # outside the key domain
    tree = synthesize_get(inst, miss_key, expected=False)
    assert tree.calls[-1].kind == "BloomProbe"  # nothing after the filter


def test_bloom_fpr_weights_expected_miss_work():
    inst = build_instance(bloom_btree(), DP, seed=1)
    tree = synthesize_get(inst, 2**50, expected=True)
    tail = [c for c in tree.calls if c.kind == "SortedSearch" and c.role == "terminal"]
    assert tail
    fpr = bloom_false_positive_rate(8192, 4, 250)
    assert tail[0].multiplicity == pytest.approx(fpr)


# -- skew -----------------------------------------------------------------------


def test_skew_weight_formula():
    assert skew_weight(1, 2, 2) == pytest.approx(1.0)  # p=0.5, sid=2
    assert math.isinf(skew_weight(0, 10, 3))
    with pytest.raises(Exception):
        skew_weight(1, 0, 1)


def test_hot_node_region_shrinks(worked_example):
    tree = synthesize_get(worked_example, 55)
    state = SkewState()
    state.popularity = {c.node_uid: 1.0 for c in tree.calls if c.role == "hop"}
    scaled = apply_skew(tree, state, sid=10)
    for before, after in zip(tree.calls, scaled.calls):
        if before.role == "hop":
            assert after.bytes == max(1, before.bytes // 10)
        else:
            assert after.bytes == before.bytes


def test_cold_node_region_uncapped(worked_example):
    tree = synthesize_get(worked_example, 55)
    state = SkewState()
    state.popularity = {}
    state.counts = {}
    assert apply_skew(tree, state, sid=5) == tree


def test_skewed_workload_cheaper_than_uniform(worked_example, synth_profile):
    import numpy as np

    hot = np.full(300, 123, dtype=np.int64)
    cold = np.linspace(0, 2**40 - 1, 300).astype(np.int64)
    hot_cost = cost_get_set(worked_example, hot, synth_profile, skew=SkewState())
    cold_cost = cost_get_set(worked_example, cold, synth_profile, skew=SkewState())
    assert hot_cost.total_seconds < cold_cost.total_seconds


# -- ranges, bulk loads, updates ----------------------------------------------


def test_btree_range_three_leaves():
    spec = builders.btree_spec(20, 250, leaf_links="forward")
    inst = build_instance(spec, DP, seed=42)
    leaves = [b for b in inst.root.walk() if not b.children]
    lo = leaves[10].partition_bounds[0]
    hi = leaves[12].partition_bounds[1]
    tree = synthesize_range(inst, lo, hi)
    scans = [c for c in tree.calls if c.kind == "Scan"]
    hops = [c for c in tree.calls if c.role == "hop"]
    assert len(scans) == 3  # three qualifying leaves
    assert len(hops) == 3 + 2  # descent (3 levels) plus two link hops
    assert all(c.comparison == "range" for c in scans)


def test_degenerate_range_close_to_point_get(synth_profile):
    spec = builders.btree_spec(20, 250, leaf_links="forward")
    inst = build_instance(spec, DP, seed=42)
    key = 500_000
    point = lower_to_level2(synthesize_get(inst, key), synth_profile).total_seconds
    degen = lower_to_level2(synthesize_range(inst, key, key), synth_profile).total_seconds
    leaf_scan = synth_profile.predict("scan_scalar_col_range", [250]).seconds
    assert degen >= point - leaf_scan - 1e-12
    assert degen <= point + leaf_scan + 1e-12


def test_unsorted_chain_range_scans_every_page():
    inst = build_instance(builders.linked_list_spec(), DP, seed=42)
    pages = [b for b in inst.root.walk() if not b.children and b.entry_count]
    tree = synthesize_range(inst, 10, 20)
    assert sum(1 for c in tree.calls if c.kind == "Scan") == len(pages)


def test_sorted_array_bulk_load_trace():
    inst = build_instance(builders.sorted_array_spec(100_000), DP, seed=1)
    tree = synthesize_bulk_load(inst)
    assert [c.kind for c in tree.calls] == ["Sort", "OrderedBatchWrite"]
    assert tree.calls[0].count == 100_000
    assert tree.calls[1].bytes == 100_000 * 16


def test_unsorted_log_bulk_load_single_write():
    inst = build_instance(builders.array_spec(100_000), DP, seed=1)
    tree = synthesize_bulk_load(inst)
    assert [c.kind for c in tree.calls] == ["UnorderedBatchWrite"]
    assert tree.calls[0].bytes == 100_000 * 16


def test_btree_bulk_load_scattered_internables():
    inst = build_instance(builders.btree_worked_example_spec(), DP, seed=1)
    tree = synthesize_bulk_load(inst)
    kinds = [c.kind for c in tree.calls]
    assert kinds[0] == "Sort"
    assert kinds.count("ScatteredBatchWrite") == 2  # two internal levels
    assert kinds[-1] == "OrderedBatchWrite"  # sorted leaves
    scattered = [c for c in tree.calls if c.kind == "ScatteredBatchWrite"]
    assert [c.count for c in scattered] == [1, 20]


def test_update_is_get_plus_one_record_write(worked_example):
    get = synthesize_get(worked_example, 9)
    upd = synthesize_update(worked_example, 9)
    assert [c.kind for c in upd.calls[:-1]] == [c.kind for c in get.calls]
    last = upd.calls[-1]
    assert last.kind == "UnorderedBatchWrite"
    assert last.bytes == 16
    assert last.count == 1


def test_render_trace_mentions_variant_and_total(worked_example, synth_profile):
    costed = lower_to_level2(synthesize_get(worked_example, 4), synth_profile)
    text = render_trace(costed)
    assert "RandomAccess(312)" in text
    assert "total =" in text
    assert "random_access" in text

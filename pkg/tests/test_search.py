import numpy as np
import pytest

from dscalc import builders
from dscalc.catalog import DomainValue
from dscalc.instance import DataProfile
from dscalc.models import HardwareProfile
from dscalc.search import (
    SearchError,
    WhatIfRequest,
    complete_design,
    cost_workload,
    exhaustive_design,
    rank_designs,
    what_if,
)
from dscalc.workload import (
    OperationGenerator,
    WorkloadFile,
    base_reference_workload,
    generate_workload,
)


def small_workload(seed=1, gets=40, ranges=0, inserts=0, entries=20_000):
    gens = []
    if gets:
        gens.append(OperationGenerator("get", gets))
    if ranges:
        gens.append(OperationGenerator("range_get", ranges))
    if inserts:
        gens.append(OperationGenerator("bulk_load", inserts))
    return generate_workload(WorkloadFile(
        data=DataProfile(entry_count=entries), generators=tuple(gens), seed=seed,
    ))


CANDIDATES = [
    builders.hash_partition("hash4", 4),
    builders.btree_internal("fence4", 4, recurse=False),
    builders.ordered_page("sorted_page", 1 << 20),
    builders.unordered_page("log_page", 1 << 20),
]


def test_identity_variation_zero_delta(base_workload, synth_profile):
    req = WhatIfRequest(base=builders.btree_spec(), layout_delta={"leaf": {}})
    report = what_if(req, base_workload, synth_profile)
    assert report.delta_seconds == 0.0
    assert report.axis == "design"
    assert all(v == 0.0 for v in report.depth_deltas.values())


def test_exactly_one_axis_enforced(base_workload, synth_profile):
    with pytest.raises(SearchError):
        WhatIfRequest(base=builders.btree_spec())
    with pytest.raises(SearchError):
        WhatIfRequest(
            base=builders.btree_spec(), layout_delta={},
            workload_delta=base_workload,
        )


def test_invalid_variation_passes_validation_report(base_workload, synth_profile):
    req = WhatIfRequest(
        base=builders.btree_spec(),
        layout_delta={"leaf": {"key_retention": DomainValue("none"),
                               "value_retention": DomainValue("none")}},
    )
    with pytest.raises(SearchError, match="terminal-must-retain"):
        what_if(req, base_workload, synth_profile)


def test_bloom_filter_on_leaves_beneficial_for_miss_heavy_gets(synth_profile):
    # lookups that miss the stored key domain: the leaf filters prune their
    # terminal searches, and the probe is cheaper than the pruned search
    data = DataProfile(entry_count=100_000, key_domain=(0, 2**30))
    wf = WorkloadFile(data=data, generators=(OperationGenerator("get", 200),), seed=5)
    workload = generate_workload(wf)
    miss_ops = tuple(
        op.__class__(op.op, op.sid, key=op.key + 2**40)
        for op in workload.operations
    )
    misses = workload.__class__(data=data, operations=miss_ops, seed=5)
    req = WhatIfRequest(
        base=builders.btree_spec(leaf_links="none"),
        layout_delta={"leaf": {"bloom_filters": DomainValue("on", (4, 8192))}},
    )
    pruned = synth_profile.predict("sorted_search_binary_col", [250]).seconds
    probe = synth_profile.predict("bloom_probe_multiply_shift", [1024, 4]).seconds
    assert probe < pruned  # precondition for the asserted direction
    report = what_if(req, misses, synth_profile)
    assert report.delta_seconds < 0  # the filtered variant is cheaper


def test_scaled_random_access_profile_hurts_pointer_chasers(base_workload, synth_profile):
    doubled_entries = dict(synth_profile.entries)
    ra = synth_profile.entries["random_access"]
    coeff = dict(ra.coefficients)
    coeff = {
        "c": [2 * c for c in coeff["c"]],
        "k": list(coeff["k"]),
        "x": list(coeff["x"]),
        "y0": 2 * coeff["y0"],
    }
    scaled = ra.__class__(
        family=ra.family, coefficients=coeff, param_names=ra.param_names,
        trained_range=ra.trained_range, fit_quality=ra.fit_quality,
    )
    doubled_entries["random_access"] = scaled
    profile2 = HardwareProfile(machine_id="2x", entries=doubled_entries)
    req = WhatIfRequest(base=builders.btree_spec(), profile_swap=profile2)
    report = what_if(req, base_workload, synth_profile)
    assert report.axis == "hardware"
    assert report.variant.total_seconds > report.base.total_seconds


def test_workload_axis_does_not_touch_spec(base_workload, synth_profile):
    other = generate_workload(base_reference_workload(seed=77))
    req = WhatIfRequest(base=builders.btree_spec(), workload_delta=other)
    report = what_if(req, base_workload, synth_profile)
    direct_base = cost_workload(builders.btree_spec(), base_workload, synth_profile)
    direct_variant = cost_workload(builders.btree_spec(), other, synth_profile)
    assert report.base.total_seconds == direct_base.total_seconds
    assert report.variant.total_seconds == direct_variant.total_seconds


def test_rank_single_and_ties(base_workload, synth_profile):
    spec = builders.btree_spec()
    assert rank_designs([spec], base_workload, synth_profile)[0][0] is spec
    twin_a, twin_b = builders.btree_spec(name="a"), builders.btree_spec(name="b")
    ranked = rank_designs([twin_a, twin_b], base_workload, synth_profile)
    assert [s.name for s, _ in ranked] == ["a", "b"]  # stable on ties


def test_rank_orders_by_cost(base_workload, synth_profile):
    ranked = rank_designs(
        [builders.array_spec(100_000), builders.sorted_array_spec(100_000)],
        base_workload, synth_profile,
    )
    assert [s.name for s, _ in ranked] == ["sorted_array", "array"]
    assert ranked[0][1] < ranked[1][1]


# -- auto-completion ------------------------------------------------------------


def test_singleton_terminal_fills_every_hole(synth_profile):
    wl = small_workload()
    only = [builders.ordered_page("solo", 1 << 20)]
    result = complete_design(wl, only, synth_profile, depth_limit=2)
    assert result.root.element.name == "solo"
    assert not result.root.children


def test_no_terminal_candidate_unsatisfiable(synth_profile):
    wl = small_workload()
    with pytest.raises(SearchError, match="terminal"):
        complete_design(wl, [builders.hash_partition("h", 4)], synth_profile)


def test_empty_candidates_rejected(synth_profile):
    with pytest.raises(SearchError):
        complete_design(small_workload(), [], synth_profile)


def test_invalid_candidate_rejected(synth_profile):
    broken = builders.element(
        "bad", fanout=("terminal", 8), key_retention="none",
        value_retention="none", sub_block_location="none",
    )
    with pytest.raises(SearchError, match="bad"):
        complete_design(small_workload(), [broken], synth_profile)


@pytest.mark.parametrize("seed", range(10))
def test_completion_matches_exhaustive_oracle(seed, synth_profile):
    rng = np.random.default_rng(seed)
    wl = small_workload(
        seed=seed,
        gets=int(rng.integers(5, 60)),
        ranges=int(rng.integers(0, 20)),
        inserts=int(rng.integers(0, 30)),
        entries=int(rng.integers(5_000, 60_000)),
    )
    dp = complete_design(wl, CANDIDATES, synth_profile, depth_limit=2)
    oracle = exhaustive_design(wl, CANDIDATES, synth_profile, depth_limit=2)
    assert dp.cost == oracle.cost


def test_cache_soundness_bit_for_bit(synth_profile):
    wl = small_workload(seed=3, gets=30, ranges=10, inserts=10)
    cached = complete_design(wl, CANDIDATES, synth_profile, depth_limit=3)
    uncached = complete_design(
        wl, CANDIDATES, synth_profile, depth_limit=3, use_cache=False,
    )
    assert cached.cost == uncached.cost


def test_partial_prefix_is_respected(synth_profile):
    wl = small_workload()
    prefix = [builders.hash_partition("hash4", 4)]
    result = complete_design(wl, CANDIDATES, synth_profile, depth_limit=3,
                             partial=prefix)
    assert result.root.element.name == "hash4"
    assert result.root.children


def test_hybrid_design_for_split_workload(synth_profile):
    """Point-reads hot in one half of the domain, ranges in the other,
    inserts everywhere: the completed design routes the two regions to
    different sub-designs."""
    data = DataProfile(entry_count=200_000, key_domain=(0, 2**20))
    wf = WorkloadFile(
        data=data,
        generators=(
            OperationGenerator("get", 150, fraction=0.5, offset=0.0),
            OperationGenerator("range_get", 80, fraction=0.4, offset=0.55, width=0.02),
            OperationGenerator("bulk_load", 200),
        ),
        seed=13,
    )
    wl = generate_workload(wf)
    candidates = [
        builders.range_partition("split2", 2),
        builders.hash_partition("hashidx", 64),
        builders.ordered_page("sorted_page", 1 << 20),
        builders.unordered_page("log_page", 1 << 20),
    ]
    result = complete_design(wl, candidates, synth_profile, depth_limit=3)
    root = result.root
    assert root.element.name == "split2"
    point_hot = root.children[0].element.name
    range_and_writes = root.children[1].element.name
    assert point_hot != range_and_writes
    assert point_hot == "hashidx"  # reads earn the index
    assert range_and_writes != "hashidx"  # ranges cannot use hashing

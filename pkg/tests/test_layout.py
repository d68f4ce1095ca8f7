import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dscalc import builders
from dscalc.catalog import DEFAULT_CATALOG, DomainValue
from dscalc.layout import StructureSpec, validate_element, validate_structure
from dscalc.rules import DEFAULT_RULES


def test_btree_internal_element_ok():
    elem = builders.btree_internal(fanout=20)
    assert elem.tag("zone_maps") == "min"
    assert elem.tag("key_retention") == "none"
    assert elem.value("fanout") == DomainValue("fixed", (20,))
    assert elem.tag("partitioning") == "sorted"
    assert validate_element(elem).ok


def test_terminal_must_retain_fires():
    elem = builders.element(
        "bad",
        fanout=("terminal", 250),
        key_retention="none",
        value_retention="none",
        sub_block_location="none",
    )
    report = validate_element(elem)
    assert not report.ok
    assert any(v[1] == "terminal-must-retain" for v in report.violations)


def test_bloom_on_terminal_allowed():
    # no rule in the encoded table references the (bloom, terminal) pair
    for rule in DEFAULT_RULES.invalid:
        assert not (
            "bloom_filters" in rule.when and "fanout" in rule.when
        ), rule.name
    elem = builders.ordered_page("page", 250, bloom=(3, 1024))
    assert validate_element(elem).ok


def test_missing_assignment_reported():
    elem = builders.ordered_page()
    broken = dict(elem.assignments)
    del broken["zone_maps"]
    report = validate_element(elem.__class__(name="x", assignments=broken))
    assert not report.ok
    assert any("zone_maps" in v[1] for v in report.violations)


def test_structure_hash_chain_ok():
    assert validate_structure(builders.hash_table_spec()).ok


def test_structure_single_terminal_ok():
    assert validate_structure(builders.array_spec()).ok


def test_cycle_without_terminal_reports():
    a = builders.btree_internal("a", 4, recurse=False)
    b = builders.hash_partition("b", 8)
    spec = StructureSpec(
        name="cycle", elements={"a": a, "b": b}, root="a",
        edges={"a": "b", "b": "a"},
    )
    report = validate_structure(spec)
    assert not report.ok
    assert any(v[1] == "no-terminal-reachable" for v in report.violations)


def test_dangling_edge_reported():
    spec = StructureSpec(
        name="dangling",
        elements={"a": builders.btree_internal("a", 4, recurse=False)},
        root="a", edges={"a": "ghost"},
    )
    report = validate_structure(spec)
    assert any("dangling" in v[1] for v in report.violations)


def test_unreachable_element_reported():
    spec = StructureSpec(
        name="unreachable",
        elements={
            "root": builders.ordered_page("root", 16),
            "orphan": builders.unordered_page("orphan", 16),
        },
        root="root", edges={},
    )
    report = validate_structure(spec)
    assert any("unreachable" in v[1] for v in report.violations)


@st.composite
def valid_elements(draw):
    """Random assignments biased toward valid shapes."""
    terminal = draw(st.booleans())
    overrides = {}
    if terminal:
        overrides["fanout"] = ("terminal", draw(st.sampled_from([16, 256, 4096])))
        overrides["key_retention"] = "full"
        overrides["value_retention"] = draw(st.sampled_from(["full", "none"]))
        overrides["sub_block_location"] = "none"
        overrides["partitioning"] = draw(st.sampled_from(["sorted", "append_fw"]))
    else:
        overrides["fanout"] = ("fixed", draw(st.sampled_from([2, 16, 64])))
        overrides["sub_block_location"] = draw(st.sampled_from(["inline", "pointed"]))
        overrides["partitioning"] = draw(st.sampled_from(["sorted", "k_ary", "range", "append_fw"]))
        if overrides["partitioning"] == "k_ary":
            overrides["partitioning"] = ("k_ary", 4)
    overrides["zone_maps"] = draw(st.sampled_from(["off", "min", "both", "exact"]))
    overrides["immediate_links"] = draw(st.sampled_from(["none", "next", "both"]))
    return builders.element("rand", **overrides)


@given(valid_elements())
@settings(max_examples=60, deadline=None)
def test_rule_symmetry_invalid_pair_always_fires(elem):
    """Forcing a rule's value pattern makes validation fire no matter what
    the other primitives say."""
    forced = elem.with_value("skip_links", DomainValue("perfect"))
    forced = forced.with_value("partitioning", DomainValue("append_fw"))
    report = validate_element(forced)
    assert any(v[1] == "skip-links-need-order" for v in report.violations)


def test_structural_equality_ignores_names():
    a = builders.btree_spec(name="x")
    b = builders.btree_spec(name="y")
    assert a.same_layout(b)
    c = builders.btree_spec(fanout=21, name="z")
    assert not a.same_layout(c)


def test_ignored_primitives_normalized():
    page = builders.ordered_page("p", 64)
    tweaked = page.with_value("sub_blocks_homogeneous", DomainValue("false"))
    # sub-block primitives carry no meaning on terminals
    assert page.same_layout(tweaked)
    resorted = page.with_value("key_value_layout", DomainValue("row_wise"))
    assert not page.same_layout(resorted)

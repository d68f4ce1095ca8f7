import json

import pytest

from dscalc import builders
from dscalc.catalog import DomainValue
from dscalc.layout import validate_element, validate_structure
from dscalc.specfile import (
    SpecFormatError,
    bundled_names,
    load_bundled,
    parse_element,
    parse_spec,
    serialize_element,
    serialize_spec,
)

# interop samples: flat element documents in the external dotted-key
# vocabulary, accepted verbatim

HASH_PARTITIONING = {
    "external.links.next": False,
    "external.links.prev": False,
    "inter-block.blockAccess.direct": True,
    "inter-block.blockAccess.headLink": False,
    "inter-block.blockAccess.tailLink": False,
    "inter-block.fanout.fixedValue": 100,
    "inter-block.fanout.function": "",
    "inter-block.fanout.type": "fixed",
    "inter-block.orderMaintenance.type": "none",
    "inter-block.partitioning.function": "KeyMod(100)",
    "inter-block.partitioning.logStructured.filtersPerLevel": False,
    "inter-block.partitioning.logStructured.filtersPerRun": False,
    "inter-block.partitioning.logStructured.initialRunSize": 0,
    "inter-block.partitioning.logStructured.maxRunsPerLevel": 0,
    "inter-block.partitioning.logStructured.mergeFactor": 0,
    "inter-block.partitioning.type": "function",
    "intra-block.blockProperties.location": "inline",
    "intra-block.blockProperties.layout": "inline",
    "intra-block.blockProperties.homogeneous": True,
    "intra-block.capacity.function": "",
    "intra-block.capacity.type": "variable",
    "intra-block.capacity.value": 0,
    "intra-block.dataRetention.keyRetention.compression": "",
    "intra-block.dataRetention.keyRetention.function": "",
    "intra-block.dataRetention.keyRetention.type": "none",
    "intra-block.dataRetention.retainedDataLayout": "",
    "intra-block.dataRetention.valueRetention.compression": "",
    "intra-block.dataRetention.valueRetention.function": "",
    "intra-block.dataRetention.valueRetention.type": "none",
    "intra-block.filters.bloomFilter.active": False,
    "intra-block.filters.bloomFilter.hashFunctionsNumber": 0,
    "intra-block.filters.bloomFilter.numberOfBits": 0,
    "intra-block.filters.filtersMemoryLayout": "scatter",
    "intra-block.filters.zoneMaps.max": False,
    "intra-block.filters.zoneMaps.min": False,
    "intra-block.filters.zoneMaps.exact": False,
    "intra-block.links.linksMemoryLayout": "scatter",
    "intra-block.links.next": False,
    "intra-block.links.prev": False,
    "intra-block.links.skipLinks.probability": 0,
    "intra-block.links.skipLinks.type": "none",
    "intra-block.utilization.constraint": "none",
    "intra-block.utilization.function": "",
    "layout.oneChildCompression": False,
    "layout.zeroElementNullable": True,
    "layout.indirectedPointers": False,
}

ORDERED_DATAPAGE = dict(HASH_PARTITIONING)
ORDERED_DATAPAGE.update({
    "external.links.next": True,
    "inter-block.fanout.fixedValue": 256,
    "inter-block.orderMaintenance.type": "sorted",
    "inter-block.partitioning.function": "",
    "inter-block.partitioning.type": "none",
    "intra-block.blockProperties.location": "",
    "intra-block.blockProperties.layout": "",
    "intra-block.capacity.type": "fixed",
    "intra-block.capacity.value": 1,
    "intra-block.dataRetention.keyRetention.compression": "uncompressed",
    "intra-block.dataRetention.keyRetention.type": "full",
    "intra-block.dataRetention.retainedDataLayout": "columnar",
    "intra-block.dataRetention.valueRetention.compression": "uncompressed",
    "intra-block.dataRetention.valueRetention.type": "full",
    "intra-block.utilization.constraint": "leq_capacity",
    "layout.zeroElementNullable": False,
})

BTREE_INTERNAL = dict(HASH_PARTITIONING)
BTREE_INTERNAL.update({
    "inter-block.fanout.fixedValue": 20,
    "inter-block.orderMaintenance.type": "sorted",
    "inter-block.partitioning.function": "",
    "inter-block.partitioning.type": "none",
    "intra-block.blockProperties.storage": "pointed",
    "intra-block.capacity.type": "balanced",
    "intra-block.dataRetention.retainedDataLayout": "dump",
    "intra-block.filters.zoneMaps.min": True,
})


def test_parse_hash_partitioning_listing():
    elem = parse_element(HASH_PARTITIONING, "hash")
    assert elem.value("fanout") == DomainValue("fixed", (100,))
    assert elem.value("partitioning") == DomainValue("di_func", ("KeyMod(100)",))
    assert elem.hash_routed
    assert elem.tag("sub_block_capacity") == "unrestricted"
    assert validate_element(elem).ok


def test_parse_ordered_datapage_listing_normalizes_to_terminal():
    elem = parse_element(ORDERED_DATAPAGE, "odp")
    assert elem.is_terminal
    assert elem.terminal_capacity == 256
    assert elem.tag("partitioning") == "sorted"
    assert elem.tag("key_value_layout") == "columnar"
    assert elem.tag("area_links") == "forward"
    assert validate_element(elem).ok


def test_parse_btree_internal_listing():
    elem = parse_element(BTREE_INTERNAL, "internal")
    assert elem.tag("sub_block_location") == "pointed"  # storage key wins
    assert elem.tag("zone_maps") == "min"
    assert elem.tag("sub_block_capacity") == "balanced"
    assert not elem.is_terminal
    assert validate_element(elem).ok


def test_listing_roundtrip_identity():
    for doc, name in ((HASH_PARTITIONING, "hash"), (ORDERED_DATAPAGE, "odp"),
                      (BTREE_INTERNAL, "internal")):
        elem = parse_element(doc, name)
        again = parse_element(serialize_element(elem), name)
        assert again.same_layout(elem), name


def test_passthrough_keys_survive_serialization():
    elem = parse_element(ORDERED_DATAPAGE, "odp")
    out = serialize_element(elem)
    assert out["intra-block.dataRetention.keyRetention.compression"] == "uncompressed"


def test_missing_required_key_names_it():
    doc = dict(HASH_PARTITIONING)
    del doc["intra-block.capacity.type"]
    with pytest.raises(SpecFormatError, match="intra-block.capacity.type"):
        parse_element(doc, "x")


def test_unknown_key_rejected():
    doc = dict(HASH_PARTITIONING)
    doc["intra-block.wat"] = 1
    with pytest.raises(SpecFormatError, match="intra-block.wat"):
        parse_element(doc, "x")


def test_domain_value_outside_catalog_rejected():
    doc = dict(HASH_PARTITIONING)
    doc["intra-block.filters.filtersMemoryLayout"] = "diagonal"
    with pytest.raises(SpecFormatError, match="diagonal"):
        parse_element(doc, "x")


def test_bundled_corpus_roundtrip():
    names = bundled_names()
    assert {"array", "sorted_array", "linked_list", "range_ll", "skiplist",
            "trie", "btree", "hash_table"} <= set(names)
    for name in names:
        spec = load_bundled(name)
        assert validate_structure(spec).ok, name
        again = parse_spec(serialize_spec(spec))
        assert again.same_layout(spec), name
        assert again.root == spec.root and again.edges == spec.edges


def test_programmatic_btree_roundtrip():
    spec = builders.btree_spec()
    again = parse_spec(serialize_spec(spec))
    assert again.same_layout(spec)


def test_structure_document_missing_fields():
    with pytest.raises(SpecFormatError, match="root"):
        parse_spec(json.dumps({"elements": {}}))
    with pytest.raises(SpecFormatError, match="JSON"):
        parse_spec("{nope")

"""Flat dotted-key file format for structure specifications.

A structure document wraps one flat object per element::

    {"name": ..., "elements": {"node": {<dotted keys>}}, "root": "node",
     "edges": {"node": "leaf"}}

The per-element object uses the established dotted key vocabulary
(``inter-block.fanout.type``, ``intra-block.filters.zoneMaps.min``, ...)
verbatim, so existing element listings drop in unchanged. A handful of
extension keys (recursion, k-ary order k, skip-link function, ...) cover
catalog values the original vocabulary cannot spell; they are optional and
default sensibly. Keys the engine does not interpret are preserved through
parse/serialize round trips.
"""

from __future__ import annotations

import json
from importlib import resources

from .catalog import DEFAULT_CATALOG, DomainValue, PrimitiveCatalog
from .layout import ElementSpec, SpecError, StructureSpec


class SpecFormatError(SpecError):
    pass


#: Required keys: every element object must carry all of these.
REQUIRED_KEYS = (
    "external.links.next",
    "external.links.prev",
    "inter-block.blockAccess.direct",
    "inter-block.blockAccess.headLink",
    "inter-block.blockAccess.tailLink",
    "inter-block.fanout.fixedValue",
    "inter-block.fanout.function",
    "inter-block.fanout.type",
    "inter-block.orderMaintenance.type",
    "inter-block.partitioning.function",
    "inter-block.partitioning.logStructured.filtersPerLevel",
    "inter-block.partitioning.logStructured.filtersPerRun",
    "inter-block.partitioning.logStructured.initialRunSize",
    "inter-block.partitioning.logStructured.maxRunsPerLevel",
    "inter-block.partitioning.logStructured.mergeFactor",
    "inter-block.partitioning.type",
    "intra-block.blockProperties.location",
    "intra-block.blockProperties.layout",
    "intra-block.blockProperties.homogeneous",
    "intra-block.capacity.function",
    "intra-block.capacity.type",
    "intra-block.capacity.value",
    "intra-block.dataRetention.keyRetention.compression",
    "intra-block.dataRetention.keyRetention.function",
    "intra-block.dataRetention.keyRetention.type",
    "intra-block.dataRetention.retainedDataLayout",
    "intra-block.dataRetention.valueRetention.compression",
    "intra-block.dataRetention.valueRetention.function",
    "intra-block.dataRetention.valueRetention.type",
    "intra-block.filters.bloomFilter.active",
    "intra-block.filters.bloomFilter.hashFunctionsNumber",
    "intra-block.filters.bloomFilter.numberOfBits",
    "intra-block.filters.filtersMemoryLayout",
    "intra-block.filters.zoneMaps.max",
    "intra-block.filters.zoneMaps.min",
    "intra-block.filters.zoneMaps.exact",
    "intra-block.links.linksMemoryLayout",
    "intra-block.links.next",
    "intra-block.links.prev",
    "intra-block.links.skipLinks.probability",
    "intra-block.links.skipLinks.type",
    "intra-block.utilization.constraint",
    "intra-block.utilization.function",
    "layout.oneChildCompression",
    "layout.zeroElementNullable",
    "layout.indirectedPointers",
)

#: Accepted but optional.
OPTIONAL_KEYS = (
    "intra-block.blockProperties.storage",
    "inter-block.blockAccess.function",
    "inter-block.orderMaintenance.karyK",
    "inter-block.recursion.type",
    "inter-block.recursion.function",
    "intra-block.links.skipLinks.function",
    "intra-block.utilization.threshold",
    "intra-block.blockProperties.layoutGroupSize",
)

KNOWN_KEYS = frozenset(REQUIRED_KEYS) | frozenset(OPTIONAL_KEYS)

#: Known keys whose content the engine does not interpret; values are kept
#: in ElementSpec.extras and written back verbatim.
PASSTHROUGH_KEYS = frozenset((
    "intra-block.dataRetention.keyRetention.compression",
    "intra-block.dataRetention.valueRetention.compression",
    "inter-block.partitioning.logStructured.filtersPerLevel",
    "inter-block.partitioning.logStructured.filtersPerRun",
    "inter-block.partitioning.logStructured.initialRunSize",
    "layout.indirectedPointers",
))


def _bool(obj, key):
    return bool(obj.get(key, False))


def _dv(tag, *params):
    return DomainValue(tag, tuple(params))


# ---------------------------------------------------------------------------
# element parsing


def parse_element(obj: dict, name: str, catalog: PrimitiveCatalog = DEFAULT_CATALOG) -> ElementSpec:
    unknown = sorted(set(obj) - KNOWN_KEYS)
    if unknown:
        raise SpecFormatError("unknown key %r in element %r" % (unknown[0], name))
    missing = [k for k in REQUIRED_KEYS if k not in obj]
    if missing:
        raise SpecFormatError("element %r is missing key %r" % (name, missing[0]))

    a = {}

    kr_type = obj["intra-block.dataRetention.keyRetention.type"]
    if kr_type in ("none", ""):
        a["key_retention"] = _dv("none")
    elif kr_type == "full":
        a["key_retention"] = _dv("full")
    elif kr_type in ("function", "func"):
        a["key_retention"] = _dv("func", obj["intra-block.dataRetention.keyRetention.function"])
    else:
        raise SpecFormatError("bad key retention type %r in %r" % (kr_type, name))

    vr_type = obj["intra-block.dataRetention.valueRetention.type"]
    if vr_type in ("none", ""):
        a["value_retention"] = _dv("none")
    elif vr_type == "full":
        a["value_retention"] = _dv("full")
    elif vr_type in ("function", "func"):
        a["value_retention"] = _dv("func", obj["intra-block.dataRetention.valueRetention.function"])
    else:
        raise SpecFormatError("bad value retention type %r in %r" % (vr_type, name))

    layout = obj["intra-block.dataRetention.retainedDataLayout"]
    if layout == "columnar":
        a["key_value_layout"] = _dv("columnar")
    elif layout in ("rows", "row-wise", "row_wise"):
        a["key_value_layout"] = _dv("row_wise")
    elif layout in ("col_row_groups", "col-row-groups"):
        a["key_value_layout"] = _dv("col_row_groups")
    elif layout in ("", "dump"):
        a["key_value_layout"] = _dv("row_wise")
    else:
        raise SpecFormatError("bad retained data layout %r in %r" % (layout, name))

    if obj.get("inter-block.blockAccess.function"):
        a["intra_node_access"] = _dv("func", obj["inter-block.blockAccess.function"])
    elif _bool(obj, "inter-block.blockAccess.direct"):
        a["intra_node_access"] = _dv("direct")
    elif _bool(obj, "inter-block.blockAccess.headLink"):
        a["intra_node_access"] = _dv("head_link")
    elif _bool(obj, "inter-block.blockAccess.tailLink"):
        a["intra_node_access"] = _dv("tail_link")
    else:
        a["intra_node_access"] = _dv("direct")

    util = obj["intra-block.utilization.constraint"]
    if obj["intra-block.utilization.function"]:
        a["utilization"] = _dv("func", obj["intra-block.utilization.function"])
    elif util in ("none", ""):
        a["utilization"] = _dv("none")
    elif util == "leq_capacity":
        a["utilization"] = _dv("leq_capacity")
    elif util in ("geq", ">="):
        a["utilization"] = _dv("geq", float(obj.get("intra-block.utilization.threshold", 0.5)))
    else:
        raise SpecFormatError("bad utilization constraint %r in %r" % (util, name))

    if _bool(obj, "intra-block.filters.bloomFilter.active"):
        a["bloom_filters"] = _dv(
            "on",
            int(obj["intra-block.filters.bloomFilter.hashFunctionsNumber"]),
            int(obj["intra-block.filters.bloomFilter.numberOfBits"]),
        )
    else:
        a["bloom_filters"] = _dv("off")

    if _bool(obj, "intra-block.filters.zoneMaps.exact"):
        a["zone_maps"] = _dv("exact")
    elif _bool(obj, "intra-block.filters.zoneMaps.min") and _bool(obj, "intra-block.filters.zoneMaps.max"):
        a["zone_maps"] = _dv("both")
    elif _bool(obj, "intra-block.filters.zoneMaps.min"):
        a["zone_maps"] = _dv("min")
    elif _bool(obj, "intra-block.filters.zoneMaps.max"):
        a["zone_maps"] = _dv("max")
    else:
        a["zone_maps"] = _dv("off")

    a["filters_layout"] = _layout_tag(obj["intra-block.filters.filtersMemoryLayout"], name)
    a["links_layout"] = _layout_tag(obj["intra-block.links.linksMemoryLayout"], name)

    a["fanout"] = _parse_fanout(obj, name, a)
    a["partitioning"] = _parse_partitioning(obj, name)
    a["sub_block_capacity"] = _parse_capacity(obj, name)

    nxt, prv = _bool(obj, "intra-block.links.next"), _bool(obj, "intra-block.links.prev")
    a["immediate_links"] = _dv("both" if nxt and prv else "next" if nxt else "prev" if prv else "none")

    sl_type = obj["intra-block.links.skipLinks.type"]
    if sl_type in ("none", ""):
        a["skip_links"] = _dv("none")
    elif sl_type == "perfect":
        a["skip_links"] = _dv("perfect")
    elif sl_type == "randomized":
        a["skip_links"] = _dv("randomized", float(obj["intra-block.links.skipLinks.probability"]))
    elif sl_type in ("function", "func"):
        a["skip_links"] = _dv("func", obj.get("intra-block.links.skipLinks.function", ""))
    else:
        raise SpecFormatError("bad skip link type %r in %r" % (sl_type, name))

    fwd, bwd = _bool(obj, "external.links.next"), _bool(obj, "external.links.prev")
    a["area_links"] = _dv("both" if fwd and bwd else "forward" if fwd else "backward" if bwd else "none")

    loc = obj.get("intra-block.blockProperties.storage") or obj["intra-block.blockProperties.location"]
    if a["fanout"].tag == "terminal":
        a["sub_block_location"] = _dv("none")
    elif loc in ("", "none"):
        a["sub_block_location"] = _dv("none")
    elif loc == "inline":
        a["sub_block_location"] = _dv("inline")
    elif loc == "pointed":
        a["sub_block_location"] = _dv("pointed")
    elif loc in ("doublePointed", "double_pointed", "double pointed"):
        a["sub_block_location"] = _dv("double_pointed")
    else:
        raise SpecFormatError("bad sub-block location %r in %r" % (loc, name))

    phys = obj["intra-block.blockProperties.layout"]
    if phys in ("BFS", "bfs"):
        a["sub_block_layout"] = _dv("bfs")
    elif phys in ("bfs_layer", "BFS layer grouping", "bfsLayerGrouping"):
        a["sub_block_layout"] = _dv("bfs_layer", int(obj.get("intra-block.blockProperties.layoutGroupSize", 4)))
    elif phys == "inline":
        a["sub_block_layout"] = _dv("bfs")
    elif phys in ("scatter", ""):
        a["sub_block_layout"] = _dv("scatter")
    else:
        raise SpecFormatError("bad sub-block layout %r in %r" % (phys, name))

    a["sub_blocks_homogeneous"] = _dv("true" if _bool(obj, "intra-block.blockProperties.homogeneous") else "false")
    a["sub_block_consolidation"] = _dv("true" if _bool(obj, "layout.oneChildCompression") else "false")
    a["sub_block_instantiation"] = _dv("lazy" if _bool(obj, "layout.zeroElementNullable") else "eager")

    rec_type = obj.get("inter-block.recursion.type", "none")
    if rec_type in ("none", ""):
        a["recursion"] = _dv("none")
    elif rec_type == "yes":
        a["recursion"] = _dv("yes", obj.get("inter-block.recursion.function", "fit"))
    else:
        raise SpecFormatError("bad recursion type %r in %r" % (rec_type, name))

    for prim, value in a.items():
        try:
            catalog.check_value(prim, value)
        except (KeyError, ValueError) as exc:
            raise SpecFormatError("element %r: %s" % (name, exc)) from exc

    extras = {k: obj[k] for k in PASSTHROUGH_KEYS if k in obj}
    return ElementSpec(name=name, assignments=a, extras=extras)


def _layout_tag(value, name):
    if value in ("consolidate", "consolidated"):
        return _dv("consolidate")
    if value in ("scatter", "scattered", ""):
        return _dv("scatter")
    raise SpecFormatError("bad memory layout %r in %r" % (value, name))


def _parse_fanout(obj, name, assignments):
    ftype = obj["inter-block.fanout.type"]
    fixed = int(obj["inter-block.fanout.fixedValue"] or 0)
    if ftype == "terminal":
        cap = fixed or int(obj["intra-block.capacity.value"] or 0)
        if cap <= 0:
            raise SpecFormatError("terminal element %r needs a capacity" % name)
        return _dv("terminal", cap)
    if ftype == "fixed":
        retains_all = (
            assignments["key_retention"].tag == "full"
            and assignments["value_retention"].tag == "full"
        )
        if retains_all:
            # data-page idiom: a fully retaining fixed-fanout element is a
            # terminal whose capacity is the fixed value
            cap = fixed or int(obj["intra-block.capacity.value"] or 0)
            if cap <= 0:
                raise SpecFormatError("terminal element %r needs a capacity" % name)
            return _dv("terminal", cap)
        if fixed <= 0:
            raise SpecFormatError("fixed fanout of %r must be positive" % name)
        return _dv("fixed", fixed)
    if ftype in ("function", "func"):
        return _dv("func", obj["inter-block.fanout.function"])
    if ftype in ("unlimited", "variable"):
        return _dv("unlimited")
    raise SpecFormatError("bad fanout type %r in %r" % (ftype, name))


def _parse_partitioning(obj, name):
    ptype = obj["inter-block.partitioning.type"]
    order = obj["inter-block.orderMaintenance.type"]
    fn = obj["inter-block.partitioning.function"]
    if ptype == "function":
        return _dv("di_func", fn)
    if ptype == "dd_function":
        return _dv("dd_func", fn)
    if ptype == "range":
        return _dv("range")
    if ptype == "radix":
        return _dv("radix")
    if ptype == "temporal":
        ratio = int(obj["inter-block.partitioning.logStructured.mergeFactor"] or 2)
        runs = int(obj["inter-block.partitioning.logStructured.maxRunsPerLevel"] or 1)
        return _dv("temporal", ratio, "tiered" if runs > 1 else "leveled")
    if ptype == "append_bw":
        return _dv("append_bw")
    if ptype in ("none", "", "append", "append_fw"):
        if order == "sorted":
            return _dv("sorted")
        if order in ("k-ary", "k_ary", "kary"):
            return _dv("k_ary", int(obj.get("inter-block.orderMaintenance.karyK", 2)))
        if order in ("none", ""):
            return _dv("append_fw")
        raise SpecFormatError("bad order maintenance %r in %r" % (order, name))
    raise SpecFormatError("bad partitioning type %r in %r" % (ptype, name))


def _parse_capacity(obj, name):
    ctype = obj["intra-block.capacity.type"]
    if ctype == "fixed":
        return _dv("fixed", int(obj["intra-block.capacity.value"] or 1))
    if ctype == "balanced":
        return _dv("balanced")
    if ctype in ("variable", "unrestricted"):
        return _dv("unrestricted")
    if ctype in ("function", "func"):
        return _dv("func", obj["intra-block.capacity.function"])
    raise SpecFormatError("bad capacity type %r in %r" % (ctype, name))


# ---------------------------------------------------------------------------
# element serialization


def serialize_element(elem: ElementSpec) -> dict:
    a = elem.assignments
    obj = {}

    kr = a["key_retention"]
    obj["intra-block.dataRetention.keyRetention.type"] = {"none": "none", "full": "full", "func": "function"}[kr.tag]
    obj["intra-block.dataRetention.keyRetention.function"] = kr.params[0] if kr.tag == "func" else ""
    obj["intra-block.dataRetention.keyRetention.compression"] = ""
    vr = a["value_retention"]
    obj["intra-block.dataRetention.valueRetention.type"] = {"none": "none", "full": "full", "func": "function"}[vr.tag]
    obj["intra-block.dataRetention.valueRetention.function"] = vr.params[0] if vr.tag == "func" else ""
    obj["intra-block.dataRetention.valueRetention.compression"] = ""

    if kr.tag == "none" and vr.tag == "none":
        obj["intra-block.dataRetention.retainedDataLayout"] = ""
    else:
        obj["intra-block.dataRetention.retainedDataLayout"] = {
            "columnar": "columnar", "row_wise": "rows", "col_row_groups": "col_row_groups",
        }[a["key_value_layout"].tag]

    access = a["intra_node_access"]
    obj["inter-block.blockAccess.direct"] = access.tag == "direct"
    obj["inter-block.blockAccess.headLink"] = access.tag == "head_link"
    obj["inter-block.blockAccess.tailLink"] = access.tag == "tail_link"
    if access.tag == "func":
        obj["inter-block.blockAccess.function"] = access.params[0]

    util = a["utilization"]
    obj["intra-block.utilization.constraint"] = {
        "none": "none", "geq": "geq", "leq_capacity": "leq_capacity", "func": "none",
    }[util.tag]
    obj["intra-block.utilization.function"] = util.params[0] if util.tag == "func" else ""
    if util.tag == "geq":
        obj["intra-block.utilization.threshold"] = util.params[0]

    bloom = a["bloom_filters"]
    obj["intra-block.filters.bloomFilter.active"] = bloom.tag == "on"
    obj["intra-block.filters.bloomFilter.hashFunctionsNumber"] = bloom.params[0] if bloom.tag == "on" else 0
    obj["intra-block.filters.bloomFilter.numberOfBits"] = bloom.params[1] if bloom.tag == "on" else 0

    zm = a["zone_maps"].tag
    obj["intra-block.filters.zoneMaps.min"] = zm in ("min", "both")
    obj["intra-block.filters.zoneMaps.max"] = zm in ("max", "both")
    obj["intra-block.filters.zoneMaps.exact"] = zm == "exact"
    obj["intra-block.filters.filtersMemoryLayout"] = a["filters_layout"].tag
    obj["intra-block.links.linksMemoryLayout"] = a["links_layout"].tag

    fanout = a["fanout"]
    if fanout.tag == "terminal":
        obj["inter-block.fanout.type"] = "terminal"
        obj["inter-block.fanout.fixedValue"] = fanout.params[0]
        obj["inter-block.fanout.function"] = ""
    elif fanout.tag == "fixed":
        obj["inter-block.fanout.type"] = "fixed"
        obj["inter-block.fanout.fixedValue"] = fanout.params[0]
        obj["inter-block.fanout.function"] = ""
    elif fanout.tag == "func":
        obj["inter-block.fanout.type"] = "function"
        obj["inter-block.fanout.fixedValue"] = 0
        obj["inter-block.fanout.function"] = fanout.params[0]
    else:
        obj["inter-block.fanout.type"] = "unlimited"
        obj["inter-block.fanout.fixedValue"] = 0
        obj["inter-block.fanout.function"] = ""

    part = a["partitioning"]
    obj["inter-block.partitioning.function"] = ""
    obj["inter-block.partitioning.logStructured.filtersPerLevel"] = False
    obj["inter-block.partitioning.logStructured.filtersPerRun"] = False
    obj["inter-block.partitioning.logStructured.initialRunSize"] = 0
    obj["inter-block.partitioning.logStructured.maxRunsPerLevel"] = 0
    obj["inter-block.partitioning.logStructured.mergeFactor"] = 0
    if part.tag == "sorted":
        obj["inter-block.orderMaintenance.type"] = "sorted"
        obj["inter-block.partitioning.type"] = "none"
    elif part.tag == "k_ary":
        obj["inter-block.orderMaintenance.type"] = "k-ary"
        obj["inter-block.orderMaintenance.karyK"] = part.params[0]
        obj["inter-block.partitioning.type"] = "none"
    elif part.tag == "di_func":
        obj["inter-block.orderMaintenance.type"] = "none"
        obj["inter-block.partitioning.type"] = "function"
        obj["inter-block.partitioning.function"] = part.params[0]
    elif part.tag == "dd_func":
        obj["inter-block.orderMaintenance.type"] = "none"
        obj["inter-block.partitioning.type"] = "dd_function"
        obj["inter-block.partitioning.function"] = part.params[0]
    elif part.tag in ("range", "radix"):
        obj["inter-block.orderMaintenance.type"] = "none"
        obj["inter-block.partitioning.type"] = part.tag
    elif part.tag == "temporal":
        obj["inter-block.orderMaintenance.type"] = "none"
        obj["inter-block.partitioning.type"] = "temporal"
        obj["inter-block.partitioning.logStructured.mergeFactor"] = part.params[0]
        obj["inter-block.partitioning.logStructured.maxRunsPerLevel"] = (
            part.params[0] if part.params[1] == "tiered" else 1
        )
    elif part.tag == "append_bw":
        obj["inter-block.orderMaintenance.type"] = "none"
        obj["inter-block.partitioning.type"] = "append_bw"
    else:  # append_fw
        obj["inter-block.orderMaintenance.type"] = "none"
        obj["inter-block.partitioning.type"] = "none"

    cap = a["sub_block_capacity"]
    obj["intra-block.capacity.type"] = {
        "fixed": "fixed", "balanced": "balanced", "unrestricted": "variable", "func": "function",
    }[cap.tag]
    obj["intra-block.capacity.value"] = cap.params[0] if cap.tag == "fixed" else 0
    obj["intra-block.capacity.function"] = cap.params[0] if cap.tag == "func" else ""

    il = a["immediate_links"].tag
    obj["intra-block.links.next"] = il in ("next", "both")
    obj["intra-block.links.prev"] = il in ("prev", "both")

    sl = a["skip_links"]
    obj["intra-block.links.skipLinks.type"] = {
        "none": "none", "perfect": "perfect", "randomized": "randomized", "func": "function",
    }[sl.tag]
    obj["intra-block.links.skipLinks.probability"] = sl.params[0] if sl.tag == "randomized" else 0
    if sl.tag == "func":
        obj["intra-block.links.skipLinks.function"] = sl.params[0]

    al = a["area_links"].tag
    obj["external.links.next"] = al in ("forward", "both")
    obj["external.links.prev"] = al in ("backward", "both")

    loc = a["sub_block_location"].tag
    obj["intra-block.blockProperties.location"] = {
        "none": "", "inline": "inline", "pointed": "pointed", "double_pointed": "doublePointed",
    }[loc]
    lay = a["sub_block_layout"]
    obj["intra-block.blockProperties.layout"] = {
        "scatter": "scatter", "bfs": "BFS", "bfs_layer": "bfs_layer",
    }[lay.tag]
    if lay.tag == "bfs_layer":
        obj["intra-block.blockProperties.layoutGroupSize"] = lay.params[0]

    obj["intra-block.blockProperties.homogeneous"] = a["sub_blocks_homogeneous"].tag == "true"
    obj["layout.oneChildCompression"] = a["sub_block_consolidation"].tag == "true"
    obj["layout.zeroElementNullable"] = a["sub_block_instantiation"].tag == "lazy"
    obj["layout.indirectedPointers"] = False

    rec = a["recursion"]
    if rec.tag == "yes":
        obj["inter-block.recursion.type"] = "yes"
        obj["inter-block.recursion.function"] = rec.params[0]

    obj.update(elem.extras)
    return obj


# ---------------------------------------------------------------------------
# structure documents


def parse_spec(text: str, catalog: PrimitiveCatalog = DEFAULT_CATALOG) -> StructureSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFormatError("not valid JSON: %s" % exc) from exc
    return spec_from_dict(doc, catalog)


def spec_from_dict(doc: dict, catalog: PrimitiveCatalog = DEFAULT_CATALOG) -> StructureSpec:
    for field in ("elements", "root"):
        if field not in doc:
            raise SpecFormatError("structure document is missing %r" % field)
    elements = {
        name: parse_element(flat, name, catalog)
        for name, flat in doc["elements"].items()
    }
    return StructureSpec(
        name=doc.get("name", "structure"),
        elements=elements,
        root=doc["root"],
        edges=dict(doc.get("edges", {})),
        description=doc.get("description", ""),
    )


def spec_to_dict(spec: StructureSpec) -> dict:
    return {
        "name": spec.name,
        "description": spec.description,
        "root": spec.root,
        "edges": dict(sorted(spec.edges.items())),
        "elements": {
            name: dict(sorted(serialize_element(e).items()))
            for name, e in sorted(spec.elements.items())
        },
    }


def serialize_spec(spec: StructureSpec) -> str:
    return json.dumps(spec_to_dict(spec), indent=2, sort_keys=False) + "\n"


def load_bundled(name: str) -> StructureSpec:
    """Load one of the packaged reference structures by file stem."""
    path = resources.files("dscalc.data").joinpath("specs/%s.json" % name)
    return parse_spec(path.read_text())


def bundled_names() -> list:
    root = resources.files("dscalc.data").joinpath("specs")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))

"""Catalog of the 21 data layout primitives.

Every node design ("element") is one value per primitive. Primitives are
grouped into four classes: how a node organizes its own data, how it
partitions data into sub-blocks, how children are physically placed, and
what navigation metadata it keeps.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class DomainValue:
    """One chosen value for a primitive: a tag plus bound parameters."""

    tag: str
    params: tuple = ()

    def __str__(self) -> str:
        if not self.params:
            return self.tag
        return "%s(%s)" % (self.tag, ",".join(str(p) for p in self.params))


@dataclass(frozen=True)
class DomainTag:
    """A point of a primitive's domain; ``arity`` parameters must be bound."""

    tag: str
    arity: int = 0
    param_names: tuple = ()


@dataclass(frozen=True)
class PrimitiveDef:
    name: str
    klass: str  # node-organization | partitioning | physical-placement | metadata
    domain: tuple  # of DomainTag

    def tag(self, name: str) -> DomainTag:
        for t in self.domain:
            if t.tag == name:
                return t
        raise KeyError("primitive %r has no domain tag %r" % (self.name, name))

    @property
    def tags(self) -> tuple:
        return tuple(t.tag for t in self.domain)


class ArityError(ValueError):
    """A DomainValue binds the wrong number of parameters."""


class UnknownPrimitiveError(KeyError):
    """An assignment names a primitive that is not in the catalog."""


@dataclass(frozen=True)
class PrimitiveCatalog:
    entries: tuple = ()
    _index: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {p.name: p for p in self.entries})

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, name: str) -> PrimitiveDef:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownPrimitiveError(name) from None

    def __contains__(self, name: str) -> bool:
        return name in self._index

    @property
    def names(self) -> tuple:
        return tuple(p.name for p in self.entries)

    def check_value(self, primitive: str, value: DomainValue) -> None:
        """Raise if ``value`` is outside the primitive's domain."""
        prim = self[primitive]
        tag = prim.tag(value.tag)
        if len(value.params) != tag.arity:
            raise ArityError(
                "%s.%s takes %d parameter(s), got %d"
                % (primitive, value.tag, tag.arity, len(value.params))
            )


def _p(name, klass, *tags):
    return PrimitiveDef(name, klass, tuple(tags))


def _t(tag, *param_names):
    return DomainTag(tag, len(param_names), tuple(param_names))


#: The full primitive set. Names are stable identifiers used by rule tables,
#: spec files and the design-space math.
DEFAULT_CATALOG = PrimitiveCatalog((
    # -- node data organization -------------------------------------------
    _p("key_retention", "node-organization",
       _t("none"), _t("full"), _t("func", "expr")),
    _p("value_retention", "node-organization",
       _t("none"), _t("full"), _t("func", "expr")),
    _p("key_value_layout", "node-organization",
       _t("columnar"), _t("row_wise"), _t("col_row_groups")),
    _p("intra_node_access", "node-organization",
       _t("direct"), _t("head_link"), _t("tail_link"), _t("func", "expr")),
    _p("utilization", "node-organization",
       _t("none"), _t("geq", "fraction"), _t("leq_capacity"), _t("func", "expr")),
    # -- filters ------------------------------------------------------------
    _p("bloom_filters", "metadata",
       _t("off"), _t("on", "num_hashes", "num_bits")),
    _p("zone_maps", "metadata",
       _t("off"), _t("min"), _t("max"), _t("both"), _t("exact")),
    _p("filters_layout", "metadata",
       _t("consolidate"), _t("scatter")),
    # -- partitioning ---------------------------------------------------------
    _p("fanout", "partitioning",
       _t("fixed", "size"), _t("func", "expr"), _t("unlimited"),
       _t("terminal", "capacity")),
    _p("partitioning", "partitioning",
       _t("append_fw"), _t("append_bw"),
       _t("sorted"), _t("k_ary", "k"), _t("dd_func", "expr"),
       _t("range"), _t("radix"), _t("di_func", "expr"),
       _t("temporal", "size_ratio", "policy")),
    _p("sub_block_capacity", "partitioning",
       _t("fixed", "size"), _t("balanced"), _t("unrestricted"), _t("func", "expr")),
    # -- links ---------------------------------------------------------------
    _p("immediate_links", "metadata",
       _t("none"), _t("next"), _t("prev"), _t("both")),
    _p("skip_links", "metadata",
       _t("none"), _t("perfect"), _t("randomized", "probability"), _t("func", "expr")),
    _p("area_links", "metadata",
       _t("none"), _t("forward"), _t("backward"), _t("both")),
    # -- physical placement of sub-blocks -----------------------------------
    _p("sub_block_location", "physical-placement",
       _t("none"), _t("inline"), _t("pointed"), _t("double_pointed")),
    _p("sub_block_layout", "physical-placement",
       _t("scatter"), _t("bfs"), _t("bfs_layer", "group_size")),
    _p("sub_blocks_homogeneous", "physical-placement",
       _t("true"), _t("false")),
    _p("sub_block_consolidation", "physical-placement",
       _t("true"), _t("false")),
    _p("sub_block_instantiation", "physical-placement",
       _t("lazy"), _t("eager")),
    _p("links_layout", "metadata",
       _t("consolidate"), _t("scatter")),
    # -- recursion ------------------------------------------------------------
    _p("recursion", "partitioning",
       _t("none"), _t("yes", "depth_expr")),
))

assert len(DEFAULT_CATALOG) == 21

"""Element and structure specifications plus their validity checks.

An element assigns one value to every catalog primitive and fully describes
one node type. A structure is a rooted hierarchy of elements; non-terminal
elements point at the element used for their sub-blocks (self-edges model
recursive designs such as tries and B-trees).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .catalog import DEFAULT_CATALOG, DomainValue, PrimitiveCatalog
from .rules import DEFAULT_RULES, RuleTable


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple = ()  # (subject, rule-or-message) pairs

    def __bool__(self) -> bool:
        return self.ok

    @staticmethod
    def passed() -> "ValidationReport":
        return ValidationReport(True, ())

    @staticmethod
    def failed(violations) -> "ValidationReport":
        return ValidationReport(False, tuple(violations))

    def to_dict(self) -> dict:
        return {"ok": self.ok, "violations": [list(v) for v in self.violations]}


@dataclass(frozen=True)
class ElementSpec:
    """One value per layout primitive. Names are user labels; structural
    equality goes through :meth:`normalized` and ignores them."""

    name: str
    assignments: dict
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "assignments", dict(self.assignments))
        object.__setattr__(self, "extras", dict(self.extras))

    # -- accessors ---------------------------------------------------------

    def value(self, primitive: str) -> DomainValue:
        return self.assignments[primitive]

    def tag(self, primitive: str) -> str:
        return self.assignments[primitive].tag

    def param(self, primitive: str, idx: int = 0):
        return self.assignments[primitive].params[idx]

    @property
    def tags(self) -> dict:
        return {p: v.tag for p, v in self.assignments.items()}

    @property
    def is_terminal(self) -> bool:
        return self.tag("fanout") == "terminal"

    @property
    def terminal_capacity(self) -> int:
        if not self.is_terminal:
            raise SpecError("element %r is not terminal" % self.name)
        return int(self.param("fanout"))

    @property
    def retains_keys(self) -> bool:
        return self.tag("key_retention") != "none"

    @property
    def retains_values(self) -> bool:
        return self.tag("value_retention") != "none"

    @property
    def is_sorted(self) -> bool:
        return self.tag("partitioning") in ("sorted", "k_ary")

    @property
    def partition_routing(self) -> str:
        """How a key is routed to a child: ``compute`` (data-independent
        function, range or radix), ``fences`` (ordered + zone maps),
        ``chain`` (no way to address a child directly)."""
        part = self.tag("partitioning")
        if part in ("di_func", "range", "radix"):
            return "compute"
        if self.tag("zone_maps") != "off" and part in ("sorted", "k_ary"):
            return "fences"
        return "chain"

    @property
    def hash_routed(self) -> bool:
        if self.tag("partitioning") != "di_func":
            return False
        expr = str(self.param("partitioning")).lower()
        return expr.startswith(("keymod", "hash", "key_mod"))

    # -- normalization / equality -------------------------------------------

    def normalized(self, rules: RuleTable = DEFAULT_RULES) -> dict:
        """Assignments with context-meaningless primitives canonicalized,
        the basis for structural equality."""
        out = dict(self.assignments)
        for prim in rules.ignored_primitives(self.tags):
            out[prim] = DomainValue("_ignored")
        return out

    def same_layout(self, other: "ElementSpec", rules: RuleTable = DEFAULT_RULES) -> bool:
        return self.normalized(rules) == other.normalized(rules)

    def with_value(self, primitive: str, value: DomainValue, name: str | None = None) -> "ElementSpec":
        assignments = dict(self.assignments)
        assignments[primitive] = value
        return replace(self, name=name or self.name, assignments=assignments)


@dataclass(frozen=True)
class StructureSpec:
    """Rooted element hierarchy. ``edges`` maps each non-terminal element
    name to the element describing its sub-blocks."""

    name: str
    elements: dict  # name -> ElementSpec
    root: str
    edges: dict  # name -> name
    description: str = ""

    def __post_init__(self):
        object.__setattr__(self, "elements", dict(self.elements))
        object.__setattr__(self, "edges", dict(self.edges))

    def element(self, name: str) -> ElementSpec:
        return self.elements[name]

    @property
    def root_element(self) -> ElementSpec:
        return self.elements[self.root]

    def destination(self, name: str) -> ElementSpec:
        return self.elements[self.edges[name]]

    def chain_from_root(self) -> list:
        """Elements in root-to-terminal order, following destination edges
        (self-edges contribute once)."""
        out, seen = [], set()
        cur = self.root
        while cur is not None and cur not in seen:
            seen.add(cur)
            out.append(self.elements[cur])
            cur = self.edges.get(cur)
        return out

    def same_layout(self, other: "StructureSpec", rules: RuleTable = DEFAULT_RULES) -> bool:
        """Structural equality: same shape and element layouts, names ignored."""
        if set(self.elements) != set(other.elements):
            # allow renames: compare by traversal from the root
            a, b = self.chain_from_root(), other.chain_from_root()
            if len(a) != len(b):
                return False
            return all(x.same_layout(y, rules) for x, y in zip(a, b))
        if self.root != other.root or self.edges != other.edges:
            return False
        return all(
            self.elements[n].same_layout(other.elements[n], rules) for n in self.elements
        )


# ---------------------------------------------------------------------------
# validation


def validate_element(
    element: ElementSpec,
    catalog: PrimitiveCatalog = DEFAULT_CATALOG,
    rules: RuleTable = DEFAULT_RULES,
) -> ValidationReport:
    """Check completeness, domain membership and the invalidation table."""
    problems = []
    for prim in catalog.names:
        if prim not in element.assignments:
            problems.append((element.name, "missing primitive %r" % prim))
    for prim in element.assignments:
        if prim not in catalog:
            problems.append((element.name, "unknown primitive %r" % prim))
    if problems:
        return ValidationReport.failed(problems)

    for prim, value in element.assignments.items():
        try:
            catalog.check_value(prim, value)
        except (KeyError, ValueError) as exc:
            problems.append((element.name, str(exc)))
    if problems:
        return ValidationReport.failed(problems)

    for rule_name in rules.violations(element.tags):
        problems.append((element.name, rule_name))
    return ValidationReport.failed(problems) if problems else ValidationReport.passed()


def validate_structure(
    structure: StructureSpec,
    catalog: PrimitiveCatalog = DEFAULT_CATALOG,
    rules: RuleTable = DEFAULT_RULES,
) -> ValidationReport:
    problems = []
    if not structure.elements:
        return ValidationReport.failed([(structure.name, "empty element list")])
    if structure.root not in structure.elements:
        return ValidationReport.failed(
            [(structure.name, "root %r is not an element" % structure.root)]
        )

    for name, elem in structure.elements.items():
        report = validate_element(elem, catalog, rules)
        problems.extend(report.violations)

    for src, dst in structure.edges.items():
        if src not in structure.elements:
            problems.append((structure.name, "edge from unknown element %r" % src))
        elif structure.elements[src].is_terminal:
            problems.append((structure.name, "terminal element %r has an edge" % src))
        if dst not in structure.elements:
            problems.append((structure.name, "dangling edge %r -> %r" % (src, dst)))

    for name, elem in structure.elements.items():
        if not elem.is_terminal and name not in structure.edges:
            problems.append((structure.name, "non-terminal %r has no destination" % name))

    # reachability and terminality from the root
    reachable, cur = set(), structure.root
    while cur is not None and cur not in reachable and cur in structure.elements:
        reachable.add(cur)
        cur = structure.edges.get(cur)
    unreachable = set(structure.elements) - reachable
    for name in sorted(unreachable):
        problems.append((structure.name, "unreachable element %r" % name))
    if not any(
        structure.elements[n].is_terminal for n in reachable if n in structure.elements
    ):
        problems.append((structure.name, "no-terminal-reachable"))

    # every element except the root needs a source
    targets = set(structure.edges.values())
    for name in structure.elements:
        if name != structure.root and name not in targets:
            problems.append((structure.name, "element %r has no source" % name))

    return ValidationReport.failed(problems) if problems else ValidationReport.passed()

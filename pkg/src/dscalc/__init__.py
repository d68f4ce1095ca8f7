"""dscalc: a design calculator for data-structure layouts.

Describe a structure as one value per layout primitive, train latency
models for fundamental access patterns on the host machine, and synthesize
the cost of dictionary operations over arbitrary designs without
implementing them.
"""

from .catalog import DEFAULT_CATALOG, DomainValue, PrimitiveCatalog
from .layout import ElementSpec, StructureSpec, ValidationReport, validate_element, validate_structure

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_CATALOG",
    "DomainValue",
    "PrimitiveCatalog",
    "ElementSpec",
    "StructureSpec",
    "ValidationReport",
    "validate_element",
    "validate_structure",
    "__version__",
]

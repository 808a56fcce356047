"""Exact combinatorics of monodromy classes and blocks for spherical pairs."""
from .blocks import BlockReport, IrreducibleLabel, assign_class, block_report, check_path_independence
from .errors import ConfigError, ConsistencyError, DomainError, GraphError, InputError, ResourceError, SphereBlockError
from .latticealg import QuotientGroup, Sublattice, saturation, smith_normal_form
from .monodromy import MonodromyClassTable, class_table, related
from .orbitgraph import OrbitEdge, OrbitGraph, OrbitNode, generate_AI_orbits, load_orbits, wY_candidates
from .pairdata import PairDatum, PairInvariants, builtin_pair, derive_invariants, restrict_to_C
from .rootdata import RootDatum, WeylElement, WeylGroup, build_root_datum, bruhat_leq, ddot_act, dot_act, weyl_group

__version__ = "0.1.0"

__all__ = [
    "BlockReport", "ConfigError", "ConsistencyError", "DomainError", "GraphError", "InputError",
    "IrreducibleLabel", "MonodromyClassTable", "OrbitEdge", "OrbitGraph", "OrbitNode", "PairDatum",
    "PairInvariants", "QuotientGroup", "ResourceError", "RootDatum", "SphereBlockError", "Sublattice",
    "WeylElement", "WeylGroup", "assign_class", "block_report", "bruhat_leq", "build_root_datum",
    "builtin_pair", "check_path_independence", "class_table", "ddot_act", "derive_invariants", "dot_act",
    "generate_AI_orbits", "load_orbits", "related", "restrict_to_C", "saturation", "smith_normal_form",
    "wY_candidates", "weyl_group",
]

"""
Rainbow Trees Package

Rainbow spanning trees in edge-colored multigraphs: color-disjoint trees and
forest extensions with violating-partition certificates, and the anti-Ramsey
constructions for edge-disjoint trees in complete graphs.
"""

from .config import settings
from .graph import (
    DisjointMode,
    EdgeColoredMultigraph,
    Forest,
    ForestFamily,
    GraphError,
    InvalidFamilyError,
    RainbowError,
    VertexPartition,
    validate_family,
)
from .partitions import Deficiency, PartitionError, deficiency_cd, deficiency_ext, find_violating_partition
from .cdrst import Certificate, solve_color_disjoint
from .extension import extend_to_trees
from .search import BudgetExhaustedError, exhaustive_edge_disjoint_search
from .antiramsey import PreconditionError, r_formula, solve_edge_disjoint_rst
from .extremal import extremal_coloring, verify_r_exhaustive
from .dumps import InternalFailure

__version__ = "0.1.0"
__all__ = [
    "settings",
    "DisjointMode",
    "EdgeColoredMultigraph",
    "Forest",
    "ForestFamily",
    "VertexPartition",
    "validate_family",
    "Deficiency",
    "deficiency_cd",
    "deficiency_ext",
    "find_violating_partition",
    "Certificate",
    "solve_color_disjoint",
    "extend_to_trees",
    "exhaustive_edge_disjoint_search",
    "solve_edge_disjoint_rst",
    "r_formula",
    "extremal_coloring",
    "verify_r_exhaustive",
    "RainbowError",
    "GraphError",
    "InvalidFamilyError",
    "PartitionError",
    "PreconditionError",
    "BudgetExhaustedError",
    "InternalFailure",
]

"""Kirchhoff resistor-network signatures for graph symmetry detection,
isomorphism screening, and canonical labeling."""

from .graph import Graph, adjacency, degree_matrix, load_graph, parse_edge_list, parse_json, relabel
from .solver import (
    LaplacianSystem,
    PairCurrents,
    VoltageProfile,
    build_system,
    effective_resistance,
    pair_currents,
    solve_pair,
    solve_pair_pseudoinverse,
    solve_pair_universal_sink,
)
from .signatures import (
    CanonicalLabeling,
    EdgeSignature,
    Fingerprint,
    IsoVerdict,
    NodeSignature,
    OrbitPartition,
    all_edge_signatures,
    all_node_signatures,
    canonical_labeling,
    find_isomorphism,
    fingerprint,
    iso_screen,
    orbit_partition,
    quantize,
)

__all__ = [
    "Graph",
    "adjacency",
    "degree_matrix",
    "load_graph",
    "parse_edge_list",
    "parse_json",
    "relabel",
    "LaplacianSystem",
    "PairCurrents",
    "VoltageProfile",
    "build_system",
    "effective_resistance",
    "pair_currents",
    "solve_pair",
    "solve_pair_pseudoinverse",
    "solve_pair_universal_sink",
    "CanonicalLabeling",
    "EdgeSignature",
    "Fingerprint",
    "IsoVerdict",
    "NodeSignature",
    "OrbitPartition",
    "all_edge_signatures",
    "all_node_signatures",
    "canonical_labeling",
    "find_isomorphism",
    "fingerprint",
    "iso_screen",
    "orbit_partition",
    "quantize",
]

__version__ = "0.1.0"

"""Exact matching preclusion numbers of restricted hypercube-like graphs."""

from .constructors import (Bijection, ComposedGraph, build_rhl, compose, hypercube,
                           recursive_circulant_g84, rhl_graph)
from .graph import FaultSet, Graph, GraphError, delete_faults, new_graph
from .hamiltonian import hamiltonian_cycle, hamiltonian_path, verify_fault_hamiltonian
from .matching import has_fractional_perfect_matching, max_matching
from .preclusion import PreclusionKind, preclusion_number, survives
from .remainder import predict_fsmp_g4

__all__ = [
    "Bijection", "ComposedGraph", "FaultSet", "Graph", "GraphError", "PreclusionKind",
    "build_rhl", "compose", "delete_faults", "hamiltonian_cycle", "hamiltonian_path",
    "has_fractional_perfect_matching", "hypercube", "max_matching", "new_graph",
    "predict_fsmp_g4", "preclusion_number", "recursive_circulant_g84", "rhl_graph",
    "survives", "verify_fault_hamiltonian",
]
__version__ = "0.1.0"

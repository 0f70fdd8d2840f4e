"""Minimum dominating sets of queens on an n-by-n board: CNF encodings,
an embedded CDCL solver, enumeration of solutions up to board symmetry,
cube-and-conquer splitting, and an exhaustive oracle for small boards."""

from .board import Board, neighborhood, orbit
from .cnf import CnfFormula, parse_dimacs, to_dimacs, to_icnf
from .encoding import build_encoding
from .enumeration import (
    SolutionClass,
    canonical_form,
    enumerate_classes,
    find_gamma,
    frequency_matrix,
)
from .oracle import all_min_sets, is_dominating, min_domination_number
from .solver import CdclSolver, EmbeddedBackend, ExternalBackend, ExternalSolverConfig

__version__ = "0.1.0"

__all__ = [
    "Board",
    "CnfFormula",
    "CdclSolver",
    "EmbeddedBackend",
    "ExternalBackend",
    "ExternalSolverConfig",
    "SolutionClass",
    "all_min_sets",
    "build_encoding",
    "canonical_form",
    "enumerate_classes",
    "find_gamma",
    "frequency_matrix",
    "is_dominating",
    "min_domination_number",
    "neighborhood",
    "orbit",
    "parse_dimacs",
    "to_dimacs",
    "to_icnf",
    "__version__",
]

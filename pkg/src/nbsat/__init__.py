"""SAT toolkit: CDCL solving with offline phase hints, exact backbones,
bipartite graph encoding, dataset construction, and benchmark harness."""

__version__ = "0.1.0"

from .cnf import (
    Assignment,
    BackboneLabeling,
    CnfFormula,
    DimacsError,
    connected_components,
    dual_formula,
    evaluate,
    parse_dimacs,
    read_dimacs,
    write_dimacs,
)
from .solver import (
    SolveResult,
    Solver,
    SolverConfig,
    SolverStats,
    Status,
    check_model,
    solve,
    solve_with_assumptions,
)
from .backbone import BackboneResult, BackboneStatus, extract_backbone, is_backbone_literal
from .graph import SatGraph, deserialize, diameter, encode, serialize
from .hints import PhaseHints, load_hints, parse_hints, save_hints

__all__ = [
    "Assignment",
    "BackboneLabeling",
    "BackboneResult",
    "BackboneStatus",
    "CnfFormula",
    "DimacsError",
    "PhaseHints",
    "SatGraph",
    "SolveResult",
    "Solver",
    "SolverConfig",
    "SolverStats",
    "Status",
    "check_model",
    "connected_components",
    "deserialize",
    "diameter",
    "dual_formula",
    "encode",
    "evaluate",
    "extract_backbone",
    "is_backbone_literal",
    "load_hints",
    "parse_dimacs",
    "parse_hints",
    "read_dimacs",
    "save_hints",
    "serialize",
    "solve",
    "solve_with_assumptions",
    "write_dimacs",
]

"""CNF encoding, DIMACS I/O and SAT solving."""

from .cdcl import CdclSolver
from .encode import encode
from .formula import CnfFormula, DimacsError, VarMap, format_dimacs, parse_dimacs, read_dimacs, write_dimacs
from .solve import (
    EMBEDDED,
    Backend,
    BackendError,
    Budget,
    Journal,
    SolveOutcome,
    Status,
    all_solutions,
    decode,
    parse_solver_output,
    solve,
)

__all__ = [
    "EMBEDDED",
    "Backend",
    "BackendError",
    "Budget",
    "CdclSolver",
    "CnfFormula",
    "DimacsError",
    "Journal",
    "SolveOutcome",
    "Status",
    "VarMap",
    "all_solutions",
    "decode",
    "encode",
    "format_dimacs",
    "parse_dimacs",
    "parse_solver_output",
    "read_dimacs",
    "solve",
    "write_dimacs",
]

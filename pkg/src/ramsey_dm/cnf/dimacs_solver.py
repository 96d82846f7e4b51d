"""Minimal competition-format solver front end.

``python -m ramsey_dm.cnf.dimacs_solver [--engine embedded|pysat] FILE`` prints
``s SATISFIABLE`` plus ``v`` lines (exit 10) or ``s UNSATISFIABLE`` (exit 20).
It lets the external backend be exercised without installing a native solver.
"""

from __future__ import annotations

import argparse
import sys

from .formula import DimacsError, read_dimacs
from .solve import Backend, solve


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="dimacs-solver")
    ap.add_argument("--engine", choices=("embedded", "pysat"), default="embedded")
    ap.add_argument("cnf")
    args = ap.parse_args(argv)
    try:
        f = read_dimacs(args.cnf)
    except (OSError, DimacsError) as exc:
        print(f"c error: {exc}", file=sys.stderr)
        return 1
    out = solve(f, Backend(args.engine))
    if out.unsat:
        print("s UNSATISFIABLE")
        return 20
    if not out.sat:
        print("s UNKNOWN")
        return 0
    assert out.model is not None
    print("s SATISFIABLE")
    lits = [v if val else -v for v, val in enumerate(out.model, start=1)]
    for i in range(0, len(lits), 20):
        print("v " + " ".join(map(str, lits[i : i + 20])))
    print("v 0")
    return 10


if __name__ == "__main__":
    sys.exit(main())

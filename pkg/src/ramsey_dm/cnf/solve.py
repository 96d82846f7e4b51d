"""Solver backends, all-solutions enumeration and decoding of edge variables.

Three backends share one interface:

* ``embedded``: the in-repo :class:`~ramsey_dm.cnf.cdcl.CdclSolver`;
* ``external``: any DIMACS solver reached through a shell command;
* ``pysat``: CaDiCaL via the optional ``python-sat`` package.

Every SAT model is checked against the clause list before it is returned.
"""

from __future__ import annotations

import enum
import hashlib
import os
import shlex
import subprocess
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

from ..graph import BudgetExceeded, ColoredGraph
from .cdcl import CdclSolver
from .formula import CnfFormula, VarMap, format_dimacs


class BackendError(RuntimeError):
    """The solver could not produce a trustworthy answer (never means UNSAT)."""


class Status(enum.Enum):
    SAT = "sat"
    UNSAT = "unsat"
    BUDGET_EXCEEDED = "budget-exceeded"


@dataclass(frozen=True)
class Budget:
    conflicts: int | None = None
    seconds: float | None = None

    @classmethod
    def unlimited(cls) -> "Budget":
        return cls()


@dataclass(frozen=True)
class SolveOutcome:
    status: Status
    model: tuple[bool, ...] | None = None  # model[v - 1] is variable v

    @property
    def sat(self) -> bool:
        return self.status is Status.SAT

    @property
    def unsat(self) -> bool:
        return self.status is Status.UNSAT


@dataclass(frozen=True)
class Backend:
    """Which solver to run. ``command`` is only used by the external backend."""

    name: str = "embedded"
    command: str | None = None
    solver: str = "cadical153"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.name not in ("embedded", "external", "pysat"):
            raise ValueError(f"unknown backend {self.name!r}")
        if self.name == "external" and not self.command:
            raise ValueError("the external backend needs a command")

    def session(self, num_vars: int = 0) -> "Session":
        if self.name == "embedded":
            return EmbeddedSession(num_vars, self.seed)
        if self.name == "pysat":
            return PysatSession(num_vars, self.solver)
        return ExternalSession(num_vars, self.command or "")


EMBEDDED = Backend()


# --- sessions -----------------------------------------------------------------


class Session:
    """A growing clause set that can be solved repeatedly."""

    def __init__(self, num_vars: int):
        self.num_vars = num_vars
        self.clauses: list[tuple[int, ...]] = []

    def add_clause(self, clause: Sequence[int]) -> None:
        clause = tuple(clause)
        if not clause:
            raise ValueError("empty clause")
        self.num_vars = max(self.num_vars, max(abs(x) for x in clause))
        self.clauses.append(clause)
        self._add(clause)

    def add_clauses(self, clauses) -> None:
        for c in clauses:
            self.add_clause(c)

    def _add(self, clause: tuple[int, ...]) -> None:
        pass

    def solve(self, budget: Budget | None = None) -> SolveOutcome:
        outcome = self._solve(budget or Budget())
        if outcome.sat:
            model = outcome.model
            if model is None or len(model) < self.num_vars:
                raise BackendError("SAT answer without a total assignment")
            model = tuple(model[: self.num_vars])
            for c in self.clauses:
                if not any((lit > 0) == model[abs(lit) - 1] for lit in c):
                    raise BackendError(f"reported model falsifies clause {c}")
            outcome = SolveOutcome(Status.SAT, model)
        return outcome

    def _solve(self, budget: Budget) -> SolveOutcome:
        raise NotImplementedError

    def close(self) -> None:
        pass

    def __enter__(self):
        return self

    def __exit__(self, *exc) -> None:
        self.close()


class EmbeddedSession(Session):
    def __init__(self, num_vars: int, seed: int = 0):
        super().__init__(num_vars)
        self.solver = CdclSolver(num_vars, seed=seed)

    def _add(self, clause):
        self.solver.add_clause(clause)

    def _solve(self, budget):
        self.solver.ensure_vars(self.num_vars)
        res = self.solver.solve(conflict_budget=budget.conflicts, time_budget=budget.seconds)
        if res is None:
            return SolveOutcome(Status.BUDGET_EXCEEDED)
        if res:
            return SolveOutcome(Status.SAT, tuple(self.solver.model()))
        return SolveOutcome(Status.UNSAT)


class PysatSession(Session):
    def __init__(self, num_vars: int, name: str):
        super().__init__(num_vars)
        try:
            from pysat.solvers import Solver
        except ImportError as exc:  # pragma: no cover - depends on the environment
            raise BackendError("the pysat backend needs the python-sat package") from exc
        self.solver = Solver(name=name)

    def _add(self, clause):
        self.solver.add_clause(list(clause))

    def _solve(self, budget):
        if budget.conflicts is not None:
            self.solver.conf_budget(budget.conflicts)
            res = self.solver.solve_limited()
        else:
            res = self.solver.solve()
        if res is None:
            return SolveOutcome(Status.BUDGET_EXCEEDED)
        if not res:
            return SolveOutcome(Status.UNSAT)
        model = [False] * self.num_vars
        for lit in self.solver.get_model() or ():
            if 0 < abs(lit) <= self.num_vars:
                model[abs(lit) - 1] = lit > 0
        return SolveOutcome(Status.SAT, tuple(model))

    def close(self):
        self.solver.delete()


class ExternalSession(Session):
    """Writes the clause set to a temporary DIMACS file and runs ``command FILE``."""

    def __init__(self, num_vars: int, command: str):
        super().__init__(num_vars)
        self.argv = shlex.split(command)
        if not self.argv:
            raise ValueError("empty external command")

    def _solve(self, budget):
        text = format_dimacs(CnfFormula(self.num_vars, tuple(self.clauses)))
        fd, path = tempfile.mkstemp(suffix=".cnf", prefix="ramsey-")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(text)
            try:
                proc = subprocess.run(
                    self.argv + [path], capture_output=True, text=True, timeout=budget.seconds
                )
            except subprocess.TimeoutExpired:
                return SolveOutcome(Status.BUDGET_EXCEEDED)
            except OSError as exc:
                raise BackendError(f"cannot run {self.argv[0]!r}: {exc}") from exc
        finally:
            os.unlink(path)
        return parse_solver_output(proc.stdout, proc.returncode, self.num_vars)


def parse_solver_output(stdout: str, returncode: int, num_vars: int) -> SolveOutcome:
    """Interpret competition-style solver output (``s``/``v`` lines, exit 10/20)."""
    verdict = None
    lits: list[int] = []
    for line in stdout.splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "s":
            word = " ".join(parts[1:])
            if word == "SATISFIABLE":
                verdict = True
            elif word == "UNSATISFIABLE":
                verdict = False
            else:
                raise BackendError(f"solver answered {word!r}")
        elif parts[0] == "v":
            try:
                lits.extend(int(x) for x in parts[1:])
            except ValueError:
                raise BackendError(f"bad value line {line!r}") from None
    if verdict is None:
        if returncode == 10:
            verdict = True
        elif returncode == 20:
            verdict = False
        else:
            raise BackendError(f"no verdict from solver (exit status {returncode})")
    elif returncode not in (0, 10 if verdict else 20):
        raise BackendError(f"exit status {returncode} contradicts the reported verdict")
    if not verdict:
        return SolveOutcome(Status.UNSAT)
    model = [False] * num_vars
    for lit in lits:
        if lit != 0 and abs(lit) <= num_vars:
            model[abs(lit) - 1] = lit > 0
    if not lits:
        raise BackendError("SAT verdict without a 'v' line")
    return SolveOutcome(Status.SAT, tuple(model))


def solve(f: CnfFormula, backend: Backend = EMBEDDED, budget: Budget | None = None) -> SolveOutcome:
    with backend.session(f.var_count) as s:
        s.add_clauses(f.clauses)
        return s.solve(budget)


# --- enumeration ----------------------------------------------------------------


def formula_digest(f: CnfFormula, projection: Sequence[int]) -> str:
    h = hashlib.sha256(format_dimacs(f).encode())
    h.update(" ".join(map(str, projection)).encode())
    return h.hexdigest()[:16]


class Journal:
    """Append-only log of projected solutions, so an enumeration can resume.

    Line format: ``h <digest>`` once, then ``b <lits> 0`` per solution, then
    ``done`` when the enumeration is exhausted.
    """

    def __init__(self, path: str | Path, digest: str):
        self.path = Path(path)
        self.digest = digest
        self.solutions: list[tuple[int, ...]] = []
        self.done = False
        if self.path.exists():
            self._load()
        else:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("w") as fh:
                fh.write(f"h {digest}\n")

    def _load(self) -> None:
        lines = self.path.read_text().splitlines()
        if not lines or lines[0] != f"h {self.digest}":
            raise ValueError(f"journal {self.path} belongs to a different formula")
        complete = self.path.read_text().endswith("\n")
        for idx, line in enumerate(lines[1:], start=2):
            if line == "done":
                self.done = True
            elif line.startswith("b ") and line.endswith(" 0"):
                self.solutions.append(tuple(int(x) for x in line[2:-2].split()))
            elif idx == len(lines) and not complete:
                break  # torn final write; the solution is found again
            else:
                raise ValueError(f"{self.path}:{idx}: unreadable journal line")
        if not complete:
            # rewrite without the torn tail
            body = [lines[0]] + [f"b {' '.join(map(str, s))} 0" for s in self.solutions]
            body += ["done"] if self.done else []
            self.path.write_text("\n".join(body) + "\n")

    def record(self, solution: tuple[int, ...]) -> None:
        with self.path.open("a") as fh:
            fh.write(f"b {' '.join(map(str, solution))} 0\n")
            fh.flush()
            os.fsync(fh.fileno())
        self.solutions.append(solution)

    def finish(self) -> None:
        with self.path.open("a") as fh:
            fh.write("done\n")
        self.done = True


def all_solutions(
    f: CnfFormula,
    projection: Sequence[int],
    backend: Backend = EMBEDDED,
    journal: str | Path | None = None,
    budget: Budget | None = None,
) -> Iterator[tuple[int, ...]]:
    """Yield each satisfying assignment of ``projection`` once, as signed literals.

    After each model a clause blocking its projection is added. With a
    ``journal`` path, solutions already logged are replayed first and the
    search continues from there. ``budget`` applies to each individual solve;
    running out raises :class:`~ramsey_dm.graph.BudgetExceeded`.
    """
    proj = sorted(set(projection))
    if any(not 1 <= v <= f.var_count for v in proj):
        raise ValueError("projection mentions variables outside the formula")
    log = Journal(journal, formula_digest(f, proj)) if journal is not None else None
    if not proj:
        if solve(f, backend, budget).sat:
            yield ()
        return
    with backend.session(f.var_count) as s:
        s.add_clauses(f.clauses)
        if log is not None:
            for sol in log.solutions:
                yield sol
                s.add_clause(tuple(-x for x in sol))
            if log.done:
                return
        while True:
            out = s.solve(budget)
            if out.status is Status.BUDGET_EXCEEDED:
                raise BudgetExceeded("solver budget exhausted during enumeration")
            if out.unsat:
                break
            assert out.model is not None
            sol = tuple(v if out.model[v - 1] else -v for v in proj)
            if log is not None:
                log.record(sol)
            yield sol
            s.add_clause(tuple(-x for x in sol))
    if log is not None:
        log.finish()


def decode(assignment, vm: VarMap, n: int | None = None, k: int | None = None) -> ColoredGraph:
    """Graph from a model (``Sequence[bool]`` indexed by ``var - 1``) or from signed literals."""
    n = vm.n if n is None else n
    k = vm.k if k is None else k
    if (n, k) != (vm.n, vm.k):
        raise ValueError(f"variable map is for n={vm.n}, k={vm.k}")
    items = list(assignment)
    if items and isinstance(items[0], bool):
        truth = lambda v: items[v - 1]  # noqa: E731
    else:
        pos = {x for x in items if x > 0}
        truth = lambda v: v in pos  # noqa: E731
    rows = [[0] * n for _ in range(n)]
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            on = [c for c in range(1, k + 1) if truth(vm.var(i, j, c))]
            if len(on) != 1:
                raise AssertionError(f"edge ({i},{j}) decodes to colors {on}; the encoding is unsound")
            rows[i - 1][j - 1] = rows[j - 1][i - 1] = on[0]
    return ColoredGraph(n, k, tuple(map(tuple, rows)))


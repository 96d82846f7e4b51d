"""CNF formulas, the edge-variable map, and DIMACS text I/O."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Sequence


class DimacsError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class CnfFormula:
    var_count: int
    clauses: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self) -> None:
        clauses = tuple(tuple(int(x) for x in c) for c in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        if self.var_count < 0:
            raise ValueError("var_count must be non-negative")
        for idx, c in enumerate(clauses):
            if not c:
                raise ValueError(f"clause {idx} is empty")
            seen = set(c)
            for lit in c:
                if lit == 0 or abs(lit) > self.var_count:
                    raise ValueError(f"clause {idx}: literal {lit} out of range 1..{self.var_count}")
                if -lit in seen:
                    raise ValueError(f"clause {idx} contains both {abs(lit)} and {-abs(lit)}")

    def with_clauses(self, extra: Iterable[Sequence[int]]) -> "CnfFormula":
        return CnfFormula(self.var_count, self.clauses + tuple(tuple(c) for c in extra))

    def satisfied_by(self, model: Sequence[bool]) -> bool:
        """``model[v - 1]`` is the value of variable ``v``."""
        return all(any((lit > 0) == model[abs(lit) - 1] for lit in c) for c in self.clauses)


@dataclass
class VarMap:
    """Correspondence between ``(i, j, c)`` edge/color cells and CNF variables."""

    n: int
    k: int
    edge: dict[tuple[int, int, int], int] = field(default_factory=dict)
    aux_first: int = 0
    aux_last: int = -1

    def var(self, i: int, j: int, c: int) -> int:
        if i > j:
            i, j = j, i
        return self.edge[(i, j, c)]

    def edge_vars(self) -> list[int]:
        return sorted(self.edge.values())

    def aux_vars(self) -> range:
        return range(self.aux_first, self.aux_last + 1)

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "k": self.k,
                "edges": [[i, j, c, v] for (i, j, c), v in sorted(self.edge.items())],
                "aux": [self.aux_first, self.aux_last],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "VarMap":
        data = json.loads(text)
        edge = {(i, j, c): v for i, j, c, v in data["edges"]}
        return cls(data["n"], data["k"], edge, data["aux"][0], data["aux"][1])


def format_dimacs(f: CnfFormula, comments: Sequence[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p cnf {f.var_count} {len(f.clauses)}")
    lines.extend(" ".join(map(str, c)) + " 0" for c in f.clauses)
    return "\n".join(lines) + "\n"


def write_dimacs(f: CnfFormula, destination: str | Path | IO[str], comments: Sequence[str] = ()) -> None:
    text = format_dimacs(f, comments)
    if isinstance(destination, (str, Path)):
        Path(destination).write_text(text)
    else:
        destination.write(text)


def parse_dimacs(text: str) -> CnfFormula:
    header: tuple[int, int] | None = None
    clauses: list[tuple[int, ...]] = []
    pending: list[int] = []
    pending_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            if header is not None:
                raise DimacsError("duplicate header", lineno)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"malformed header {line!r}", lineno)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise DimacsError(f"malformed header {line!r}", lineno) from None
            if header[0] < 0 or header[1] < 0:
                raise DimacsError("negative counts in header", lineno)
            continue
        if header is None:
            raise DimacsError("clause before 'p cnf' header", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"bad literal {tok!r}", lineno) from None
            if lit == 0:
                if not pending:
                    raise DimacsError("empty clause", lineno)
                clauses.append(tuple(pending))
                pending = []
                continue
            if abs(lit) > header[0]:
                raise DimacsError(f"literal {lit} exceeds declared {header[0]} variables", lineno)
            if not pending:
                pending_line = lineno
            pending.append(lit)
    if header is None:
        raise DimacsError("missing 'p cnf' header")
    if pending:
        raise DimacsError("clause not terminated by 0", pending_line)
    if len(clauses) != header[1]:
        raise DimacsError(f"header declares {header[1]} clauses, found {len(clauses)}")
    try:
        return CnfFormula(header[0], tuple(clauses))
    except ValueError as exc:
        raise DimacsError(str(exc)) from None


def read_dimacs(source: str | Path | IO[str]) -> CnfFormula:
    if isinstance(source, (str, Path)):
        return parse_dimacs(Path(source).read_text())
    return parse_dimacs(source.read())

"""Solver-agnostic constraint models for Ramsey edge-coloring problems.

A :class:`ConstraintModel` is a conjunction of atoms over the color matrix of
``K_n``. Vertices and colors are 1-based. Models are immutable; combine them
with ``&``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence, Union

from .graph import PartialColoredGraph


@dataclass(frozen=True)
class ColoringProblem:
    """Color ``c`` must avoid a monochromatic ``K_{r[c-1]}`` on ``n`` vertices."""

    r: tuple[int, ...]
    n: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "r", tuple(int(x) for x in self.r))
        if not self.r:
            raise ValueError("need at least one color")
        if any(x < 2 for x in self.r):
            raise ValueError(f"clique bounds must be >= 2, got {self.r}")
        if self.n < 1:
            raise ValueError("n must be positive")

    @property
    def k(self) -> int:
        return len(self.r)

    def with_n(self, n: int) -> "ColoringProblem":
        return ColoringProblem(self.r, n)

    def decremented(self, color: int, n: int) -> "ColoringProblem":
        """The problem met by the color-``color`` neighborhood of a vertex."""
        r = list(self.r)
        r[color - 1] -= 1
        return ColoringProblem(tuple(r), n)

    def __str__(self) -> str:
        return f"({','.join(map(str, self.r))};{self.n})"


# --- atoms ---------------------------------------------------------------------


@dataclass(frozen=True)
class EdgeInRange:
    i: int
    j: int


@dataclass(frozen=True)
class NotAllEqual:
    """Not every edge in ``edges`` has color ``c``."""

    edges: tuple[tuple[int, int], ...]
    c: int


@dataclass(frozen=True)
class EdgeFixed:
    i: int
    j: int
    c: int


@dataclass(frozen=True)
class DegreeEquals:
    v: int
    c: int
    d: int


@dataclass(frozen=True)
class LexLeqOmit:
    """Row ``i`` is lexicographically <= row ``j`` once positions ``i`` and ``j`` are dropped."""

    i: int
    j: int


@dataclass(frozen=True)
class LexLeqOmitGuarded:
    """As :class:`LexLeqOmit`; only emitted for rows with equal degree-matrix rows."""

    i: int
    j: int


@dataclass(frozen=True)
class CellTie:
    i: int
    j: int
    i2: int
    j2: int


@dataclass(frozen=True)
class DegreeViolation:
    """Some vertex has a color degree below ``lo`` or above ``hi``."""

    lo: int
    hi: int


Atom = Union[
    EdgeInRange, NotAllEqual, EdgeFixed, DegreeEquals, LexLeqOmit, LexLeqOmitGuarded, CellTie, DegreeViolation
]


@dataclass(frozen=True)
class ConstraintModel:
    n: int
    k: int
    atoms: tuple[Atom, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "atoms", tuple(self.atoms))
        for atom in self.atoms:
            _validate_atom(atom, self.n, self.k)

    def __and__(self, other: "ConstraintModel") -> "ConstraintModel":
        if (self.n, self.k) != (other.n, other.k):
            # models built without a color count (lex, ties) adapt to the other side
            if other.k == 0 and other.n == self.n:
                return ConstraintModel(self.n, self.k, self.atoms + other.atoms)
            if self.k == 0 and other.n == self.n:
                return ConstraintModel(other.n, other.k, self.atoms + other.atoms)
            raise ValueError(f"cannot conjoin models of shape {(self.n, self.k)} and {(other.n, other.k)}")
        return ConstraintModel(self.n, self.k, self.atoms + other.atoms)

    def count(self, kind: type) -> int:
        return sum(1 for a in self.atoms if isinstance(a, kind))

    def of_kind(self, kind: type) -> list:
        return [a for a in self.atoms if isinstance(a, kind)]

    def dump(self) -> str:
        """Line-oriented listing of atoms, for debugging only."""
        lines = [f"model n={self.n} k={self.k} atoms={len(self.atoms)}"]
        for a in self.atoms:
            if isinstance(a, NotAllEqual):
                edges = " ".join(f"{i}-{j}" for i, j in a.edges)
                lines.append(f"not-all c={a.c} {edges}")
            else:
                fields = " ".join(f"{k}={v}" for k, v in vars(a).items())
                lines.append(f"{type(a).__name__} {fields}")
        return "\n".join(lines) + "\n"


def _validate_atom(atom: Atom, n: int, k: int) -> None:
    def vert(*vs: int) -> None:
        for v in vs:
            if not 1 <= v <= n:
                raise ValueError(f"{atom}: vertex {v} out of range 1..{n}")

    def col(c: int) -> None:
        if k and not 1 <= c <= k:
            raise ValueError(f"{atom}: color {c} out of range 1..{k}")

    if isinstance(atom, (EdgeInRange, LexLeqOmit, LexLeqOmitGuarded)):
        vert(atom.i, atom.j)
        if atom.i == atom.j:
            raise ValueError(f"{atom}: needs two distinct vertices")
    elif isinstance(atom, NotAllEqual):
        col(atom.c)
        for i, j in atom.edges:
            vert(i, j)
    elif isinstance(atom, EdgeFixed):
        vert(atom.i, atom.j)
        col(atom.c)
    elif isinstance(atom, DegreeEquals):
        vert(atom.v)
        col(atom.c)
        if not 0 <= atom.d <= n - 1:
            raise ValueError(f"{atom}: degree out of range")
    elif isinstance(atom, CellTie):
        vert(atom.i, atom.j, atom.i2, atom.j2)
    elif isinstance(atom, DegreeViolation):
        if not 0 <= atom.lo <= atom.hi <= n - 1:
            raise ValueError(f"{atom}: need 0 <= lo <= hi <= n-1")


# --- builders -------------------------------------------------------------------


def adjacency_model(n: int, k: int) -> ConstraintModel:
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    return ConstraintModel(n, k, tuple(EdgeInRange(i, j) for i, j in itertools.combinations(range(1, n + 1), 2)))


def no_clique_model(n: int, c: int, r: int, k: int | None = None) -> ConstraintModel:
    """Forbid a color-``c`` clique on ``r`` vertices: one atom per ``r``-subset."""
    if r < 2:
        raise ValueError("clique size must be at least 2")
    atoms = tuple(
        NotAllEqual(tuple(itertools.combinations(sub, 2)), c) for sub in itertools.combinations(range(1, n + 1), r)
    )
    return ConstraintModel(n, 0 if k is None else k, atoms)


def ramsey_model(p: ColoringProblem) -> ConstraintModel:
    model = adjacency_model(p.n, p.k)
    for c, rc in enumerate(p.r, start=1):
        model = model & no_clique_model(p.n, c, rc, k=p.k)
    return model


def sb_lex(n: int) -> ConstraintModel:
    """Pairwise row ordering over all ``i < j``; carries no color count (``k=0``)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return ConstraintModel(n, 0, tuple(LexLeqOmit(i, j) for i, j in itertools.combinations(range(1, n + 1), 2)))


DegreeRows = Sequence[Sequence[int]]


def _check_rows(m: DegreeRows) -> tuple[int, int]:
    n = len(m)
    if n == 0:
        raise ValueError("empty degree matrix")
    k = len(m[0])
    for idx, row in enumerate(m, start=1):
        if len(row) != k:
            raise ValueError(f"row {idx} has {len(row)} entries, expected {k}")
        if sum(row) != n - 1:
            raise ValueError(f"row {idx} sums to {sum(row)}, expected {n - 1}")
        if any(x < 0 for x in row):
            raise ValueError(f"row {idx} has a negative entry")
    return n, k


def degree_matrix_model(m: DegreeRows) -> ConstraintModel:
    n, k = _check_rows(m)
    atoms = tuple(DegreeEquals(v, c, m[v - 1][c - 1]) for v in range(1, n + 1) for c in range(1, k + 1))
    return ConstraintModel(n, k, atoms)


def guarded_lex(signature: Sequence) -> ConstraintModel:
    """Row-ordering atoms for vertex pairs whose ``signature`` entries agree.

    Pairs with different signatures may never be swapped by a
    signature-preserving relabeling, so only equal pairs get an atom.
    """
    n = len(signature)
    atoms = tuple(
        LexLeqOmitGuarded(i, j)
        for i, j in itertools.combinations(range(1, n + 1), 2)
        if tuple(signature[i - 1]) == tuple(signature[j - 1])
    )
    return ConstraintModel(n, 0, atoms)


def sb_lex_dm(m: DegreeRows) -> ConstraintModel:
    rows = [tuple(r) for r in m]
    if any(rows[i] < rows[i + 1] for i in range(len(rows) - 1)):
        raise ValueError("degree matrix rows must be lex-sorted non-increasing")
    return guarded_lex(rows)


def fix_partial(model: ConstraintModel, p: PartialColoredGraph) -> ConstraintModel:
    if p.n != model.n:
        raise ValueError(f"partial graph has {p.n} vertices, model has {model.n}")
    k = model.k or p.k
    atoms = []
    for i, j, c in p.assigned():
        if not 1 <= c <= k:
            raise ValueError(f"cell ({i},{j}) = {c} outside 1..{k}")
        atoms.append(EdgeFixed(i, j, c))
    return model & ConstraintModel(model.n, model.k, tuple(atoms))


def circulant_model(n: int) -> ConstraintModel:
    """Tie every cell to the first-row cell at the same cyclic distance."""
    if n < 2:
        raise ValueError("n must be at least 2")
    atoms = []
    for i, j in itertools.combinations(range(1, n + 1), 2):
        d = min(j - i, n - (j - i))
        if i != 1 or j - 1 != d:
            atoms.append(CellTie(i, j, 1, 1 + d))
    return ConstraintModel(n, 0, tuple(atoms))


def degree_bound_violation_model(p: ColoringProblem, lo: int, hi: int) -> ConstraintModel:
    return ramsey_model(p) & ConstraintModel(p.n, p.k, (DegreeViolation(lo, hi),))


def clique_atom_count(n: int, r: int) -> int:
    return comb(n, r) if r <= n else 0


def edge_pairs(n: int) -> Iterable[tuple[int, int]]:
    return itertools.combinations(range(1, n + 1), 2)

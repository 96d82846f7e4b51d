"""Edge-colored complete graphs.

A :class:`ColoredGraph` stores the full symmetric ``n x n`` color matrix with a
zero diagonal. Matrix storage is 0-based (plain Python indexing) but every
function that takes a *vertex* or a *color* argument uses 1-based numbering,
so ``color_degree(g, 1, 2)`` is the color-2 degree of the first vertex.

Permutations are passed as sequences of 1-based images: ``pi[u - 1] == π(u)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from pathlib import Path
from typing import Callable, Iterable, Iterator, Sequence

Matrix = tuple[tuple[int, ...], ...]


class BudgetExceeded(RuntimeError):
    """Raised when a brute-force enumeration would exceed its allowed size."""


@dataclass(frozen=True)
class ColoredGraph:
    n: int
    k: int
    cells: Matrix

    def __post_init__(self) -> None:
        cells = tuple(tuple(int(x) for x in row) for row in self.cells)
        object.__setattr__(self, "cells", cells)
        if self.k < 1:
            raise ValueError(f"color count must be positive, got {self.k}")
        if len(cells) != self.n or any(len(row) != self.n for row in cells):
            raise ValueError(f"cells must be a {self.n}x{self.n} matrix")
        for i in range(self.n):
            if cells[i][i] != 0:
                raise ValueError(f"diagonal cell ({i + 1},{i + 1}) must be 0")
            for j in range(i + 1, self.n):
                c = cells[i][j]
                if c != cells[j][i]:
                    raise ValueError(f"cells ({i + 1},{j + 1}) and ({j + 1},{i + 1}) differ")
                if not 1 <= c <= self.k:
                    raise ValueError(f"cell ({i + 1},{j + 1}) = {c} outside 1..{self.k}")

    @classmethod
    def from_upper(cls, n: int, k: int, upper: Sequence[int]) -> "ColoredGraph":
        """Build from the strict upper triangle listed row-major."""
        if len(upper) != n * (n - 1) // 2:
            raise ValueError("upper triangle has the wrong length")
        rows = [[0] * n for _ in range(n)]
        it = iter(upper)
        for i in range(n):
            for j in range(i + 1, n):
                rows[i][j] = rows[j][i] = next(it)
        return cls(n, k, tuple(map(tuple, rows)))

    @classmethod
    def monochrome(cls, n: int, k: int, color: int = 1) -> "ColoredGraph":
        return cls.from_upper(n, k, [color] * (n * (n - 1) // 2))

    def color(self, u: int, v: int) -> int:
        """Color of edge ``{u, v}`` (1-based vertices)."""
        return self.cells[u - 1][v - 1]

    def upper(self) -> tuple[int, ...]:
        """Strict upper triangle, row-major. This is the total order on graphs."""
        n, cells = self.n, self.cells
        return tuple(cells[i][j] for i in range(n) for j in range(i + 1, n))

    def sort_key(self) -> tuple:
        return (self.n, self.k, self.upper())

    def __lt__(self, other: "ColoredGraph") -> bool:
        return self.sort_key() < other.sort_key()

    def row_string(self, i: int) -> str:
        return " ".join(map(str, self.cells[i - 1]))


@dataclass(frozen=True)
class PartialColoredGraph:
    """Colored complete graph where some off-diagonal cells are ``None``."""

    n: int
    k: int
    cells: tuple[tuple[int | None, ...], ...]

    def __post_init__(self) -> None:
        cells = tuple(tuple(None if x is None else int(x) for x in row) for row in self.cells)
        object.__setattr__(self, "cells", cells)
        if len(cells) != self.n or any(len(row) != self.n for row in cells):
            raise ValueError(f"cells must be a {self.n}x{self.n} matrix")
        for i in range(self.n):
            if cells[i][i] not in (0, None):
                raise ValueError(f"diagonal cell ({i + 1},{i + 1}) must be 0")
            for j in range(i + 1, self.n):
                if cells[i][j] != cells[j][i]:
                    raise ValueError(f"cells ({i + 1},{j + 1}) and ({j + 1},{i + 1}) differ")

    def assigned(self) -> Iterator[tuple[int, int, int]]:
        """Yield ``(i, j, color)`` for assigned cells with ``i < j`` (1-based)."""
        for i in range(self.n):
            for j in range(i + 1, self.n):
                c = self.cells[i][j]
                if c is not None:
                    yield i + 1, j + 1, c

    def is_complete(self) -> bool:
        return all(c is not None for i, row in enumerate(self.cells) for j, c in enumerate(row) if i != j)

    def completed(self) -> ColoredGraph:
        if not self.is_complete():
            raise ValueError("partial graph still has unassigned cells")
        return ColoredGraph(self.n, self.k, tuple(tuple(0 if c is None else c for c in row) for row in self.cells))

    @classmethod
    def from_graph(cls, g: ColoredGraph) -> "PartialColoredGraph":
        return cls(g.n, g.k, g.cells)


def _check_vertex(g: ColoredGraph, v: int) -> None:
    if not 1 <= v <= g.n:
        raise ValueError(f"vertex {v} out of range 1..{g.n}")


def _check_color(g: ColoredGraph, c: int) -> None:
    if not 1 <= c <= g.k:
        raise ValueError(f"color {c} out of range 1..{g.k}")


def color_degree(g: ColoredGraph, v: int, c: int) -> int:
    _check_vertex(g, v)
    _check_color(g, c)
    return g.cells[v - 1].count(c)


def degree_matrix(g: ColoredGraph) -> tuple[tuple[int, ...], ...]:
    """The ``n x k`` matrix of per-vertex, per-color degrees."""
    return tuple(tuple(row.count(c) for c in range(1, g.k + 1)) for row in g.cells)


def _check_perm(perm: Sequence[int], size: int, what: str) -> None:
    if len(perm) != size or sorted(perm) != list(range(1, size + 1)):
        raise ValueError(f"{what} must be a permutation of 1..{size}, got {list(perm)}")


def apply_perms(g: ColoredGraph, pi: Sequence[int], sigma: Sequence[int]) -> ColoredGraph:
    """Relabel vertices by ``pi`` and colors by ``sigma``.

    The result ``r`` satisfies ``r[pi(u)][pi(v)] == sigma(g[u][v])``.
    """
    _check_perm(pi, g.n, "vertex permutation")
    _check_perm(sigma, g.k, "color permutation")
    rows = [[0] * g.n for _ in range(g.n)]
    for u in range(g.n):
        pu = pi[u] - 1
        src = g.cells[u]
        dst = rows[pu]
        for v in range(g.n):
            if u != v:
                dst[pi[v] - 1] = sigma[src[v] - 1]
    return ColoredGraph(g.n, g.k, tuple(map(tuple, rows)))


def compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """``p ∘ q`` (apply ``q`` first)."""
    return tuple(p[x - 1] for x in q)


def inverse(p: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x - 1] = i + 1
    return tuple(inv)


def mono_clique_exists(g: ColoredGraph, c: int, r: int) -> bool:
    """True iff some ``r`` vertices span only color-``c`` edges."""
    if r < 2:
        raise ValueError("clique size must be at least 2")
    if r > g.n:
        return False
    cells = g.cells
    nbrs = [frozenset(u for u in range(g.n) if cells[v][u] == c) for v in range(g.n)]

    def extend(cand: frozenset, need: int) -> bool:
        if need == 0:
            return True
        if len(cand) < need:
            return False
        for v in sorted(cand):
            if extend(cand & nbrs[v] & frozenset(range(v + 1, g.n)), need - 1):
                return True
        return False

    return extend(frozenset(range(g.n)), r)


def is_ramsey_coloring(g: ColoredGraph, r: Sequence[int]) -> bool:
    if len(r) != g.k:
        raise ValueError(f"need {g.k} clique bounds, got {len(r)}")
    return not any(mono_clique_exists(g, c, rc) for c, rc in enumerate(r, start=1))


def neighbor_subgraph(g: ColoredGraph, v: int, c: int) -> ColoredGraph:
    """Coloring induced on the color-``c`` neighbors of ``v``, in ascending vertex order."""
    _check_vertex(g, v)
    _check_color(g, c)
    nb = [u for u in range(g.n) if g.cells[v - 1][u] == c]
    cells = tuple(tuple(g.cells[a][b] for b in nb) for a in nb)
    return ColoredGraph(len(nb), g.k, cells)


def enumerate_all_colorings(
    n: int,
    k: int,
    predicate: Callable[[ColoredGraph], bool] | None = None,
    budget: int = 1 << 22,
) -> Iterator[ColoredGraph]:
    """Brute-force every coloring of ``K_n`` with ``k`` colors.

    Cells of the upper triangle are counted in base ``k``, row-major, last
    cell fastest. Refuses (``BudgetExceeded``) when ``k ** C(n, 2) > budget``.
    """
    m = comb(n, 2)
    total = k**m
    if total > budget:
        raise BudgetExceeded(f"{k}^{m} = {total} colorings exceeds budget {budget}")
    for upper in itertools.product(range(1, k + 1), repeat=m):
        g = ColoredGraph.from_upper(n, k, upper)
        if predicate is None or predicate(g):
            yield g


# --- text format -------------------------------------------------------------


def format_graph(g: ColoredGraph | PartialColoredGraph) -> str:
    lines = [f"{g.n} {g.k}"]
    for row in g.cells:
        lines.append(" ".join("?" if x is None else str(x) for x in row))
    return "\n".join(lines) + "\n"


def parse_graphs(text: str) -> list[ColoredGraph | PartialColoredGraph]:
    """Parse one or more graphs (blank lines between them are allowed)."""
    tokens_by_line = [ln.split() for ln in text.splitlines()]
    lines = [t for t in tokens_by_line if t and not t[0].startswith("#")]
    out: list[ColoredGraph | PartialColoredGraph] = []
    pos = 0
    while pos < len(lines):
        header = lines[pos]
        if len(header) != 2:
            raise ValueError(f"expected 'n k' header, got {' '.join(header)!r}")
        n, k = int(header[0]), int(header[1])
        rows = lines[pos + 1 : pos + 1 + n]
        if len(rows) != n:
            raise ValueError("truncated graph: expected %d rows" % n)
        partial = any(tok in ("?", "_") for row in rows for tok in row)
        cells = tuple(tuple(None if tok in ("?", "_") else int(tok) for tok in row) for row in rows)
        if partial:
            cells = tuple(tuple(0 if i == j else x for j, x in enumerate(row)) for i, row in enumerate(cells))
            out.append(PartialColoredGraph(n, k, cells))
        else:
            out.append(ColoredGraph(n, k, cells))
        pos += 1 + n
    return out


def parse_graph(text: str) -> ColoredGraph | PartialColoredGraph:
    graphs = parse_graphs(text)
    if len(graphs) != 1:
        raise ValueError(f"expected exactly one graph, found {len(graphs)}")
    return graphs[0]


def read_graph(path: str | Path) -> ColoredGraph | PartialColoredGraph:
    return parse_graph(Path(path).read_text())


def write_graph(g: ColoredGraph | PartialColoredGraph, path: str | Path) -> None:
    Path(path).write_text(format_graph(g))


def read_graphs(path: str | Path) -> list[ColoredGraph | PartialColoredGraph]:
    return parse_graphs(Path(path).read_text())


def write_graphs(graphs: Iterable[ColoredGraph], path: str | Path) -> None:
    Path(path).write_text("\n".join(format_graph(g) for g in graphs))

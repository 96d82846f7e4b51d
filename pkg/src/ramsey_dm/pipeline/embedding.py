"""Embedding instances: fixing the neighborhoods of vertex 1 and asking for a completion.

In any solution of ``(r_1, ..., r_k; n)``, the color-``c`` neighbors of a vertex
induce a solution of the problem with ``r_c`` lowered by one. An instance
places one such subcoloring per color on consecutive vertex blocks after
vertex 1 and leaves every cross-block cell open:

    vertex 1 | block 1 (d_1 vertices) | block 2 (d_2) | ... | block k (d_k)
"""

from __future__ import annotations

import functools
import itertools
import math
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

from ..cnf import EMBEDDED, Backend, Budget, decode, encode, solve
from ..cnf.solve import Status
from ..graph import (
    ColoredGraph,
    PartialColoredGraph,
    is_ramsey_coloring,
    neighbor_subgraph,
    read_graph,
    read_graphs,
    write_graph,
    write_graphs,
)
from ..model import ColoringProblem, circulant_model, fix_partial, ramsey_model
from .manifest import JobManifest, backend_context, run_jobs


@dataclass(frozen=True)
class EmbeddingInstance:
    problem: ColoringProblem
    degrees: tuple[int, ...]
    components: tuple[ColoredGraph, ...]
    realized: PartialColoredGraph


def check_degrees(p: ColoringProblem, degrees: Sequence[int]) -> tuple[int, ...]:
    degrees = tuple(int(d) for d in degrees)
    if len(degrees) != p.k:
        raise ValueError(f"need {p.k} degrees, got {len(degrees)}")
    if any(d < 0 for d in degrees) or sum(degrees) != p.n - 1:
        raise ValueError(f"degrees {degrees} must be non-negative and sum to n-1 = {p.n - 1}")
    return degrees


def realize(p: ColoringProblem, degrees: Sequence[int], components: Sequence[ColoredGraph]) -> PartialColoredGraph:
    """The partial coloring with ``components`` placed on vertex 1's color blocks."""
    degrees = check_degrees(p, degrees)
    n = p.n
    cells: list[list[int | None]] = [[None] * n for _ in range(n)]
    for i in range(n):
        cells[i][i] = 0
    start = 1
    for c, (d, comp) in enumerate(zip(degrees, components), start=1):
        if comp.n != d or comp.k != p.k:
            raise ValueError(f"component {c} must have {d} vertices and {p.k} colors")
        if d == 0:
            continue
        if not is_ramsey_coloring(comp, p.decremented(c, d).r):
            raise ValueError(f"component {c} is not a solution of {p.decremented(c, d)}")
        for a in range(d):
            cells[0][start + a] = cells[start + a][0] = c
            for b in range(d):
                if a != b:
                    cells[start + a][start + b] = comp.cells[a][b]
        start += d
    return PartialColoredGraph(n, p.k, tuple(map(tuple, cells)))


class EmbeddingSet:
    """All instances for one degree tuple: the product of the libraries, built on demand.

    ``len()`` is the product of the library sizes; iterating realizes the
    instances one at a time in mixed-radix order (last library fastest).
    """

    def __init__(self, p: ColoringProblem, degrees: Sequence[int], libraries: Sequence[Sequence[ColoredGraph]]):
        self.problem = p
        self.degrees = check_degrees(p, degrees)
        if len(libraries) != p.k:
            raise ValueError(f"need one library per color ({p.k}), got {len(libraries)}")
        self.libraries = libraries

    def __len__(self) -> int:
        return math.prod(len(lib) for lib in self.libraries)

    def index_tuple(self, i: int) -> tuple[int, ...]:
        if not 0 <= i < len(self):
            raise IndexError(i)
        out = []
        for lib in reversed(self.libraries):
            i, rem = divmod(i, len(lib))
            out.append(rem)
        return tuple(reversed(out))

    def instance(self, idx: Sequence[int]) -> EmbeddingInstance:
        comps = tuple(lib[i] for lib, i in zip(self.libraries, idx))
        return EmbeddingInstance(self.problem, self.degrees, comps, realize(self.problem, self.degrees, comps))

    def __getitem__(self, i: int) -> EmbeddingInstance:
        return self.instance(self.index_tuple(i))

    def indices(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*(range(len(lib)) for lib in self.libraries))

    def __iter__(self) -> Iterator[EmbeddingInstance]:
        return (self.instance(idx) for idx in self.indices())


def generate_embeddings(
    p: ColoringProblem, degrees: Sequence[int], libraries: Sequence[Sequence[ColoredGraph]]
) -> EmbeddingSet:
    return EmbeddingSet(p, degrees, libraries)


def instance_model(p: ColoringProblem, partial: PartialColoredGraph):
    return fix_partial(ramsey_model(p), partial)


def complete_instance(
    p: ColoringProblem, partial: PartialColoredGraph, backend: Backend = EMBEDDED, budget: Budget | None = None
) -> tuple[Status, ColoredGraph | None]:
    f, vm = encode(instance_model(p, partial))
    out = solve(f, backend, budget)
    if not out.sat:
        return out.status, None
    g = decode(out.model, vm)
    assert is_ramsey_coloring(g, p.r)
    assert all(g.color(i, j) == c for i, j, c in partial.assigned())
    return Status.SAT, g


# --- refutation campaign ---------------------------------------------------------------


@functools.lru_cache(maxsize=8)
def _load_library(path: str) -> tuple[ColoredGraph, ...]:
    return tuple(read_graphs(path))


def execute_embedding(ctx: dict, recipe: dict) -> tuple[str, str | None, str | None]:
    """Worker for one embedding job (module-level so it pickles)."""
    p = ColoringProblem(tuple(ctx["r"]), ctx["n"])
    libs = [_load_library(path) for path in ctx["libraries"]]
    partial = EmbeddingSet(p, ctx["degrees"], libs).instance(recipe["index"]).realized
    backend = Backend(ctx["backend"], ctx.get("command"))
    budget = Budget(ctx.get("conflicts"), ctx.get("seconds"))
    status, g = complete_instance(p, partial, backend, budget)
    if status is Status.UNSAT:
        return "unsat", None, None
    if status is Status.BUDGET_EXCEEDED:
        return "unknown", None, "budget exceeded"
    out = Path(ctx["workdir"]) / "witnesses" / f"{recipe['name']}.txt"
    out.parent.mkdir(parents=True, exist_ok=True)
    write_graph(g, out)
    return "sat", str(out), None


@dataclass
class RefutationReport:
    degrees: tuple[int, ...]
    instances: int
    counts: dict[str, int] = field(default_factory=dict)
    witness: ColoredGraph | None = None

    @property
    def verdict(self) -> str:
        if self.counts.get("sat"):
            return "sat"
        if self.counts.get("unsat") == self.instances:
            return "all-unsat"
        return "partial"


def refute_degree_triple(
    p: ColoringProblem,
    degrees: Sequence[int],
    libraries: Sequence[Sequence[ColoredGraph]],
    backend: Backend = EMBEDDED,
    budget: Budget | None = None,
    workdir: str | Path | None = None,
    workers: int = 1,
    stop_after: int | None = None,
    progress=None,
) -> RefutationReport:
    """Try to complete every embedding instance; any completion is a witness.

    Progress is kept in ``workdir/embed.jsonl`` so a long campaign can resume.
    """
    if workdir is None:
        with tempfile.TemporaryDirectory(prefix="ramsey-embed-") as tmp:
            return refute_degree_triple(p, degrees, libraries, backend, budget, tmp, workers, stop_after, progress)
    work = Path(workdir)
    work.mkdir(parents=True, exist_ok=True)
    emb = EmbeddingSet(p, degrees, libraries)
    paths = []
    for c, lib in enumerate(libraries, start=1):
        path = work / f"library-{c}.txt"
        if not path.exists():
            write_graphs(lib, path)
        paths.append(str(path.resolve()))
    ctx = {"r": list(p.r), "n": p.n, "degrees": list(emb.degrees), "libraries": paths, "workdir": str(work.resolve())}
    ctx.update(backend_context(backend, budget))
    with JobManifest(work / "embed.jsonl", ctx) as man:
        width = len(str(max(len(emb) - 1, 0)))
        man.add_many(
            (f"emb-{i:0{width}d}", {"kind": "embed", "index": list(idx), "name": f"emb-{i:0{width}d}"})
            for i, idx in enumerate(emb.indices())
        )
        counts = run_jobs(man, execute_embedding, workers, progress=progress, limit=stop_after)
        witness = None
        for job in man.records():
            if job.status == "sat":
                witness = read_graph(job.result)
                break
    return RefutationReport(emb.degrees, len(emb), counts, witness)


def refute_instance_file(
    p: ColoringProblem, path: str | Path, backend: Backend = EMBEDDED, budget: Budget | None = None
) -> tuple[Status, ColoredGraph | None]:
    partial = read_graph(path)
    if isinstance(partial, ColoredGraph):
        partial = PartialColoredGraph.from_graph(partial)
    if (partial.n, partial.k) != (p.n, p.k):
        raise ValueError(f"instance is {partial.n}x{partial.k}, problem needs {p.n}x{p.k}")
    return complete_instance(p, partial, backend, budget)


def neighborhood_libraries(g: ColoredGraph, v: int = 1) -> list[list[ColoredGraph]]:
    """Singleton libraries holding the neighborhoods of ``v`` in ``g`` (for sanity checks)."""
    return [[neighbor_subgraph(g, v, c)] for c in range(1, g.k + 1)]


def vertex_degrees(g: ColoredGraph, v: int = 1) -> tuple[int, ...]:
    return tuple(sum(1 for u in range(g.n) if g.cells[v - 1][u] == c) for c in range(1, g.k + 1))


# --- circulant search -------------------------------------------------------------------


@dataclass(frozen=True)
class CirculantResult:
    status: Status
    graph: ColoredGraph | None = None


def find_circulant_coloring(p: ColoringProblem, backend: Backend = EMBEDDED, budget: Budget | None = None) -> CirculantResult:
    model = ramsey_model(p)
    if p.n >= 2:
        model = model & circulant_model(p.n)
    f, vm = encode(model)
    out = solve(f, backend, budget)
    if not out.sat:
        return CirculantResult(out.status)
    g = decode(out.model, vm)
    assert is_ramsey_coloring(g, p.r)
    n = p.n
    assert all(g.cells[i][j] == g.cells[0][(j - i) % n] for i in range(n) for j in range(n) if i != j)
    return CirculantResult(Status.SAT, g)

"""Degree-matrix driven search: bounds, sequence and matrix filters, per-matrix enumeration."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

from ..canon import class_representatives
from ..cnf import EMBEDDED, Backend, BackendError, Budget, Status, all_solutions, decode, encode, solve
from ..degseq import DegreeMatrix, DegreeSequence, columns_graphical, is_graphical, lex_canonical_dm
from ..graph import ColoredGraph, degree_matrix, is_ramsey_coloring
from ..model import (
    ColoringProblem,
    ConstraintModel,
    DegreeEquals,
    degree_bound_violation_model,
    degree_matrix_model,
    guarded_lex,
    ramsey_model,
    sb_lex,
    sb_lex_dm,
)

log = logging.getLogger(__name__)


def color_symmetries(r: Sequence[int], fixed: Iterable[int] = ()) -> list[tuple[int, ...]]:
    """Color permutations that preserve the clique bounds ``r`` (and fix the colors in ``fixed``)."""
    k = len(r)
    fixed = set(fixed)
    out = []
    for sigma in itertools.permutations(range(1, k + 1)):
        if all(r[sigma[c - 1] - 1] == r[c - 1] for c in range(1, k + 1)) and all(sigma[c - 1] == c for c in fixed):
            out.append(sigma)
    return out


# --- degree bounds ------------------------------------------------------------------


@dataclass(frozen=True)
class BoundsVerdict:
    status: str  # "verified" | "refuted" | "inconclusive"
    witness: ColoredGraph | None = None

    @property
    def verified(self) -> bool:
        return self.status == "verified"


def verify_degree_bounds(
    p: ColoringProblem,
    lo: int,
    hi: int,
    backend: Backend = EMBEDDED,
    budget: Budget | None = None,
    symmetry_break: bool = True,
) -> BoundsVerdict:
    """Check that every color degree of every solution of ``p`` lies in ``[lo, hi]``.

    With ``symmetry_break`` (the default) the question is split into one
    query per color orbit and out-of-range degree: a violating coloring can
    be relabeled so that vertex 1 carries the violation in the orbit's
    representative color, and the remaining vertices are row-ordered.
    Without it a single query over all vertices and colors is solved.
    """
    if not symmetry_break or p.n < 3:
        queries = [degree_bound_violation_model(p, lo, hi)]
    else:
        order = guarded_lex([(0,)] + [(1,)] * (p.n - 1))
        queries = [
            ramsey_model(p) & ConstraintModel(p.n, p.k, (DegreeEquals(1, c, d),)) & order
            for c in _orbit_representatives(color_symmetries(p.r), p.k)
            for d in range(p.n)
            if not lo <= d <= hi
        ]
    inconclusive = False
    for model in queries:
        f, vm = encode(model)
        out = solve(f, backend, budget)
        if out.status is Status.BUDGET_EXCEEDED:
            inconclusive = True
            continue
        if out.unsat:
            continue
        g = decode(out.model, vm)
        assert is_ramsey_coloring(g, p.r)
        assert any(not lo <= d <= hi for row in degree_matrix(g) for d in row)
        return BoundsVerdict("refuted", g)
    return BoundsVerdict("inconclusive" if inconclusive else "verified")


def _orbit_representatives(group: Sequence[tuple[int, ...]], k: int) -> list[int]:
    seen: set[int] = set()
    reps = []
    for c in range(1, k + 1):
        if c not in seen:
            reps.append(c)
            seen.update(sigma[c - 1] for sigma in group)
    return reps


# --- feasibility filters ------------------------------------------------------------


@dataclass
class FilterResult:
    feasible: list = field(default_factory=list)
    infeasible: list = field(default_factory=list)
    unknown: list = field(default_factory=list)  # (item, reason) for budget or backend failures

    @property
    def complete(self) -> bool:
        return not self.unknown


def sequence_model(p: ColoringProblem, s: Sequence[int], color: int = 1) -> ConstraintModel:
    """``p`` with vertex ``v`` having color-``color`` degree ``s[v-1]``, plus ordering within equal degrees."""
    if len(s) != p.n:
        raise ValueError(f"sequence length {len(s)} != n = {p.n}")
    fix = ConstraintModel(p.n, p.k, tuple(DegreeEquals(v, color, d) for v, d in enumerate(s, start=1)))
    return ramsey_model(p) & fix & guarded_lex([(d,) for d in s])


def _decide(model: ConstraintModel, backend: Backend, budget: Budget | None):
    f, vm = encode(model)
    try:
        out = solve(f, backend, budget)
    except BackendError as exc:
        return "error", str(exc)
    if out.status is Status.BUDGET_EXCEEDED:
        return "unknown", "budget exceeded"
    if out.unsat:
        return "unsat", None
    return "sat", decode(out.model, vm)


def filter_sequences_sat(
    p: ColoringProblem,
    seqs: Iterable[Sequence[int]],
    backend: Backend = EMBEDDED,
    budget: Budget | None = None,
    color: int = 1,
    progress: Callable[[int, tuple, str], None] | None = None,
) -> FilterResult:
    """Keep the sequences that occur as the sorted color-``color`` degree sequence of some solution."""
    res = FilterResult()
    for idx, s in enumerate(seqs):
        s = tuple(s)
        if not is_graphical(s):
            res.infeasible.append(s)
            status = "unsat"
        else:
            status, info = _decide(sequence_model(p, s, color), backend, budget)
            if status == "sat":
                assert sorted((row[color - 1] for row in degree_matrix(info)), reverse=True) == list(s)
                res.feasible.append(s)
            elif status == "unsat":
                res.infeasible.append(s)
            else:
                res.unknown.append((s, info))
        if progress:
            progress(idx, s, status)
    return res


def matrix_model(p: ColoringProblem, m: Sequence[Sequence[int]]) -> ConstraintModel:
    return ramsey_model(p) & degree_matrix_model(m) & sb_lex_dm(m)


def filter_matrices_sat(
    p: ColoringProblem,
    mats: Iterable[Sequence[Sequence[int]]],
    backend: Backend = EMBEDDED,
    budget: Budget | None = None,
    progress: Callable[[int, tuple, str], None] | None = None,
) -> FilterResult:
    """Keep the matrices ``M`` for which ``p`` with degree matrix ``M`` (rows in order) is satisfiable.

    Matrices with a non-graphical column are rejected without solving.
    """
    res = FilterResult()
    for idx, m in enumerate(mats):
        m = tuple(tuple(r) for r in m)
        if not columns_graphical(m):
            res.infeasible.append(m)
            status = "unsat"
        else:
            status, info = _decide(matrix_model(p, m), backend, budget)
            if status == "sat":
                assert degree_matrix(info) == m
                res.feasible.append(m)
            elif status == "unsat":
                res.infeasible.append(m)
            else:
                res.unknown.append((m, info))
        if progress:
            progress(idx, m, status)
    return res


def color_variants(m: Sequence[Sequence[int]], r: Sequence[int]) -> list[DegreeMatrix]:
    """Assignments of the columns of ``m`` to actual colors, up to symmetries of ``r``.

    A canonical matrix forgets which column belongs to which color. When the
    bounds in ``r`` differ, each distinct column-to-color assignment has to
    be tried. Rows of each variant are sorted non-increasing.
    """
    rows = [tuple(x) for x in m]
    k = len(r)
    sym = color_symmetries(r)
    out = set()
    for perm in itertools.permutations(range(k)):
        variant = sorted((tuple(row[p] for p in perm) for row in rows), reverse=True)
        # pick the least image under the problem's own color symmetries
        rep = min(tuple(sorted((tuple(row[s - 1] for s in sigma) for row in variant), reverse=True)) for sigma in sym)
        out.add(rep)
    return sorted(out, reverse=True)


# --- enumeration --------------------------------------------------------------------


def enumerate_per_matrix(
    p: ColoringProblem,
    m: Sequence[Sequence[int]],
    backend: Backend = EMBEDDED,
    journal: str | Path | None = None,
    budget: Budget | None = None,
) -> list[ColoredGraph]:
    """All solutions of ``p`` with degree matrix ``m`` that satisfy the guarded row ordering."""
    m = tuple(tuple(r) for r in m)
    if not columns_graphical(m):
        return []
    f, vm = encode(matrix_model(p, m))
    graphs = []
    for sol in all_solutions(f, vm.edge_vars(), backend, journal=journal, budget=budget):
        g = decode(sol, vm)
        assert is_ramsey_coloring(g, p.r) and degree_matrix(g) == m
        graphs.append(g)
    return graphs


def enumerate_lex(
    p: ColoringProblem, backend: Backend = EMBEDDED, journal: str | Path | None = None, budget: Budget | None = None
) -> list[ColoredGraph]:
    """All solutions of ``p`` that satisfy the full pairwise row ordering."""
    model = ramsey_model(p) & sb_lex(p.n) if p.n >= 2 else ramsey_model(p)
    f, vm = encode(model)
    out = []
    for sol in all_solutions(f, vm.edge_vars(), backend, journal=journal, budget=budget):
        g = decode(sol, vm)
        assert is_ramsey_coloring(g, p.r)
        out.append(g)
    return out


@dataclass
class PipelineResult:
    problem: ColoringProblem
    sequences: list[DegreeSequence] = field(default_factory=list)
    feasible_sequences: list[DegreeSequence] = field(default_factory=list)
    matrices: list[DegreeMatrix] = field(default_factory=list)
    feasible_matrices: list[DegreeMatrix] = field(default_factory=list)
    raw: int = 0
    classes: list[ColoredGraph] = field(default_factory=list)
    partial: bool = False
    notes: list[str] = field(default_factory=list)

    def summary(self) -> dict[str, int]:
        return {
            "sequences": len(self.sequences),
            "feasible_sequences": len(self.feasible_sequences),
            "matrices": len(self.matrices),
            "feasible_matrices": len(self.feasible_matrices),
            "raw": self.raw,
            "classes": len(self.classes),
            "partial": int(self.partial),
        }


# --- libraries ------------------------------------------------------------------------


def subproblem(p: ColoringProblem, c: int, d: int) -> ColoringProblem:
    """The problem solved by the color-``c`` neighborhood (on ``d`` vertices) of any vertex."""
    return p.decremented(c, d)


def subcoloring_library(
    p: ColoringProblem,
    c: int,
    d: int,
    backend: Backend = EMBEDDED,
    symmetry: str = "weak",
    budget: Budget | None = None,
    journal: str | Path | None = None,
) -> list[ColoredGraph]:
    """One solution of ``p`` with ``r_c`` decremented on ``d`` vertices per equivalence class.

    ``symmetry="weak"`` groups by vertex and arbitrary color permutations.
    ``symmetry="problem"`` only allows color permutations that keep every
    bound of ``p`` and fix ``c``, which is what a sound embedding needs.
    Every representative is itself a solution of the subproblem.
    """
    if d < 1:
        raise ValueError("d must be positive")
    q = subproblem(p, c, d)
    if symmetry == "weak":
        sigmas = None
    elif symmetry == "problem":
        sigmas = color_symmetries(p.r, fixed=(c,))
    else:
        raise ValueError(f"unknown symmetry {symmetry!r}")
    if d == 1:
        return [ColoredGraph(1, q.k, ((0,),))]
    return solution_classes(q, enumerate_lex(q, backend, journal=journal, budget=budget), sigmas=sigmas)


def solution_classes(
    p: ColoringProblem, graphs: Iterable[ColoredGraph], workers: int = 1, sigmas=None
) -> list[ColoredGraph]:
    """Weak-isomorphism classes of solutions of ``p``, each given by a member that solves ``p``.

    The weak canonical form may permute colors with different bounds, so
    the representative is chosen among the forms that only use the color
    symmetries of ``p`` (intersected with ``sigmas`` when given).
    """
    own = color_symmetries(p.r)
    if sigmas is not None:
        allowed = {tuple(s) for s in sigmas}
        own = [s for s in own if s in allowed]
    reps = class_representatives(graphs, rep_sigmas=own, workers=workers, sigmas=sigmas)
    assert all(is_ramsey_coloring(g, p.r) for g in reps)
    return reps


def ramsey_classes(p: ColoringProblem, backend: Backend = EMBEDDED, budget: Budget | None = None) -> list[ColoredGraph]:
    """One solution of ``p`` per weak-isomorphism class (via row-ordered enumeration)."""
    return solution_classes(p, enumerate_lex(p, backend, budget=budget))


def canonical_matrices_of(graphs: Iterable[ColoredGraph]) -> set[DegreeMatrix]:
    return {lex_canonical_dm(degree_matrix(g)) for g in graphs}


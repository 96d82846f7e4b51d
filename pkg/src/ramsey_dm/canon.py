"""Canonical forms of edge-colored complete graphs under weak isomorphism.

For every color permutation the vertices are labeled by individualization and
refinement of an ordered partition. The search keeps the least flattened upper
triangle seen so far and cuts a branch as soon as the rows it has already
fixed compare greater. Automorphisms discovered at equal leaves prune sibling
branches lying in the same orbit.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Iterable, Sequence

from .graph import ColoredGraph, apply_perms, compose, inverse


def _refine(a: list[list[int]], k: int, cells: list[list[int]]) -> list[list[int]]:
    n = len(a)
    while True:
        cell_of = [0] * n
        for idx, cell in enumerate(cells):
            for x in cell:
                cell_of[x] = idx
        width = len(cells) * k
        new: list[list[int]] = []
        for cell in cells:
            if len(cell) == 1:
                new.append(cell)
                continue
            groups: dict[tuple[int, ...], list[int]] = {}
            for x in cell:
                cnt = [0] * width
                row = a[x]
                for y in range(n):
                    if y != x:
                        cnt[cell_of[y] * k + row[y] - 1] += 1
                groups.setdefault(tuple(cnt), []).append(x)
            if len(groups) == 1:
                new.append(cell)
            else:
                new.extend(groups[key] for key in sorted(groups))
        if len(new) == len(cells):
            return cells
        cells = new


@dataclass
class _SearchState:
    n: int
    best: tuple[int, ...] | None = None
    best_order: list[int] | None = None
    best_sigma: tuple[int, ...] | None = None
    autos: list[list[int]] = field(default_factory=list)


def _orbit_roots(n: int, gens: list[list[int]]) -> list[int]:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for x in range(n):
            rx, ry = find(x), find(g[x])
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)
    return [find(x) for x in range(n)]


def _search(a, k, sigma, cells, path, st: _SearchState) -> None:
    n = st.n
    cells = _refine(a, k, cells)
    order = [x for cell in cells for x in cell]
    m = 0
    while m < len(cells) and len(cells[m]) == 1:
        m += 1
    pref = tuple(a[order[i]][order[j]] for i in range(m) for j in range(i + 1, n))
    if st.best is not None:
        head = st.best[: len(pref)]
        if pref > head:
            return
        if m == len(cells) and pref == st.best:
            if sigma == st.best_sigma:
                gamma = [0] * n
                for x, y in zip(order, st.best_order):
                    gamma[x] = y
                if any(gamma[x] != x for x in range(n)):
                    st.autos.append(gamma)
            return
    if m == len(cells):
        st.best, st.best_order, st.best_sigma = pref, order, sigma
        return

    target = cells[m]
    explored: list[int] = []
    for v in sorted(target):
        if explored:
            gens = [g for g in st.autos if all(g[p] == p for p in path)]
            if gens:
                roots = _orbit_roots(n, gens)
                if roots[v] in {roots[e] for e in explored}:
                    continue
        explored.append(v)
        rest = [x for x in target if x != v]
        child = cells[:m] + [[v], rest] + cells[m + 1 :]
        _search(a, k, sigma, child, path + [v], st)


ColorGroup = Sequence[Sequence[int]]


def _color_group(k: int, sigmas: ColorGroup | None) -> list[tuple[int, ...]]:
    if sigmas is None:
        return list(itertools.permutations(range(1, k + 1)))
    group = sorted({tuple(s) for s in sigmas})
    ident = tuple(range(1, k + 1))
    if ident not in group or any(sorted(s) != list(ident) for s in group):
        raise ValueError("color group must consist of permutations of 1..k and contain the identity")
    return group


def canonical_labeling(
    g: ColoredGraph, sigmas: ColorGroup | None = None
) -> tuple[ColoredGraph, tuple[int, ...], tuple[int, ...]]:
    """Return ``(canon, pi, sigma)`` with ``apply_perms(g, pi, sigma) == canon``.

    ``sigmas`` restricts the color permutations considered (default: all
    ``k!``); it must be a group for the result to be canonical.
    """
    n, k = g.n, g.k
    group = _color_group(k, sigmas)
    if n <= 1:
        return g, tuple(range(1, n + 1)), tuple(range(1, k + 1))
    st = _SearchState(n)
    for sigma in group:
        a = [[0 if u == v else sigma[g.cells[u][v] - 1] for v in range(n)] for u in range(n)]
        _search(a, k, sigma, [list(range(n))], [], st)
    assert st.best is not None and st.best_order is not None and st.best_sigma is not None
    pi = [0] * n
    for pos, x in enumerate(st.best_order):
        pi[x] = pos + 1
    canon = ColoredGraph.from_upper(n, k, st.best)
    return canon, tuple(pi), tuple(st.best_sigma)


def canonical_form(g: ColoredGraph, sigmas: ColorGroup | None = None) -> ColoredGraph:
    return canonical_labeling(g, sigmas)[0]


def weakly_isomorphic(
    g: ColoredGraph, h: ColoredGraph
) -> tuple[bool, tuple[tuple[int, ...], tuple[int, ...]] | None]:
    """Decide ``g ≈ h``; on success also return ``(pi, sigma)`` mapping ``g`` onto ``h``."""
    if g.n != h.n or g.k != h.k:
        return False, None
    cg, pg, sg = canonical_labeling(g)
    ch, ph, sh = canonical_labeling(h)
    if cg != ch:
        return False, None
    pi = compose(inverse(ph), pg)
    sigma = compose(inverse(sh), sg)
    assert apply_perms(g, pi, sigma) == h
    return True, (pi, sigma)


def reduce_mod_weak_iso(
    graphs: Iterable[ColoredGraph], workers: int = 1, sigmas: ColorGroup | None = None
) -> list[ColoredGraph]:
    """One canonical representative per weak-isomorphism class, sorted."""
    graphs = list(graphs)
    shapes = {(g.n, g.k) for g in graphs}
    if len(shapes) > 1:
        raise ValueError(f"graphs must share n and k, got {sorted(shapes)}")
    if workers > 1 and len(graphs) > 64:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            forms = list(pool.map(partial(canonical_form, sigmas=sigmas), graphs, chunksize=32))
    else:
        forms = [canonical_form(g, sigmas) for g in graphs]
    return sorted(set(forms))


def _keyed(g: ColoredGraph, sigmas, rep_sigmas) -> tuple[ColoredGraph, ColoredGraph]:
    key = canonical_form(g, sigmas)
    return key, key if rep_sigmas is None else canonical_form(g, rep_sigmas)


def class_representatives(
    graphs: Iterable[ColoredGraph],
    rep_sigmas: ColorGroup | None = None,
    workers: int = 1,
    sigmas: ColorGroup | None = None,
) -> list[ColoredGraph]:
    """One member per class (classes taken under ``sigmas``), sorted by class key.

    The member is the least canonical form under the smaller group
    ``rep_sigmas``. When the inputs solve a problem whose colors are not
    interchangeable, passing the problem's own color symmetries as
    ``rep_sigmas`` keeps every representative a solution of that problem,
    while the classes themselves still follow ``sigmas``.
    """
    graphs = list(graphs)
    if len({(g.n, g.k) for g in graphs}) > 1:
        raise ValueError("graphs must share n and k")
    fn = partial(_keyed, sigmas=sigmas, rep_sigmas=rep_sigmas)
    if workers > 1 and len(graphs) > 64:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            pairs = list(pool.map(fn, graphs, chunksize=32))
    else:
        pairs = [fn(g) for g in graphs]
    best: dict[ColoredGraph, ColoredGraph] = {}
    for key, rep in pairs:
        if key not in best or rep < best[key]:
            best[key] = rep
    return [best[key] for key in sorted(best)]


def class_count(graphs: Sequence[ColoredGraph]) -> int:
    return len(reduce_mod_weak_iso(graphs))

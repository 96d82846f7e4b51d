import pytest

from ramsey_dm.canon import weakly_isomorphic
from ramsey_dm.cnf import EMBEDDED, Backend, Status
from ramsey_dm.graph import ColoredGraph, PartialColoredGraph, is_ramsey_coloring, neighbor_subgraph, read_graph
from ramsey_dm.model import ColoringProblem
from ramsey_dm.pipeline import (
    EmbeddingSet,
    complete_instance,
    find_circulant_coloring,
    generate_embeddings,
    neighborhood_libraries,
    realize,
    refute_degree_triple,
    refute_instance_file,
    subcoloring_library,
    vertex_degrees,
)

from .conftest import pysat_available

P433 = ColoringProblem((4, 3, 3), 30)
FAST = Backend("pysat") if pysat_available() else None


class Sized(list):
    """Stand-in library that only knows its size."""

    def __init__(self, n):
        super().__init__(range(n))


@pytest.mark.parametrize(
    "degrees,sizes,count",
    [((16, 8, 5), (2, 3, 9), 54), ((14, 8, 7), (115, 3, 9), 3105)],
)
def test_embedding_counts(degrees, sizes, count):
    assert len(generate_embeddings(P433, degrees, [Sized(s) for s in sizes])) == count


def test_embedding_count_streams():
    emb = EmbeddingSet(P433, (13, 8, 8), [Sized(78892), Sized(3), Sized(3)])
    assert len(emb) == 710028
    assert emb.index_tuple(0) == (0, 0, 0)
    assert emb.index_tuple(710027) == (78891, 2, 2)
    assert emb.index_tuple(4) == (0, 1, 1)
    with pytest.raises(IndexError):
        emb.index_tuple(710028)


def test_degree_checks():
    with pytest.raises(ValueError):
        generate_embeddings(P433, (14, 8, 8), [[], [], []])
    with pytest.raises(ValueError):
        generate_embeddings(P433, (14, 15), [[], []])
    with pytest.raises(ValueError):
        generate_embeddings(P433, (14, 8, 7), [[], []])


def test_realize_layout(fixtures):
    g = read_graph(fixtures / "witness_4_3_3_29.txt")
    p = ColoringProblem((4, 3, 3), 29)
    assert vertex_degrees(g) == (12, 8, 8)
    comps = [lib[0] for lib in neighborhood_libraries(g)]
    partial = realize(p, (12, 8, 8), comps)
    assert [partial.cells[0][v] for v in range(1, 29)] == [1] * 12 + [2] * 8 + [3] * 8
    assert partial.cells[1][13] is None and partial.cells[1][2] == comps[0].cells[0][1]
    with pytest.raises(ValueError):
        realize(p, (12, 8, 8), [comps[1], comps[1], comps[2]])
    bad = ColoredGraph.monochrome(8, 3, 2)
    with pytest.raises(ValueError):
        realize(p, (12, 8, 8), [comps[0], bad, comps[2]])


def test_witness_embedding_mostly_fixed(fixtures):
    # neighborhoods plus the block-1 cross cells fixed; blocks 2 and 3 stay open between them
    g = read_graph(fixtures / "witness_4_3_3_29.txt")
    p = ColoringProblem((4, 3, 3), 29)
    partial = realize(p, (12, 8, 8), [lib[0] for lib in neighborhood_libraries(g)])
    cells = [list(row) for row in partial.cells]
    for a in range(1, 13):
        for b in range(13, 29):
            cells[a][b] = cells[b][a] = g.cells[a][b]
    partial = PartialColoredGraph(29, 3, tuple(map(tuple, cells)))
    assert sum(1 for i in range(29) for j in range(i + 1, 29) if partial.cells[i][j] is None) == 64
    status, w = complete_instance(p, partial)
    assert status is Status.SAT and is_ramsey_coloring(w, p.r)
    for c in (1, 2, 3):
        assert neighbor_subgraph(w, 1, c) == neighbor_subgraph(g, 1, c)


def test_embedding_soundness_16():
    p = ColoringProblem((3, 3, 3), 16)
    libs = [subcoloring_library(p, c, 5, symmetry="problem") for c in (1, 2, 3)]
    report = refute_degree_triple(p, (5, 5, 5), libs)
    w = report.witness
    assert report.verdict == "sat" and is_ramsey_coloring(w, p.r)
    for c in (1, 2, 3):
        assert weakly_isomorphic(neighbor_subgraph(w, 1, c), libs[c - 1][0])[0]


@pytest.mark.extended
def test_witness_embedding_is_sat(fixtures):
    g = read_graph(fixtures / "witness_4_3_3_29.txt")
    p = ColoringProblem((4, 3, 3), 29)
    libs = neighborhood_libraries(g)
    report = refute_degree_triple(p, (12, 8, 8), libs, backend=FAST or EMBEDDED)
    assert report.verdict == "sat" and report.instances == 1
    w = report.witness
    assert is_ramsey_coloring(w, p.r)
    for c in (1, 2, 3):
        assert weakly_isomorphic(neighbor_subgraph(w, 1, c), libs[c - 1][0])[0]


@pytest.mark.extended
def test_embedding_12_8_8_fixture(fixtures):
    partial = read_graph(fixtures / "embed_12_8_8.txt")
    assert isinstance(partial, PartialColoredGraph)
    status, g = complete_instance(ColoringProblem((4, 3, 3), 29), partial, FAST or EMBEDDED)
    assert status is Status.SAT and is_ramsey_coloring(g, (4, 3, 3))


def test_small_refutations(tmp_path):
    # a degree split that forces a monochromatic triangle in the neighborhood
    p5 = ColoringProblem((3, 3), 5)
    libs = [subcoloring_library(p5, 1, 3), subcoloring_library(p5, 2, 1)]
    assert libs[0] == []
    assert refute_degree_triple(p5, (3, 1), libs).verdict == "all-unsat"


def test_all_unsat_campaign(tmp_path):
    # (3,3;6) has no solution, so every embedding fails
    p = ColoringProblem((3, 3), 6)
    libs = [subcoloring_library(p, 1, 3, symmetry="problem"), subcoloring_library(p, 2, 2, symmetry="problem")]
    first = refute_degree_triple(p, (3, 2), libs, workdir=tmp_path, stop_after=0)
    assert first.verdict == "partial" or first.instances == 0
    report = refute_degree_triple(p, (3, 2), libs, workdir=tmp_path)
    assert report.verdict == "all-unsat" and report.counts["unsat"] == report.instances


def test_refute_instance_file_shape_check(tmp_path, fixtures):
    with pytest.raises(ValueError):
        refute_instance_file(ColoringProblem((4, 3, 3), 29), fixtures / "embed_14_8_7.txt")


def test_unrelabeled_instance_is_inconsistent(fixtures):
    partial = read_graph(fixtures / "embed_14_8_7_unrelabeled.txt")
    # the color-2 block uses color 2 among color-2 neighbors of vertex 1
    block = [partial.cells[a][b] for a in range(15, 23) for b in range(15, 23) if a != b]
    assert 2 in block
    status, _ = complete_instance(P433, partial)
    assert status is Status.UNSAT


@pytest.mark.parametrize("r,n,sat", [((3, 3), 5, True), ((3, 3), 6, False), ((4, 3), 8, True), ((4, 3), 9, False)])
def test_circulant(r, n, sat):
    res = find_circulant_coloring(ColoringProblem(r, n))
    assert (res.status is Status.SAT) == sat
    if sat:
        g = res.graph
        assert all(g.cells[i][j] == g.cells[0][(j - i) % n] for i in range(n) for j in range(n) if i != j)

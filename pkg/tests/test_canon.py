import itertools
import random

import pytest
from hypothesis import given

from ramsey_dm.canon import canonical_form, canonical_labeling, class_count, reduce_mod_weak_iso, weakly_isomorphic
from ramsey_dm.graph import ColoredGraph, apply_perms, is_ramsey_coloring, read_graph

from .oracle import brute_class_key, brute_classes, is_ramsey
from .strategies import colored_graphs, graph_with_perms


@given(colored_graphs(max_n=5))
def test_invariant_under_every_perm_small(g):
    c = canonical_form(g)
    for pi in itertools.permutations(range(1, g.n + 1)):
        for sigma in itertools.permutations(range(1, g.k + 1)):
            assert canonical_form(apply_perms(g, pi, sigma)) == c


@given(graph_with_perms(min_n=6, max_n=12))
def test_invariant_under_random_perm(data):
    g, pi, sigma = data
    assert canonical_form(apply_perms(g, pi, sigma)) == canonical_form(g)


@given(colored_graphs(max_n=9))
def test_labeling_witness_and_idempotence(g):
    c, pi, sigma = canonical_labeling(g)
    assert apply_perms(g, pi, sigma) == c
    assert canonical_form(c) == c


def same_partition(graphs, key_a, key_b) -> bool:
    """Two keying functions induce the same partition of ``graphs``."""
    pairs = {(key_a(g), key_b(g)) for g in graphs}
    return len(pairs) == len({a for a, _ in pairs}) == len({b for _, b in pairs})


@given(colored_graphs(max_n=5, max_k=2))
def test_canonical_form_in_same_class(g):
    c = canonical_form(g)
    assert brute_class_key(c.upper(), c.n, c.k) == brute_class_key(g.upper(), g.n, g.k)


def test_two_16_vertex_colorings(fixtures):
    left = read_graph(fixtures / "r333_16_a.txt")
    middle = read_graph(fixtures / "r333_16_b.txt")
    assert is_ramsey_coloring(left, (3, 3, 3)) and is_ramsey_coloring(middle, (3, 3, 3))
    assert canonical_form(left) != canonical_form(middle)
    assert not weakly_isomorphic(left, middle)[0]
    rng = random.Random(7)
    for _ in range(100):
        pi = list(range(1, 17))
        rng.shuffle(pi)
        sigma = list(range(1, 4))
        rng.shuffle(sigma)
        h = apply_perms(left, pi, sigma)
        assert canonical_form(h) == canonical_form(left)
        ok, (p2, s2) = weakly_isomorphic(left, h)
        assert ok and apply_perms(left, p2, s2) == h


def test_weak_iso_shape_mismatch():
    assert weakly_isomorphic(ColoredGraph.monochrome(3, 2), ColoredGraph.monochrome(4, 2)) == (False, None)
    assert weakly_isomorphic(ColoredGraph.monochrome(3, 2), ColoredGraph.monochrome(3, 3)) == (False, None)


def test_monochrome_color_swap():
    ok, (pi, sigma) = weakly_isomorphic(ColoredGraph.monochrome(3, 2, 1), ColoredGraph.monochrome(3, 2, 2))
    assert ok and sigma == (2, 1)


@pytest.mark.parametrize("n,k,count", [(3, 2, 2), (4, 2, 6), (5, 2, 18), (4, 3, None)])
def test_class_counts_match_oracle(n, k, count):
    from ramsey_dm.graph import enumerate_all_colorings

    graphs = list(enumerate_all_colorings(n, k))
    assert same_partition(graphs, canonical_form, lambda g: brute_class_key(g.upper(), n, k))
    assert class_count(graphs) == len(brute_classes(n, k, lambda u: True))
    if count is not None:
        assert class_count(graphs) == count


def test_ramsey_33_5_single_class():
    from ramsey_dm.graph import enumerate_all_colorings

    sols = [g for g in enumerate_all_colorings(5, 2) if is_ramsey_coloring(g, (3, 3))]
    assert len(sols) == 12
    assert len(reduce_mod_weak_iso(sols)) == 1
    assert len(brute_classes(5, 2, lambda u: is_ramsey(u, 5, (3, 3)))) == 1


def test_restricted_color_group():
    # with only the identity, swapping colors is not allowed
    a, b = ColoredGraph.monochrome(3, 2, 1), ColoredGraph.monochrome(3, 2, 2)
    ident = [(1, 2)]
    assert canonical_form(a, ident) != canonical_form(b, ident)
    assert canonical_form(a) == canonical_form(b)
    with pytest.raises(ValueError):
        canonical_form(a, [(2, 1)])


def test_reduce_rejects_mixed_shapes():
    with pytest.raises(ValueError):
        reduce_mod_weak_iso([ColoredGraph.monochrome(3, 2), ColoredGraph.monochrome(4, 2)])


def test_reduce_parallel_matches_serial():
    from ramsey_dm.graph import enumerate_all_colorings

    graphs = list(enumerate_all_colorings(5, 2))[:200]
    assert reduce_mod_weak_iso(graphs, workers=2) == reduce_mod_weak_iso(graphs)


def test_class_representatives_respect_problem_colors():
    from ramsey_dm.canon import class_representatives
    from ramsey_dm.graph import enumerate_all_colorings

    sols = [g for g in enumerate_all_colorings(5, 2) if is_ramsey_coloring(g, (4, 3))]
    ident = [(1, 2)]
    reps = class_representatives(sols, rep_sigmas=ident)
    assert len(reps) == class_count(sols)
    assert all(is_ramsey_coloring(g, (4, 3)) for g in reps)
    # representatives are deterministic regardless of input order
    assert class_representatives(list(reversed(sols)), rep_sigmas=ident) == reps

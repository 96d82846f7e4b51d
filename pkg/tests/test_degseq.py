import itertools

import pytest
from hypothesis import given, strategies as st

from ramsey_dm.degseq import (
    columns_graphical,
    dm_equivalent,
    enum_degree_matrices,
    enum_degree_sequences,
    format_matrices,
    format_sequences,
    is_graphical,
    lex_canonical_dm,
    parse_matrices,
    parse_sequences,
    read_matrices,
    write_matrices,
)
from ramsey_dm.graph import degree_matrix, enumerate_all_colorings

from .oracle import realizable_sequences


def test_is_graphical_examples():
    assert is_graphical((2, 2, 2))
    assert not is_graphical((3, 3, 1, 1))
    assert is_graphical(())
    assert is_graphical((0,))
    assert not is_graphical((1,))
    assert not is_graphical((3, 1, 1))
    with pytest.raises(ValueError):
        is_graphical((1, 2, 1))


@pytest.mark.parametrize("n", range(1, 6))
def test_is_graphical_matches_realizability(n):
    real = realizable_sequences(n)
    for s in itertools.combinations_with_replacement(range(n, -1, -1), n):
        assert is_graphical(s) == (s in real), s


@pytest.mark.parametrize("n,lo,hi", [(3, 0, 2), (4, 1, 3), (5, 0, 4), (6, 2, 4), (6, 0, 5)])
def test_enum_sequences_matches_oracle(n, lo, hi):
    expected = sorted((s for s in realizable_sequences(n) if all(lo <= x <= hi for x in s)), reverse=True)
    assert enum_degree_sequences(n, lo, hi) == expected


def test_enum_sequences_examples():
    assert enum_degree_sequences(3, 0, 2) == [(2, 2, 2), (2, 1, 1), (1, 1, 0), (0, 0, 0)]
    assert len(enum_degree_sequences(13, 2, 5)) == 280
    for bad in [(2, 5, 1), (3, -1, 2), (3, 0, 3)]:
        with pytest.raises(ValueError):
            enum_degree_sequences(*bad)


matrices = st.integers(1, 5).flatmap(
    lambda k: st.lists(st.lists(st.integers(0, 6), min_size=k, max_size=k).map(tuple), min_size=1, max_size=6)
)


@given(matrices, st.randoms())
def test_lex_canonical_invariant(m, rnd):
    rows = list(m)
    rnd.shuffle(rows)
    perm = list(range(len(m[0])))
    rnd.shuffle(perm)
    shuffled = [tuple(r[p] for p in perm) for r in rows]
    c = lex_canonical_dm(m)
    assert lex_canonical_dm(shuffled) == c
    assert lex_canonical_dm(c) == c
    assert dm_equivalent(m, shuffled)
    # same multiset of entries, rows sorted non-increasing
    assert sorted(x for r in c for x in r) == sorted(x for r in m for x in r)
    assert list(c) == sorted(c, reverse=True)


def test_dm_equivalent_examples():
    assert dm_equivalent([(1, 2), (2, 1)], [(2, 1), (1, 2)])
    assert not dm_equivalent([(2, 0), (0, 2)], [(1, 1), (1, 1)])
    assert not dm_equivalent([(1, 1)], [(1, 1), (1, 1)])
    assert lex_canonical_dm(((5, 5, 5),) * 16) == ((5, 5, 5),) * 16


def _brute_canonical_matrices(n: int, k: int) -> set:
    rows = [t for t in itertools.product(range(n), repeat=k) if sum(t) == n - 1]
    out = set()
    for m in itertools.product(rows, repeat=n):
        if columns_graphical(m):
            out.add(lex_canonical_dm(m))
    return out


@pytest.mark.parametrize("n,k", [(3, 2), (4, 2), (5, 2), (4, 3)])
def test_enum_matrices_matches_brute_force(n, k):
    seqs = enum_degree_sequences(n, 0, n - 1)
    got = enum_degree_matrices(n, k, n - 1, seqs)
    assert set(got) == _brute_canonical_matrices(n, k)
    assert got == sorted(got, reverse=True)
    # every coloring's matrix is covered
    assert {lex_canonical_dm(degree_matrix(g)) for g in enumerate_all_colorings(n, k)} <= set(got)


def test_enum_matrices_respects_bounds():
    got = enum_degree_matrices(5, 2, 4, enum_degree_sequences(5, 1, 3), 1, 3)
    assert got and all(1 <= x <= 3 for m in got for r in m for x in r)
    with pytest.raises(ValueError):
        enum_degree_matrices(3, 2, 2, [(1, 1)])


def test_sequence_and_matrix_io(tmp_path):
    seqs = [(2, 2, 2), (1, 1, 0)]
    assert parse_sequences("# c\n" + format_sequences(seqs)) == seqs
    mats = [((2, 0), (1, 1), (1, 1)), ((1, 1), (1, 1), (0, 2))]
    write_matrices(mats, tmp_path / "m.txt")
    assert read_matrices(tmp_path / "m.txt") == mats
    assert parse_matrices(format_matrices(mats)) == mats
    with pytest.raises(ValueError):
        parse_matrices("2 2\n1 0\n")
    with pytest.raises(ValueError):
        parse_sequences("1 x\n")

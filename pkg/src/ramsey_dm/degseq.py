"""Degree sequences and degree matrices.

Sequences are tuples sorted non-increasing. A degree matrix is a tuple of
``n`` rows, one entry per color. :func:`lex_canonical_dm` picks a single
representative under row and column permutations.
"""

from __future__ import annotations

import itertools
from pathlib import Path
from typing import Iterable, Iterator, Sequence

DegreeSequence = tuple[int, ...]
DegreeMatrix = tuple[tuple[int, ...], ...]


def _check_sorted(s: Sequence[int]) -> None:
    if any(s[i] < s[i + 1] for i in range(len(s) - 1)):
        raise ValueError(f"degree sequence must be non-increasing: {tuple(s)}")


def _eg_holds(s: Sequence[int]) -> bool:
    """Erdős–Gallai for a sorted sequence, without the sortedness check."""
    n = len(s)
    if sum(s) % 2:
        return False
    if n and (s[0] > n - 1 or s[-1] < 0):
        return False
    lhs = 0
    for k in range(1, n + 1):
        lhs += s[k - 1]
        rhs = k * (k - 1) + sum(min(d, k) for d in s[k:])
        if lhs > rhs:
            return False
    return True


def is_graphical(s: Sequence[int]) -> bool:
    """True iff some simple graph has degree sequence ``s`` (which must be non-increasing)."""
    _check_sorted(s)
    return _eg_holds(s)


def enum_degree_sequences(n: int, lo: int, hi: int) -> list[DegreeSequence]:
    """All graphical non-increasing length-``n`` sequences over ``[lo, hi]``, lexicographically descending."""
    if not 0 <= lo <= hi or (n >= 1 and hi > n - 1):
        raise ValueError(f"need 0 <= lo <= hi <= n-1, got lo={lo} hi={hi} n={n}")
    out: list[DegreeSequence] = []
    seq = [0] * n
    # prefix[m] = sum of the first m entries
    prefix = [0] * (n + 1)

    def feasible_prefix(m: int) -> bool:
        # the k = m inequality with the most generous possible tail
        d = seq[m - 1]
        return prefix[m] <= m * (m - 1) + (n - m) * min(d, m)

    def rec(m: int, cap: int) -> None:
        if m == n:
            if prefix[n] % 2 == 0 and _eg_holds(seq):
                out.append(tuple(seq))
            return
        for d in range(cap, lo - 1, -1):
            seq[m] = d
            prefix[m + 1] = prefix[m] + d
            if feasible_prefix(m + 1):
                rec(m + 1, d)

    if n == 0:
        return [()]
    rec(0, hi)
    return out


# --- degree matrices ----------------------------------------------------------------


def _as_matrix(m: Iterable[Sequence[int]]) -> DegreeMatrix:
    rows = tuple(tuple(int(x) for x in r) for r in m)
    if rows and len({len(r) for r in rows}) != 1:
        raise ValueError("degree matrix rows differ in length")
    return rows


def _doubly_sorted(rows: list[tuple[int, ...]]) -> tuple[tuple[int, ...], ...]:
    """Alternately sort rows and columns (descending) until neither moves."""
    cur = sorted(rows, reverse=True)
    while True:
        cols = sorted(zip(*cur), reverse=True)
        nxt = sorted(zip(*cols), reverse=True)
        if nxt == cur:
            return tuple(cur)
        cur = nxt


def lex_canonical_dm(m: Iterable[Sequence[int]]) -> DegreeMatrix:
    """Canonical representative of ``m`` under row and column permutations.

    Every column order is tried; each is brought to a doubly sorted
    (rows and columns non-increasing) form and the least result wins.
    """
    rows = _as_matrix(m)
    if not rows:
        return rows
    k = len(rows[0])
    best = None
    for perm in itertools.permutations(range(k)):
        cand = _doubly_sorted([tuple(r[p] for p in perm) for r in rows])
        if best is None or cand < best:
            best = cand
    return best


def dm_equivalent(m: Sequence[Sequence[int]], other: Sequence[Sequence[int]]) -> bool:
    a, b = _as_matrix(m), _as_matrix(other)
    if len(a) != len(b) or (a and len(a[0]) != len(b[0])):
        return False
    return lex_canonical_dm(a) == lex_canonical_dm(b)


def columns_graphical(m: Sequence[Sequence[int]]) -> bool:
    return all(_eg_holds(sorted(col, reverse=True)) for col in zip(*m))


def enum_degree_matrices(
    n: int,
    k: int,
    row_total: int,
    left_columns: Iterable[Sequence[int]],
    lo: int = 0,
    hi: int | None = None,
) -> list[DegreeMatrix]:
    """Canonical ``n x k`` degree matrices whose first column is one of ``left_columns``.

    Rows sum to ``row_total``, entries lie in ``[lo, hi]``, every column is
    graphical, and each matrix is its own :func:`lex_canonical_dm`. Because a
    canonical matrix has its rows sorted non-increasing, its first column is
    itself sorted, so searching row-sorted matrices with that first column
    misses nothing. Result is sorted descending.
    """
    hi = row_total if hi is None else hi
    if k < 1:
        raise ValueError("k must be positive")
    found: set[DegreeMatrix] = set()
    for s in left_columns:
        s = tuple(s)
        if len(s) != n:
            raise ValueError(f"left column {s} does not have length {n}")
        _check_sorted(s)
        if not _eg_holds(s) or any(not lo <= x <= hi for x in s):
            continue
        tails: dict[int, list[tuple[int, ...]]] = {}
        for x in set(s):
            rest = row_total - x
            tails[x] = sorted(
                (t for t in itertools.product(range(lo, hi + 1), repeat=k - 1) if sum(t) == rest),
                reverse=True,
            )
        rows: list[tuple[int, ...]] = []

        def rec(i: int) -> None:
            if i == n:
                if columns_graphical(rows):
                    cand = tuple(rows)
                    if lex_canonical_dm(cand) == cand:
                        found.add(cand)
                return
            for t in tails[s[i]]:
                row = (s[i],) + t
                if rows and row > rows[-1]:
                    continue
                rows.append(row)
                rec(i + 1)
                rows.pop()

        rec(0)
    return sorted(found, reverse=True)


# --- files ------------------------------------------------------------------------


def format_sequences(seqs: Iterable[Sequence[int]]) -> str:
    return "".join(" ".join(map(str, s)) + "\n" for s in seqs)


def parse_sequences(text: str) -> list[DegreeSequence]:
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            out.append(tuple(int(x) for x in line.split()))
        except ValueError:
            raise ValueError(f"line {lineno}: not a degree sequence: {line!r}") from None
    return out


def write_sequences(seqs: Iterable[Sequence[int]], path: str | Path) -> None:
    Path(path).write_text(format_sequences(seqs))


def read_sequences(path: str | Path) -> list[DegreeSequence]:
    return parse_sequences(Path(path).read_text())


def format_matrices(mats: Iterable[Sequence[Sequence[int]]]) -> str:
    blocks = []
    for m in mats:
        m = _as_matrix(m)
        lines = [f"{len(m)} {len(m[0]) if m else 0}"] + [" ".join(map(str, r)) for r in m]
        blocks.append("\n".join(lines) + "\n")
    return "\n".join(blocks)


def _blocks(text: str) -> Iterator[tuple[int, list[str]]]:
    block: list[str] = []
    start = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("#"):
            continue
        if not line:
            if block:
                yield start, block
                block = []
            continue
        if not block:
            start = lineno
        block.append(line)
    if block:
        yield start, block


def parse_matrices(text: str) -> list[DegreeMatrix]:
    out = []
    for start, block in _blocks(text):
        try:
            n, k = (int(x) for x in block[0].split())
            rows = tuple(tuple(int(x) for x in line.split()) for line in block[1:])
        except ValueError:
            raise ValueError(f"line {start}: malformed degree matrix") from None
        if len(rows) != n or any(len(r) != k for r in rows):
            raise ValueError(f"line {start}: expected {n} rows of {k} entries")
        out.append(rows)
    return out


def write_matrices(mats: Iterable[Sequence[Sequence[int]]], path: str | Path) -> None:
    Path(path).write_text(format_matrices(mats))


def read_matrices(path: str | Path) -> list[DegreeMatrix]:
    return parse_matrices(Path(path).read_text())

"""Translate a :class:`ConstraintModel` into CNF.

Each edge ``{i, j}`` gets ``k`` one-hot variables with an exactly-one
constraint. Degrees use a sequential counter whose outputs are exact
(``ge[d]`` is true iff at least ``d`` of the inputs are true), so the same
counter serves equality atoms and threshold disjunctions. Row ordering uses a
chain of "equal so far" auxiliaries.
"""

from __future__ import annotations

import itertools

from ..model import (
    CellTie,
    ConstraintModel,
    DegreeEquals,
    DegreeViolation,
    EdgeFixed,
    EdgeInRange,
    LexLeqOmit,
    LexLeqOmitGuarded,
    NotAllEqual,
)
from .formula import CnfFormula, VarMap


class _Builder:
    def __init__(self, n: int, k: int):
        self.n, self.k = n, k
        self.vm = VarMap(n, k)
        self.next_var = 1
        for i, j in itertools.combinations(range(1, n + 1), 2):
            for c in range(1, k + 1):
                self.vm.edge[(i, j, c)] = self.next_var
                self.next_var += 1
        self.vm.aux_first = self.next_var
        self.clauses: list[tuple[int, ...]] = []
        self.seen: set[tuple[int, ...]] = set()
        self.counters: dict[tuple[int, int], list] = {}

    def fresh(self) -> int:
        v = self.next_var
        self.next_var += 1
        return v

    def add(self, *lits: int) -> None:
        clause = tuple(sorted(set(lits), key=lambda x: (abs(x), x)))
        if any(-x in clause for x in clause):
            return
        if clause not in self.seen:
            self.seen.add(clause)
            self.clauses.append(clause)

    def x(self, i: int, j: int, c: int) -> int:
        return self.vm.var(i, j, c)

    # cardinality -------------------------------------------------------------

    def counter(self, v: int, c: int, upto: int) -> list:
        """Literals ``ge[d]`` for ``d = 0..upto``: "color-c degree of v is at least d".

        Entries are ints (literals) or the constants True/False.
        """
        key = (v, c)
        have = self.counters.get(key)
        if have is not None and len(have) > upto:
            return have
        inputs = [self.x(v, u, c) for u in range(1, self.n + 1) if u != v]
        width = min(upto, len(inputs))
        # prev[d]: at least d of the inputs seen so far are true
        prev: list = [True] + [False] * width
        for xi in inputs:
            prev = [True] + [self._or_and(prev[d], prev[d - 1], xi) for d in range(1, width + 1)]
        out = prev + [False] * (upto - width)
        self.counters[key] = out
        return out

    def _or_and(self, a, b, xi: int):
        """Literal (or constant) equivalent to ``a | (b & xi)``."""
        if a is True:
            return True
        if b is False:
            return a
        if a is False and b is True:
            return xi
        s = self.fresh()
        if a is False:
            self.add(-s, b)
            self.add(-s, xi)
            self.add(s, -b, -xi)
        elif b is True:
            self.add(-a, s)
            self.add(-xi, s)
            self.add(-s, a, xi)
        else:
            self.add(-a, s)
            self.add(-b, -xi, s)
            self.add(-s, a, b)
            self.add(-s, a, xi)
        return s

    def degree_equals(self, v: int, c: int, d: int) -> None:
        ge = self.counter(v, c, d + 1)
        self.require(ge[d])
        self.forbid(ge[d + 1])

    def require(self, lit) -> None:
        if lit is True:
            return
        if lit is False:
            raise _Infeasible
        self.add(lit)

    def forbid(self, lit) -> None:
        if lit is False:
            return
        if lit is True:
            raise _Infeasible
        self.add(-lit)

    # row ordering ------------------------------------------------------------

    def lex_leq(self, i: int, j: int) -> None:
        k = self.k
        positions = [p for p in range(1, self.n + 1) if p not in (i, j)]
        eq = None  # None means "constant true"
        for idx, p in enumerate(positions):
            s = [self.x(i, p, c) for c in range(1, k + 1)]
            t = [self.x(j, p, c) for c in range(1, k + 1)]
            guard = () if eq is None else (-eq,)
            for c1 in range(k):
                for c2 in range(c1):
                    self.add(*guard, -s[c1], -t[c2])
            if idx == len(positions) - 1:
                break
            nxt = self.fresh()
            if eq is not None:
                self.add(-nxt, eq)
            for c in range(k):
                self.add(-nxt, -s[c], t[c])
                self.add(-nxt, s[c], -t[c])
                self.add(*guard, -s[c], -t[c], nxt)
            eq = nxt


class _Infeasible(Exception):
    pass


def encode(model: ConstraintModel) -> tuple[CnfFormula, VarMap]:
    """CNF whose models, projected to edge variables, are exactly the model's solutions."""
    n, k = model.n, model.k
    if k < 1:
        raise ValueError("model has no color count; conjoin it with an adjacency model")
    b = _Builder(n, k)
    # one variable group per unordered pair makes symmetry and the zero diagonal structural
    for i, j in itertools.combinations(range(1, n + 1), 2):
        xs = [b.x(i, j, c) for c in range(1, k + 1)]
        b.add(*xs)
        for a, c in itertools.combinations(xs, 2):
            b.add(-a, -c)
    infeasible = False
    try:
        for atom in model.atoms:
            if isinstance(atom, EdgeInRange):
                continue
            if isinstance(atom, NotAllEqual):
                b.add(*(-b.x(i, j, atom.c) for i, j in atom.edges))
            elif isinstance(atom, EdgeFixed):
                b.add(b.x(atom.i, atom.j, atom.c))
            elif isinstance(atom, DegreeEquals):
                b.degree_equals(atom.v, atom.c, atom.d)
            elif isinstance(atom, (LexLeqOmit, LexLeqOmitGuarded)):
                b.lex_leq(atom.i, atom.j)
            elif isinstance(atom, CellTie):
                for c in range(1, k + 1):
                    u, w = b.x(atom.i, atom.j, c), b.x(atom.i2, atom.j2, c)
                    b.add(-u, w)
                    b.add(u, -w)
            elif isinstance(atom, DegreeViolation):
                lits = []
                for v in range(1, n + 1):
                    for c in range(1, k + 1):
                        ge = b.counter(v, c, atom.hi + 1)
                        lits.append(ge[atom.hi + 1])
                        lits.append(True if ge[atom.lo] is False else (False if ge[atom.lo] is True else -ge[atom.lo]))
                if any(x is True for x in lits):
                    continue
                lits = [x for x in lits if x is not False]
                if not lits:
                    raise _Infeasible
                b.add(*lits)
            else:
                raise TypeError(f"unknown atom {atom!r}")
    except _Infeasible:
        infeasible = True
    var_count = b.next_var - 1
    b.vm.aux_last = var_count
    clauses = list(b.clauses)
    if infeasible:
        # an unsatisfiable pair of units keeps the formula well-formed
        first = b.x(1, 2, 1) if n >= 2 else None
        if first is None:
            var_count += 1
            first = var_count
        clauses += [(first,), (-first,)]
    return CnfFormula(var_count, tuple(clauses)), b.vm

"""A complete CDCL SAT solver in pure Python.

Two watched literals per long clause, dedicated implication lists for binary
clauses, first-UIP learning with recursive clause minimization, VSIDS
branching on a lazy heap, phase saving, Luby restarts and LBD-based learnt
clause reduction. The solver is incremental in the one way enumeration needs:
clauses may be added between ``solve`` calls.

Internally literal ``2*v`` is variable ``v`` (0-based) positive and
``2*v + 1`` its negation. The public API speaks DIMACS integers.
"""

from __future__ import annotations

import heapq
import random
import time
from typing import Iterable, Sequence


def _luby(i: int) -> int:
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i = i % size
    return 1 << seq


class CdclSolver:
    """Incremental CDCL solver.

    ``solve`` returns True (SAT), False (UNSAT) or None when the conflict or
    time budget runs out. Ties in branching fall to the lowest variable id, so
    runs are reproducible; a nonzero ``seed`` adds a small, seeded random
    perturbation to the initial variable activities.
    """

    restart_base = 100
    var_decay = 0.95
    first_reduce = 2000
    reduce_inc = 300

    def __init__(self, num_vars: int = 0, seed: int = 0):
        self._rng = random.Random(seed) if seed else None
        self.num_vars = 0
        self.vals: list[int] = []  # per literal: 1 true, -1 false, 0 unassigned
        self.level: list[int] = []
        self.reason: list = []
        self.activity: list[float] = []
        self.polarity: list[int] = []  # saved literal parity (1 means negative)
        self.seen: list[int] = []
        self.watches: list[list[list[int]]] = []
        self.bins: list[list[tuple[int, list[int]]]] = []
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.heap: list[tuple[float, int]] = []
        self.var_inc = 1.0
        self.ok = True
        self.learnts: list[tuple[list[int], int]] = []
        self.num_clauses = 0
        self.conflicts = 0
        self.decisions = 0
        self.propagations = 0
        self.max_learnts = self.first_reduce
        self._model: list[bool] | None = None
        self.ensure_vars(num_vars)

    # --- setup ------------------------------------------------------------

    def ensure_vars(self, n: int) -> None:
        while self.num_vars < n:
            v = self.num_vars
            self.num_vars += 1
            self.vals += [0, 0]
            self.level.append(0)
            self.reason.append(None)
            act = self._rng.random() * 1e-3 if self._rng else 0.0
            self.activity.append(act)
            self.polarity.append(1)
            self.seen.append(0)
            self.watches += [[], []]
            self.bins += [[], []]
            heapq.heappush(self.heap, (-act, v))

    @staticmethod
    def _lit(d: int) -> int:
        return 2 * (-d - 1) + 1 if d < 0 else 2 * (d - 1)

    def add_clause(self, clause: Iterable[int]) -> bool:
        """Add a DIMACS clause. Returns False once the formula is known UNSAT."""
        if not self.ok:
            return False
        lits = sorted({self._lit(d) for d in clause})
        if lits:
            self.ensure_vars((max(lits) >> 1) + 1)
        if self.trail_lim:
            self._cancel_until(0)
        vals = self.vals
        out = []
        for lit in lits:
            if lit ^ 1 in lits or vals[lit] == 1:
                return True
            if vals[lit] == 0:
                out.append(lit)
        if not out:
            self.ok = False
            return False
        self.num_clauses += 1
        if len(out) == 1:
            self._assign(out[0], None)
            if self._propagate() is not None:
                self.ok = False
            return self.ok
        self._attach(out)
        return True

    def add_clauses(self, clauses: Iterable[Sequence[int]]) -> bool:
        for c in clauses:
            if not self.add_clause(c):
                return False
        return True

    def _attach(self, c: list[int]) -> None:
        if len(c) == 2:
            self.bins[c[0]].append((c[1], c))
            self.bins[c[1]].append((c[0], c))
        else:
            self.watches[c[0]].append(c)
            self.watches[c[1]].append(c)

    # --- core -------------------------------------------------------------

    def _assign(self, lit: int, reason) -> None:
        self.vals[lit] = 1
        self.vals[lit ^ 1] = -1
        v = lit >> 1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _propagate(self):
        vals, trail, watches, bins = self.vals, self.trail, self.watches, self.bins
        level, reason = self.level, self.reason
        dl = len(self.trail_lim)
        qhead = self.qhead
        confl = None
        while qhead < len(trail):
            p = trail[qhead]
            qhead += 1
            fl = p ^ 1
            for other, c in bins[fl]:
                val = vals[other]
                if val == 1:
                    continue
                if val == -1:
                    confl = c
                    break
                vals[other] = 1
                vals[other ^ 1] = -1
                level[other >> 1] = dl
                reason[other >> 1] = c
                trail.append(other)
            if confl is not None:
                break
            ws = watches[fl]
            i = j = 0
            end = len(ws)
            while i < end:
                c = ws[i]
                i += 1
                if c[0] == fl:
                    c[0] = c[1]
                    c[1] = fl
                first = c[0]
                if vals[first] == 1:
                    ws[j] = c
                    j += 1
                    continue
                for idx in range(2, len(c)):
                    lk = c[idx]
                    if vals[lk] != -1:
                        c[1] = lk
                        c[idx] = fl
                        watches[lk].append(c)
                        break
                else:
                    ws[j] = c
                    j += 1
                    if vals[first] == -1:
                        confl = c
                        while i < end:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        break
                    vals[first] = 1
                    vals[first ^ 1] = -1
                    level[first >> 1] = dl
                    reason[first >> 1] = c
                    trail.append(first)
            del ws[j:]
            if confl is not None:
                break
        self.propagations += qhead - self.qhead
        self.qhead = qhead if confl is None else len(trail)
        return confl

    def _bump(self, v: int) -> None:
        act = self.activity
        act[v] += self.var_inc
        if act[v] > 1e100:
            for u in range(self.num_vars):
                act[u] *= 1e-100
            self.var_inc *= 1e-100
            self.heap = [(-act[u], u) for u in range(self.num_vars) if self.vals[2 * u] == 0]
            heapq.heapify(self.heap)
        elif self.vals[2 * v] == 0:
            heapq.heappush(self.heap, (-act[v], v))

    def _analyze(self, confl: list[int]) -> tuple[list[int], int]:
        seen, level, reason, trail = self.seen, self.level, self.reason, self.trail
        dl = len(self.trail_lim)
        learnt = [0]
        path = 0
        p = -1
        idx = len(trail) - 1
        c = confl
        while True:
            for q in c:
                if q == p:
                    continue
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    self._bump(v)
                    seen[v] = 1
                    if level[v] >= dl:
                        path += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            c = reason[p >> 1]
            seen[p >> 1] = 0
            path -= 1
            if path == 0:
                break
        learnt[0] = p ^ 1

        # recursive minimization
        to_clear = [q >> 1 for q in learnt[1:]]
        levels = {level[q >> 1] for q in learnt[1:]}
        kept = [learnt[0]]
        for q in learnt[1:]:
            if reason[q >> 1] is None or not self._redundant(q, levels, to_clear):
                kept.append(q)
        for v in to_clear:
            seen[v] = 0
        learnt = kept

        if len(learnt) == 1:
            bt = 0
        else:
            best = 1
            for i in range(2, len(learnt)):
                if level[learnt[i] >> 1] > level[learnt[best] >> 1]:
                    best = i
            learnt[1], learnt[best] = learnt[best], learnt[1]
            bt = level[learnt[1] >> 1]
        self.var_inc /= self.var_decay
        return learnt, bt

    def _redundant(self, q: int, levels: set, to_clear: list[int]) -> bool:
        """True if ``q`` is implied by the other learnt literals (MiniSat's litRedundant)."""
        seen, level, reason = self.seen, self.level, self.reason
        stack = [q]
        top = len(to_clear)
        while stack:
            w = stack.pop() >> 1
            for r in reason[w]:
                v = r >> 1
                if v == w or seen[v] or level[v] == 0:
                    continue
                if reason[v] is not None and level[v] in levels:
                    seen[v] = 1
                    stack.append(r)
                    to_clear.append(v)
                else:
                    for u in to_clear[top:]:
                        seen[u] = 0
                    del to_clear[top:]
                    return False
        return True

    def _cancel_until(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        vals, trail, polarity, act, heap = self.vals, self.trail, self.polarity, self.activity, self.heap
        stop = self.trail_lim[lvl]
        for idx in range(len(trail) - 1, stop - 1, -1):
            lit = trail[idx]
            v = lit >> 1
            vals[lit] = 0
            vals[lit ^ 1] = 0
            self.reason[v] = None
            polarity[v] = lit & 1
            heapq.heappush(heap, (-act[v], v))
        del trail[stop:]
        del self.trail_lim[lvl:]
        self.qhead = len(trail)
        if len(heap) > 8 * self.num_vars + 1000:
            self.heap = sorted({(-act[v], v) for _, v in heap if vals[2 * v] == 0})

    def _pick_branch(self) -> int:
        heap, vals, act = self.heap, self.vals, self.activity
        while heap:
            negact, v = heapq.heappop(heap)
            if vals[2 * v] == 0 and -negact == act[v]:
                return 2 * v + self.polarity[v]
        for v in range(self.num_vars):
            if vals[2 * v] == 0:
                return 2 * v + self.polarity[v]
        return -1

    def _lbd(self, lits: list[int]) -> int:
        level = self.level
        return len({level[q >> 1] for q in lits})

    def _reduce_db(self) -> None:
        reason, vals = self.reason, self.vals
        keep, drop = [], []
        for entry in self.learnts:
            c, lbd = entry
            locked = reason[c[0] >> 1] is c and vals[c[0]] == 1
            (keep if locked or lbd <= 2 else drop).append(entry)
        drop.sort(key=lambda e: (e[1], len(e[0])))
        half = len(drop) // 2
        keep.extend(drop[:half])
        removed = {id(e[0]) for e in drop[half:]}
        if removed:
            self.watches = [[c for c in ws if id(c) not in removed] for ws in self.watches]
        self.learnts = keep
        self.max_learnts += self.reduce_inc

    # --- search -----------------------------------------------------------

    def solve(self, conflict_budget: int | None = None, time_budget: float | None = None) -> bool | None:
        self._model = None
        if not self.ok:
            return False
        self._cancel_until(0)
        if self._propagate() is not None:
            self.ok = False
            return False
        deadline = None if time_budget is None else time.monotonic() + time_budget
        start_conflicts = self.conflicts
        restarts = 0
        while True:
            limit = _luby(restarts) * self.restart_base
            status = self._search(limit, start_conflicts, conflict_budget, deadline)
            if status is not None:
                return status
            if conflict_budget is not None and self.conflicts - start_conflicts >= conflict_budget:
                self._cancel_until(0)
                return None
            if deadline is not None and time.monotonic() >= deadline:
                self._cancel_until(0)
                return None
            restarts += 1

    def _search(self, limit: int, start_conflicts: int, conflict_budget, deadline) -> bool | None:
        local = 0
        while True:
            confl = self._propagate()
            if confl is not None:
                self.conflicts += 1
                local += 1
                if not self.trail_lim:
                    self.ok = False
                    return False
                learnt, bt = self._analyze(confl)
                self._cancel_until(bt)
                if len(learnt) == 1:
                    self._assign(learnt[0], None)
                else:
                    lbd = self._lbd(learnt)
                    self._attach(learnt)
                    if len(learnt) > 2:
                        self.learnts.append((learnt, lbd))
                    self._assign(learnt[0], learnt)
                if (self.conflicts & 255) == 0 and deadline is not None and time.monotonic() >= deadline:
                    return None
                continue
            if local >= limit:
                self._cancel_until(0)
                return None
            if conflict_budget is not None and self.conflicts - start_conflicts >= conflict_budget:
                return None
            if len(self.learnts) - len(self.trail) >= self.max_learnts:
                self._reduce_db()
            lit = self._pick_branch()
            if lit < 0:
                self._model = [self.vals[2 * v] == 1 for v in range(self.num_vars)]
                return True
            self.decisions += 1
            self.trail_lim.append(len(self.trail))
            self._assign(lit, None)

    def model(self) -> list[bool]:
        """Values of variables ``1..num_vars`` from the last SAT answer."""
        if self._model is None:
            raise RuntimeError("no model available")
        return list(self._model)

    def stats(self) -> dict[str, int]:
        return {
            "conflicts": self.conflicts,
            "decisions": self.decisions,
            "propagations": self.propagations,
            "learnts": len(self.learnts),
        }

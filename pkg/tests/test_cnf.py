import io
import itertools
import sys

import pytest
from hypothesis import given, strategies as st

from ramsey_dm.cnf import (
    EMBEDDED,
    Backend,
    BackendError,
    Budget,
    CdclSolver,
    CnfFormula,
    DimacsError,
    Status,
    VarMap,
    all_solutions,
    decode,
    encode,
    format_dimacs,
    parse_dimacs,
    parse_solver_output,
    read_dimacs,
    solve,
    write_dimacs,
)
from ramsey_dm.graph import BudgetExceeded, ColoredGraph, is_ramsey_coloring
from ramsey_dm.model import (
    CellTie,
    ColoringProblem,
    ConstraintModel,
    DegreeEquals,
    DegreeViolation,
    EdgeFixed,
    LexLeqOmit,
    LexLeqOmitGuarded,
    NotAllEqual,
    adjacency_model,
    ramsey_model,
    sb_lex,
)

from .conftest import pysat_available
from .oracle import count_models, model_solutions

SHIM = f"{sys.executable} -m ramsey_dm.cnf.dimacs_solver"


@st.composite
def cnfs(draw, max_vars=8, max_clauses=30):
    nv = draw(st.integers(1, max_vars))
    lits = st.integers(1, nv).flatmap(lambda v: st.sampled_from([v, -v]))
    clause = st.lists(lits, min_size=1, max_size=4).filter(lambda c: not any(-x in c for x in c)).map(
        lambda c: tuple(dict.fromkeys(c))
    )
    return CnfFormula(nv, tuple(draw(st.lists(clause, max_size=max_clauses))))


# --- DIMACS -------------------------------------------------------------------


@given(cnfs())
def test_dimacs_roundtrip(f):
    assert parse_dimacs(format_dimacs(f, comments=["hello"])) == f


def test_dimacs_io(tmp_path):
    f = CnfFormula(3, ((1, -2), (3,)))
    write_dimacs(f, tmp_path / "a.cnf")
    assert read_dimacs(tmp_path / "a.cnf") == f
    buf = io.StringIO()
    write_dimacs(f, buf)
    assert read_dimacs(io.StringIO(buf.getvalue())) == f
    assert parse_dimacs("c x\np cnf 2 1\n1\n-2 0\n") == CnfFormula(2, ((1, -2),))


@pytest.mark.parametrize(
    "text",
    [
        "1 0\n",
        "p cnf 2 1\n1 3 0\n",
        "p cnf 2 2\n1 0\n",
        "p cnf 2 1\n1 2\n",
        "p cnf x 1\n1 0\n",
        "p cnf 2 1\np cnf 2 1\n1 0\n",
        "p cnf 2 1\n1 a 0\n",
        "p cnf 2 1\n0\n",
        "p cnf 2 1\n1 -1 0\n",
    ],
)
def test_dimacs_errors(text):
    with pytest.raises(DimacsError):
        parse_dimacs(text)


def test_dimacs_error_line_number():
    with pytest.raises(DimacsError) as info:
        parse_dimacs("p cnf 2 1\n\n1 5 0\n")
    assert info.value.line == 3


def test_formula_validation():
    with pytest.raises(ValueError):
        CnfFormula(2, ((),))
    with pytest.raises(ValueError):
        CnfFormula(2, ((3,),))


# --- solver -------------------------------------------------------------------


@given(cnfs())
def test_cdcl_matches_brute_force(f):
    out = solve(f)
    expected = count_models(f.var_count, f.clauses) > 0
    assert out.sat == expected
    if out.sat:
        assert f.satisfied_by(out.model)


@given(cnfs(max_vars=7, max_clauses=20))
def test_enumeration_counts_match_brute_force(f):
    proj = list(range(1, f.var_count + 1, 2))
    sols = list(all_solutions(f, proj))
    assert len(sols) == len(set(sols)) == count_models(f.var_count, f.clauses, proj)


def test_incremental_solver():
    s = CdclSolver(3)
    s.add_clause([1, 2])
    assert s.solve()
    s.add_clause([-1])
    assert s.solve() and s.model()[1]
    s.add_clause([-2])
    assert s.solve() is False


def test_pigeonhole_unsat():
    # 6 pigeons, 5 holes
    var = lambda p, h: p * 5 + h + 1  # noqa: E731
    clauses = [tuple(var(p, h) for h in range(5)) for p in range(6)]
    clauses += [(-var(p, h), -var(q, h)) for h in range(5) for p, q in itertools.combinations(range(6), 2)]
    assert solve(CnfFormula(30, tuple(clauses))).unsat


def test_budget_exceeded():
    var = lambda p, h: p * 8 + h + 1  # noqa: E731
    clauses = [tuple(var(p, h) for h in range(8)) for p in range(9)]
    clauses += [(-var(p, h), -var(q, h)) for h in range(8) for p, q in itertools.combinations(range(9), 2)]
    f = CnfFormula(72, tuple(clauses))
    assert solve(f, budget=Budget(conflicts=10)).status is Status.BUDGET_EXCEEDED
    with pytest.raises(BudgetExceeded):
        list(all_solutions(f, [1, 2], budget=Budget(conflicts=10)))


def test_seeded_solver_agrees():
    f, vm = encode(ramsey_model(ColoringProblem((3, 3), 5)) & sb_lex(5))
    base = sorted(all_solutions(f, vm.edge_vars()))
    assert sorted(all_solutions(f, vm.edge_vars(), Backend(seed=7))) == base


def test_trivial_formulas():
    assert solve(CnfFormula(0, ())).sat
    assert solve(CnfFormula(1, ((1,), (-1,)))).unsat
    assert list(all_solutions(CnfFormula(2, ((1,),)), [])) == [()]
    with pytest.raises(ValueError):
        list(all_solutions(CnfFormula(2, ()), [3]))


# --- encoding -----------------------------------------------------------------


@st.composite
def small_models(draw):
    n = draw(st.integers(2, 4))
    k = draw(st.integers(1, 3))
    verts = st.integers(1, n)
    pair = st.tuples(verts, verts).filter(lambda t: t[0] != t[1])
    atom = st.one_of(
        st.builds(lambda e, c: NotAllEqual(tuple(sorted(e)), c), st.lists(pair.map(lambda t: tuple(sorted(t))), min_size=1, max_size=3, unique=True), st.integers(1, k)),
        st.builds(lambda e, c: EdgeFixed(*e, c), pair, st.integers(1, k)),
        st.builds(DegreeEquals, verts, st.integers(1, k), st.integers(0, n - 1)),
        st.builds(lambda e: LexLeqOmit(*e), pair),
        st.builds(lambda e: LexLeqOmitGuarded(*e), pair),
        st.builds(lambda a, b: CellTie(*a, *b), pair, pair),
        st.integers(0, n - 1).flatmap(lambda lo: st.integers(lo, n - 1).map(lambda hi: DegreeViolation(lo, hi))),
    )
    atoms = draw(st.lists(atom, max_size=4))
    return adjacency_model(n, k) & ConstraintModel(n, k, tuple(atoms))


@given(small_models())
def test_encoding_is_exact(model):
    f, vm = encode(model)
    got = {decode(sol, vm).upper() for sol in all_solutions(f, vm.edge_vars())}
    assert got == model_solutions(model)


@pytest.mark.parametrize("r,n,raw", [((3, 3), 5, 12), ((3, 3), 6, 0), ((3, 3, 3), 4, None), ((4, 3), 5, None)])
def test_projected_counts_match_oracle(r, n, raw):
    model = ramsey_model(ColoringProblem(r, n))
    f, vm = encode(model)
    sols = list(all_solutions(f, vm.edge_vars()))
    assert len(sols) == len(model_solutions(model))
    if raw is not None:
        assert len(sols) == raw
    assert all(is_ramsey_coloring(decode(s, vm), r) for s in sols)


def test_varmap_layout_and_json():
    f, vm = encode(adjacency_model(4, 3))
    assert vm.edge_vars() == list(range(1, 19))
    assert vm.var(1, 2, 1) == vm.var(2, 1, 1) == 1
    assert VarMap.from_json(vm.to_json()).edge == vm.edge


def test_decode_rejects_bad_assignment():
    f, vm = encode(adjacency_model(3, 2))
    with pytest.raises(AssertionError):
        decode([True] * f.var_count, vm)
    with pytest.raises(ValueError):
        decode([], vm, n=4)


def test_infeasible_degree_atom_yields_unsat():
    model = adjacency_model(3, 1) & ConstraintModel(3, 1, (DegreeEquals(1, 1, 1),))
    f, vm = encode(model)
    assert solve(f).unsat


# --- journals -----------------------------------------------------------------


def test_journal_resume(tmp_path):
    f, vm = encode(ramsey_model(ColoringProblem((3, 3), 5)))
    path = tmp_path / "j.log"
    it = all_solutions(f, vm.edge_vars(), journal=path)
    first = [next(it) for _ in range(5)]
    it.close()
    assert path.read_text().count("\nb ") == 5
    rest = list(all_solutions(f, vm.edge_vars(), journal=path))
    assert rest[:5] == first and len(set(rest)) == 12
    assert path.read_text().endswith("done\n")
    assert list(all_solutions(f, vm.edge_vars(), journal=path)) == rest


def test_journal_torn_tail_and_mismatch(tmp_path):
    f, vm = encode(ramsey_model(ColoringProblem((3, 3), 5)))
    path = tmp_path / "j.log"
    it = all_solutions(f, vm.edge_vars(), journal=path)
    next(it)
    it.close()
    with path.open("a") as fh:
        fh.write("b 1 -2")
    assert len(list(all_solutions(f, vm.edge_vars(), journal=path))) == 12
    other, vm2 = encode(ramsey_model(ColoringProblem((3, 3), 4)))
    with pytest.raises(ValueError):
        list(all_solutions(other, vm2.edge_vars(), journal=path))


# --- backends -----------------------------------------------------------------


def test_parse_solver_output():
    assert parse_solver_output("s UNSATISFIABLE\n", 20, 3).unsat
    out = parse_solver_output("s SATISFIABLE\nv 1 -2\nv 3 0\n", 10, 3)
    assert out.model == (True, False, True)
    assert parse_solver_output("", 20, 3).unsat
    for text, code in [
        ("s UNKNOWN\n", 0),
        ("", 1),
        ("s SATISFIABLE\n", 10),
        ("s SATISFIABLE\nv 1 0\n", 20),
        ("s SATISFIABLE\nv x 0\n", 10),
    ]:
        with pytest.raises(BackendError):
            parse_solver_output(text, code, 3)


def test_model_verification_catches_lies(tmp_path):
    liar = tmp_path / "liar.py"
    liar.write_text("print('s SATISFIABLE'); print('v 1 2 0'); raise SystemExit(10)\n")
    f = CnfFormula(2, ((-1,), (-2,)))
    with pytest.raises(BackendError):
        solve(f, Backend("external", f"{sys.executable} {liar}"))


def test_external_backend_missing_command():
    with pytest.raises(BackendError):
        solve(CnfFormula(1, ((1,),)), Backend("external", "/nonexistent/solver"))
    with pytest.raises(ValueError):
        Backend("external")
    with pytest.raises(ValueError):
        Backend("bogus")


def _backends():
    out = [EMBEDDED, Backend("external", SHIM + " --engine embedded")]
    if pysat_available():
        out.append(Backend("pysat"))
    return out


@pytest.mark.parametrize("backend", _backends(), ids=lambda b: b.name)
def test_backends_agree(backend):
    f, vm = encode(ramsey_model(ColoringProblem((3, 3), 5)) & sb_lex(5))
    base = sorted(all_solutions(f, vm.edge_vars()))
    assert sorted(all_solutions(f, vm.edge_vars(), backend)) == base
    g, _ = encode(ramsey_model(ColoringProblem((3, 3), 6)))
    assert solve(g, backend).unsat

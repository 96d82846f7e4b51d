"""Command-line interface.

Every subcommand ends by printing one machine-readable ``key=value`` line.
Exit status: 0 success, 1 a completion was found where a refutation was
expected, 2 usage error, 3 solver backend failure, 4 partial or inconclusive.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from .cnf import Backend, BackendError, Budget, Status, all_solutions, decode, encode, write_dimacs
from .degseq import enum_degree_sequences, read_matrices, write_sequences
from .graph import (
    BudgetExceeded,
    ColoredGraph,
    PartialColoredGraph,
    degree_matrix,
    format_graph,
    is_ramsey_coloring,
    read_graph,
    read_graphs,
    write_graph,
    write_graphs,
)
from .model import (
    ColoringProblem,
    circulant_model,
    degree_matrix_model,
    fix_partial,
    ramsey_model,
    sb_lex,
    sb_lex_dm,
)
from .pipeline import (
    find_circulant_coloring,
    generate_embeddings,
    refute_degree_triple,
    refute_instance_file,
    run_degree_matrix_pipeline,
    solution_classes,
    subcoloring_library,
    verify_degree_bounds,
)
from .pipeline.manifest import ManifestLocked, default_workers

EXIT_OK, EXIT_FOUND, EXIT_USAGE, EXIT_BACKEND, EXIT_PARTIAL = 0, 1, 2, 3, 4

log = logging.getLogger("ramsey_dm")


class UsageError(Exception):
    pass


def summary(**fields) -> None:
    print(" ".join(f"{k}={v}" for k, v in fields.items()))


def parse_problem(text: str) -> tuple[int, ...]:
    try:
        r = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not r or any(x < 2 for x in r):
        raise argparse.ArgumentTypeError("every clique bound must be at least 2")
    return r


def parse_ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def existing_file(text: str) -> Path:
    path = Path(text)
    if not path.is_file():
        raise argparse.ArgumentTypeError(f"no such file: {text}")
    return path


def backend_of(args) -> Backend:
    if args.backend == "external" and not args.external_cmd:
        raise UsageError("--backend external needs --external-cmd")
    return Backend(args.backend, args.external_cmd, seed=args.seed)


def budget_of(args) -> Budget | None:
    if args.budget is None and args.conflicts is None:
        return None
    return Budget(args.conflicts, args.budget)


def problem_of(args) -> ColoringProblem:
    if args.n < 1:
        raise UsageError("--n must be positive")
    return ColoringProblem(args.problem, args.n)


# --- subcommands --------------------------------------------------------------------


def cmd_degseq(args) -> int:
    if not 0 <= args.min <= args.max or args.max > args.n - 1:
        raise UsageError(f"need 0 <= min <= max <= n-1 (got min={args.min} max={args.max} n={args.n})")
    seqs = enum_degree_sequences(args.n, args.min, args.max)
    if args.out:
        write_sequences(seqs, args.out)
    else:
        for s in seqs:
            print(" ".join(map(str, s)))
    summary(sequences=len(seqs))
    return EXIT_OK


def build_model(args, p: ColoringProblem):
    model = ramsey_model(p)
    if args.sym_break == "lex":
        model = model & sb_lex(p.n)
    elif args.sym_break == "dm":
        if not args.dm_file:
            raise UsageError("--sym-break dm needs --dm-file")
        mats = read_matrices(args.dm_file)
        if len(mats) != 1:
            raise UsageError(f"--dm-file must hold exactly one matrix for this command (found {len(mats)})")
        m = mats[0]
        model = model & degree_matrix_model(m) & sb_lex_dm(m)
    elif args.dm_file:
        model = model & degree_matrix_model(read_matrices(args.dm_file)[0])
    if args.partial_file:
        part = read_graph(args.partial_file)
        if isinstance(part, ColoredGraph):
            part = PartialColoredGraph.from_graph(part)
        model = fix_partial(model, part)
    if args.circulant:
        model = model & circulant_model(p.n)
    return model


def cmd_encode(args) -> int:
    p = problem_of(args)
    model = build_model(args, p)
    f, vm = encode(model)
    comments = [f"problem {p}", f"sym-break {args.sym_break}", f"edge variables 1..{vm.aux_first - 1}"]
    write_dimacs(f, args.out, comments)
    side = Path(str(args.out) + ".varmap.json")
    side.write_text(vm.to_json() + "\n")
    summary(vars=f.var_count, clauses=len(f.clauses), varmap=side)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    p = problem_of(args)
    backend, budget = backend_of(args), budget_of(args)
    if args.sym_break == "dm":
        if not args.dm_file:
            raise UsageError("--sym-break dm needs --dm-file")
        mats = read_matrices(args.dm_file)
        models = [ramsey_model(p) & degree_matrix_model(m) & sb_lex_dm(m) for m in mats]
    else:
        models = [build_model(args, p)]
    out_dir = Path(args.out_dir) if args.out_dir else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    graphs: list[ColoredGraph] = []
    for idx, model in enumerate(models):
        f, vm = encode(model)
        journal = out_dir / f"journal-{idx}.log" if out_dir else None
        try:
            for sol in all_solutions(f, vm.edge_vars(), backend, journal=journal, budget=budget):
                g = decode(sol, vm)
                if not is_ramsey_coloring(g, p.r):
                    raise AssertionError("decoded solution is not a valid coloring")
                graphs.append(g)
        except BudgetExceeded:
            summary(raw=len(graphs), partial=1)
            return EXIT_PARTIAL
    fields = {"raw": len(graphs)}
    if out_dir:
        write_graphs(graphs, out_dir / "solutions.txt")
    if args.reduce:
        classes = solution_classes(p, graphs, workers=args.workers)
        if out_dir:
            write_graphs(classes, out_dir / "classes.txt")
        fields["classes"] = len(classes)
    summary(**fields)
    return EXIT_OK


def cmd_pipeline(args) -> int:
    p = problem_of(args)
    if not 0 <= args.min <= args.max <= p.n - 1:
        raise UsageError("need 0 <= min <= max <= n-1")
    out = Path(args.out_dir)
    if out.exists() and any(out.glob("*.jsonl")) and not args.resume:
        raise UsageError(f"{out} holds an earlier run; pass --resume to continue it")
    backend, budget = backend_of(args), budget_of(args)

    def progress(step, value):
        if step != "job":
            print(f"{step}={value}", file=sys.stderr)

    res = run_degree_matrix_pipeline(
        p, args.min, args.max, backend, budget, workdir=out, workers=args.workers, progress=progress,
        stop_after=args.max_jobs,
    )
    (out / "summary.json").write_text(json.dumps(res.summary(), indent=2) + "\n")
    summary(**res.summary())
    return EXIT_PARTIAL if res.partial else EXIT_OK


def cmd_bounds(args) -> int:
    p = problem_of(args)
    verdict = verify_degree_bounds(p, args.min, args.max, backend_of(args), budget_of(args))
    if verdict.witness is not None and args.out:
        write_graph(verdict.witness, args.out)
    summary(bounds=verdict.status)
    return {"verified": EXIT_OK, "refuted": EXIT_FOUND}.get(verdict.status, EXIT_PARTIAL)


def cmd_library(args) -> int:
    p = problem_of(args)
    lib = subcoloring_library(p, args.color, args.d, backend_of(args), symmetry=args.symmetry, budget=budget_of(args))
    if args.out:
        write_graphs(lib, args.out)
    summary(classes=len(lib))
    return EXIT_OK


def cmd_embed(args) -> int:
    p = problem_of(args)
    backend, budget = backend_of(args), budget_of(args)
    if args.instance_file:
        status, g = refute_instance_file(p, args.instance_file, backend, budget)
        if status is Status.SAT:
            if args.out_dir:
                Path(args.out_dir).mkdir(parents=True, exist_ok=True)
                write_graph(g, Path(args.out_dir) / "witness.txt")
            summary(instances=1, unsat=0, sat=1, partial=0)
            return EXIT_FOUND
        if status is Status.UNSAT:
            summary(instances=1, unsat=1, sat=0, partial=0)
            return EXIT_OK
        summary(instances=1, unsat=0, sat=0, partial=1)
        return EXIT_PARTIAL
    if not args.degrees:
        raise UsageError("embed needs --instance-file or --degrees")
    if len(args.degrees) != p.k or sum(args.degrees) != p.n - 1:
        raise UsageError(f"--degrees must list {p.k} values summing to n-1 = {p.n - 1}")
    if args.libraries:
        if len(args.libraries) != p.k:
            raise UsageError(f"--libraries needs {p.k} files")
        libs = [read_graphs(path) for path in args.libraries]
    else:
        libs = [
            subcoloring_library(p, c, d, backend, symmetry=args.library_symmetry) if d else [ColoredGraph(0, p.k, ())]
            for c, d in enumerate(args.degrees, start=1)
        ]
    emb = generate_embeddings(p, args.degrees, libs)
    if args.schedule_only:
        summary(instances=len(emb), libraries="x".join(str(len(lib)) for lib in libs))
        return EXIT_OK
    if not args.out_dir:
        raise UsageError("embed needs --out-dir to keep its manifest")
    rep = refute_degree_triple(
        p, args.degrees, libs, backend, budget, workdir=args.out_dir, workers=args.workers, stop_after=args.max_jobs
    )
    c = rep.counts
    summary(instances=rep.instances, unsat=c["unsat"], sat=c["sat"], partial=rep.instances - c["unsat"] - c["sat"])
    return {"sat": EXIT_FOUND, "all-unsat": EXIT_OK}.get(rep.verdict, EXIT_PARTIAL)


def cmd_circulant(args) -> int:
    p = problem_of(args)
    res = find_circulant_coloring(p, backend_of(args), budget_of(args))
    if res.status is Status.SAT:
        g = res.graph
        rows = sorted({tuple(sorted(r, reverse=True)) for r in degree_matrix(g)})
        if args.out:
            write_graph(g, args.out)
        else:
            print(format_graph(g), end="")
        summary(result="sat", regular=int(len(rows) == 1), degrees=",".join(map(str, rows[0])))
        return EXIT_OK
    if res.status is Status.UNSAT:
        summary(result="unsat")
        return EXIT_OK
    summary(result="unknown", partial=1)
    return EXIT_PARTIAL


# --- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ramsey-dm", description="SAT search for multicolor Ramsey colorings.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    solver = argparse.ArgumentParser(add_help=False)
    solver.add_argument("--backend", choices=("embedded", "external", "pysat"), default="embedded")
    solver.add_argument("--external-cmd", help="solver command; the DIMACS path is appended")
    solver.add_argument("--budget", type=float, help="seconds per solver call")
    solver.add_argument("--conflicts", type=int, help="conflicts per solver call (embedded, pysat)")
    solver.add_argument("--seed", type=int, default=0, help="embedded solver seed (0: no randomness)")
    solver.add_argument("--workers", type=int, default=default_workers())

    prob = argparse.ArgumentParser(add_help=False)
    prob.add_argument("--problem", type=parse_problem, required=True, metavar="R1,R2,...")
    prob.add_argument("--n", type=int, required=True)

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--sym-break", choices=("none", "lex", "dm"), default="none")
    model.add_argument("--dm-file", type=existing_file)
    model.add_argument("--partial-file", type=existing_file)
    model.add_argument("--circulant", action="store_true")

    p = sub.add_parser("degseq", help="enumerate graphical degree sequences")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--min", type=int, required=True)
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_degseq)

    p = sub.add_parser("encode", parents=[prob, model], help="write a DIMACS CNF and its variable map")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_encode)

    p = sub.add_parser("enumerate", parents=[prob, model, solver], help="list all solutions")
    p.add_argument("--out-dir")
    p.add_argument("--reduce", action="store_true", help="also count weak-isomorphism classes")
    p.set_defaults(fn=cmd_enumerate)

    p = sub.add_parser("pipeline", parents=[prob, solver], help="degree-matrix search, resumable")
    p.add_argument("--min", type=int, required=True)
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--resume", action="store_true")
    p.add_argument("--max-jobs", type=int, help="stop after this many solver jobs")
    p.set_defaults(fn=cmd_pipeline)

    p = sub.add_parser("bounds", parents=[prob, solver], help="verify per-color degree bounds")
    p.add_argument("--min", type=int, required=True)
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--out", help="where to write a violating coloring")
    p.set_defaults(fn=cmd_bounds)

    p = sub.add_parser("library", parents=[prob, solver], help="subcolorings of one color neighborhood")
    p.add_argument("--color", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--symmetry", choices=("weak", "problem"), default="weak")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_library)

    p = sub.add_parser("embed", parents=[prob, solver], help="refute a degree tuple by embeddings")
    p.add_argument("--instance-file", type=existing_file)
    p.add_argument("--degrees", type=parse_ints)
    p.add_argument("--libraries", nargs="+", type=existing_file, help="one graph file per color")
    p.add_argument("--library-symmetry", choices=("weak", "problem"), default="problem")
    p.add_argument("--schedule-only", action="store_true", help="only count the instances")
    p.add_argument("--out-dir")
    p.add_argument("--max-jobs", type=int)
    p.set_defaults(fn=cmd_embed)

    p = sub.add_parser("circulant", parents=[prob, solver], help="search for a circulant coloring")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_circulant)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.fn(args)
    except UsageError as exc:
        ap.error(str(exc))  # exits with status 2
    except (ManifestLocked, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BackendError as exc:
        print(f"backend failure: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

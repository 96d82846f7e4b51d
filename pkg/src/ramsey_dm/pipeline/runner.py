"""Manifest-driven execution of the degree-matrix pipeline.

Each step persists its artifact in the work directory; solver calls go
through job manifests, so an interrupted run picks up where it stopped.

Work directory layout::

    sequences.txt             candidate degree sequences
    sequences.jsonl           manifest of sequence feasibility checks
    feasible_sequences.txt
    matrices.txt              canonical candidate degree matrices
    matrices.jsonl            manifest of matrix feasibility checks
    feasible_matrices.txt
    enumerate.jsonl           manifest of per-matrix enumerations
    solutions/<id>.txt        raw solutions per matrix
    journals/<id>.log         blocking-clause journals
    classes.txt               one canonical graph per class
"""

from __future__ import annotations

import logging
import tempfile
from pathlib import Path
from typing import Callable

from ..cnf import EMBEDDED, Backend, Budget
from ..degseq import (
    enum_degree_matrices,
    enum_degree_sequences,
    read_matrices,
    read_sequences,
    write_matrices,
    write_sequences,
)
from ..graph import BudgetExceeded, ColoredGraph, read_graphs, write_graphs
from ..model import ColoringProblem
from .manifest import JobManifest, backend_context, run_jobs
from .stages import (
    PipelineResult,
    _decide,
    color_symmetries,
    color_variants,
    enumerate_per_matrix,
    matrix_model,
    sequence_model,
    solution_classes,
)

log = logging.getLogger(__name__)


def context_backend(ctx: dict) -> tuple[Backend, Budget]:
    return Backend(ctx["backend"], ctx.get("command")), Budget(ctx.get("conflicts"), ctx.get("seconds"))


def execute(ctx: dict, recipe: dict) -> tuple[str, str | None, str | None]:
    """Run one pipeline job; module-level so worker processes can pickle it."""
    backend, budget = context_backend(ctx)
    p = ColoringProblem(tuple(ctx["r"]), ctx["n"])
    kind = recipe["kind"]
    if kind == "sequence":
        status, info = _decide(sequence_model(p, recipe["seq"], recipe["color"]), backend, budget)
        return status, None, info if isinstance(info, str) else None
    if kind == "matrix":
        status, info = _decide(matrix_model(p, recipe["matrix"]), backend, budget)
        return status, None, info if isinstance(info, str) else None
    if kind == "enumerate":
        work = Path(ctx["workdir"])
        journal = work / "journals" / f"{recipe['name']}.log"
        try:
            graphs = enumerate_per_matrix(p, recipe["matrix"], backend, journal=journal, budget=budget)
        except BudgetExceeded:
            return "unknown", None, "budget exceeded"
        if not graphs:
            return "unsat", None, "0"
        out = Path("solutions") / f"{recipe['name']}.txt"
        (work / out).parent.mkdir(parents=True, exist_ok=True)
        write_graphs(graphs, work / out)
        return "sat", str(out), str(len(graphs))
    raise ValueError(f"unknown job kind {kind!r}")


def _step(work: Path, name: str, build: Callable[[], list], write, read) -> list:
    path = work / name
    if path.exists():
        return read(path)
    items = build()
    tmp = path.with_suffix(".tmp")
    write(items, tmp)
    tmp.replace(path)
    return items


def run_degree_matrix_pipeline(
    p: ColoringProblem,
    lo: int,
    hi: int,
    backend: Backend = EMBEDDED,
    budget: Budget | None = None,
    workdir: str | Path | None = None,
    workers: int = 1,
    progress: Callable[[str, object], None] | None = None,
    stop_after: int | None = None,
) -> PipelineResult:
    """Solutions of ``p`` modulo weak isomorphism, split by degree matrix.

    ``lo``/``hi`` must be valid bounds on every color degree (see
    :func:`~ramsey_dm.pipeline.stages.verify_degree_bounds`). Every step is
    persisted in ``workdir``; calling again with the same directory resumes.
    ``stop_after`` caps the number of solver jobs run in this call. Any job
    that ends in error or without a verdict marks the result partial.
    """
    if workdir is None:
        with tempfile.TemporaryDirectory(prefix="ramsey-pipeline-") as tmp:
            return run_degree_matrix_pipeline(p, lo, hi, backend, budget, tmp, workers, progress, stop_after)
    work = Path(workdir)
    work.mkdir(parents=True, exist_ok=True)
    ctx = {"r": list(p.r), "n": p.n, "lo": lo, "hi": hi, "workdir": str(work.resolve())}
    ctx.update(backend_context(backend, budget))
    res = PipelineResult(p)
    budget_left = [stop_after]

    def run(manifest: JobManifest) -> None:
        before = sum(1 for j in manifest.jobs.values() if j.done)
        run_jobs(manifest, execute, workers, progress=(lambda j: progress("job", j)) if progress else None,
                 limit=budget_left[0])
        if budget_left[0] is not None:
            budget_left[0] -= sum(1 for j in manifest.jobs.values() if j.done) - before

    def note(step: str, value) -> None:
        if progress:
            progress(step, value)

    if p.n == 1:
        res.classes = [ColoredGraph(1, p.k, ((0,),))]
        res.raw = 1
        return res

    # step 1: candidate sequences
    res.sequences = _step(work, "sequences.txt", lambda: enum_degree_sequences(p.n, lo, hi), write_sequences, read_sequences)
    note("sequences", len(res.sequences))

    # step 2: feasible sequences, one color per orbit of the color symmetries
    reps = sorted({min(s[c - 1] for s in color_symmetries(p.r)) for c in range(1, p.k + 1)})
    with JobManifest(work / "sequences.jsonl", ctx) as man:
        man.add_many(
            (f"seq-c{c}-{i:06d}", {"kind": "sequence", "seq": list(s), "color": c})
            for c in reps
            for i, s in enumerate(res.sequences)
        )
        run(man)
        feasible = sorted({tuple(j.recipe["seq"]) for j in man.records() if j.status == "sat"}, reverse=True)
        incomplete = not man.complete or any(j.status in ("error", "unknown") for j in man.records())
    if incomplete:
        res.partial = True
        res.notes.append("sequence filtering incomplete")
        return res
    res.feasible_sequences = _step(work, "feasible_sequences.txt", lambda: feasible, write_sequences, read_sequences)
    note("feasible_sequences", len(res.feasible_sequences))

    # step 3: canonical candidate matrices
    res.matrices = _step(
        work,
        "matrices.txt",
        lambda: enum_degree_matrices(p.n, p.k, p.n - 1, res.feasible_sequences, lo, hi),
        write_matrices,
        read_matrices,
    )
    note("matrices", len(res.matrices))

    # step 4: feasible matrices (each column-to-color assignment checked)
    with JobManifest(work / "matrices.jsonl", ctx) as man:
        man.add_many(
            (f"dm-{i:06d}-v{j}", {"kind": "matrix", "matrix": [list(r) for r in v], "index": i})
            for i, m in enumerate(res.matrices)
            for j, v in enumerate(color_variants(m, p.r))
        )
        run(man)
        sat_variants = [j for j in man.records() if j.status == "sat"]
        incomplete = not man.complete or any(j.status in ("error", "unknown") for j in man.records())
        feasible_idx = sorted({j.recipe["index"] for j in sat_variants})
    if incomplete:
        res.partial = True
        res.notes.append("matrix filtering incomplete")
        return res
    res.feasible_matrices = _step(
        work, "feasible_matrices.txt", lambda: [res.matrices[i] for i in feasible_idx], write_matrices, read_matrices
    )
    note("feasible_matrices", len(res.feasible_matrices))

    # step 5: enumerate each satisfiable variant and reduce
    with JobManifest(work / "enumerate.jsonl", ctx) as man:
        man.add_many(
            (f"enum-{j.id[3:]}", {"kind": "enumerate", "matrix": j.recipe["matrix"], "name": j.id}) for j in sat_variants
        )
        run(man)
        records = man.records()
        incomplete = not man.complete or any(j.status in ("error", "unknown") for j in records)
    graphs: list[ColoredGraph] = []
    for j in records:
        if j.status == "sat":
            graphs.extend(read_graphs(work / j.result))
    res.raw = len(graphs)
    if incomplete:
        res.partial = True
        res.notes.append("enumeration incomplete")
    res.classes = solution_classes(p, graphs, workers=workers)
    if not res.partial:
        _step(work, "classes.txt", lambda: res.classes, write_graphs, read_graphs)
    note("classes", len(res.classes))
    return res


"""Append-only job manifests with resumable, optionally parallel execution.

A manifest is a JSON-lines file. The first record holds the shared context
(``{"context": {...}}``); each later record is either a job declaration
(``{"id", "recipe", "status": "pending"}``) or a status update for one. The
last terminal record for an id wins, and terminal records are never
overwritten, so replaying the file always reproduces the same state.
"""

from __future__ import annotations

import fcntl
import json
import logging
import os
import time
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Iterable

log = logging.getLogger(__name__)

TERMINAL = ("sat", "unsat", "error", "unknown")


@dataclass
class JobRecord:
    id: str
    recipe: dict
    status: str = "pending"
    result: str | None = None
    seconds: float = 0.0
    detail: str | None = None

    @property
    def done(self) -> bool:
        return self.status in TERMINAL

    def to_json(self) -> str:
        data = {"id": self.id, "recipe": self.recipe, "status": self.status}
        if self.result is not None:
            data["result"] = self.result
        if self.done:
            data["seconds"] = round(self.seconds, 3)
        if self.detail:
            data["detail"] = self.detail
        return json.dumps(data, sort_keys=True)


class ManifestLocked(RuntimeError):
    pass


class JobManifest:
    """Jobs keyed by id. ``path=None`` keeps everything in memory.

    Only one process may hold a file-backed manifest open at a time.
    """

    def __init__(self, path: str | Path | None, context: dict | None = None):
        self.path = Path(path) if path is not None else None
        self.context = dict(context or {})
        self.jobs: dict[str, JobRecord] = {}
        self._fh = None
        if self.path is None:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        exists = self.path.exists() and self.path.stat().st_size > 0
        self._fh = self.path.open("a+")
        try:
            fcntl.flock(self._fh, fcntl.LOCK_EX | fcntl.LOCK_NB)
        except OSError:
            self._fh.close()
            raise ManifestLocked(f"{self.path} is in use by another process") from None
        if exists:
            self._load(context)
        else:
            self._write({"context": self.context})

    def _load(self, context: dict | None) -> None:
        self._fh.seek(0)
        lines = self._fh.read().splitlines()
        records = []
        torn = False
        for lineno, line in enumerate(lines, start=1):
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError:
                if lineno == len(lines):
                    log.warning("%s: ignoring torn final record", self.path)
                    torn = True
                    break
                raise ValueError(f"{self.path}:{lineno}: corrupt manifest record") from None
        if not records or "context" not in records[0]:
            raise ValueError(f"{self.path}: missing context record")
        stored = records[0]["context"]
        if context is not None and stored != json.loads(json.dumps(context)):
            raise ValueError(f"{self.path} was created for a different run: {stored}")
        self.context = stored
        for rec in records[1:]:
            job = self.jobs.get(rec["id"])
            if job is None:
                self.jobs[rec["id"]] = JobRecord(rec["id"], rec["recipe"])
                job = self.jobs[rec["id"]]
            if job.done:
                continue
            job.status = rec["status"]
            job.result = rec.get("result")
            job.seconds = rec.get("seconds", 0.0)
            job.detail = rec.get("detail")
        if torn:
            self._compact()

    def _compact(self) -> None:
        assert self.path is not None and self._fh is not None
        tmp = self.path.with_suffix(self.path.suffix + ".tmp")
        with tmp.open("w") as fh:
            fh.write(json.dumps({"context": self.context}, sort_keys=True) + "\n")
            for job in self.jobs.values():
                fh.write(job.to_json() + "\n")
        os.replace(tmp, self.path)
        fcntl.flock(self._fh, fcntl.LOCK_UN)
        self._fh.close()
        self._fh = self.path.open("a+")
        fcntl.flock(self._fh, fcntl.LOCK_EX | fcntl.LOCK_NB)

    def _write(self, data: dict | str, sync: bool = True) -> None:
        if self._fh is None:
            return
        line = data if isinstance(data, str) else json.dumps(data, sort_keys=True)
        self._fh.write(line + "\n")
        if sync:
            self._sync()

    def _sync(self) -> None:
        if self._fh is not None:
            self._fh.flush()
            os.fsync(self._fh.fileno())

    def close(self) -> None:
        if self._fh is not None:
            fcntl.flock(self._fh, fcntl.LOCK_UN)
            self._fh.close()
            self._fh = None

    def __enter__(self):
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    # --- jobs ---------------------------------------------------------------

    def add(self, job_id: str, recipe: dict, sync: bool = True) -> None:
        recipe = json.loads(json.dumps(recipe))
        old = self.jobs.get(job_id)
        if old is not None:
            if old.recipe != recipe:
                raise ValueError(f"job {job_id} already declared with a different recipe")
            return
        job = JobRecord(job_id, recipe)
        self.jobs[job_id] = job
        self._write(job.to_json(), sync)

    def add_many(self, items: Iterable[tuple[str, dict]]) -> None:
        for job_id, recipe in items:
            self.add(job_id, recipe, sync=False)
        self._sync()

    def record(self, job_id: str, status: str, result: str | None = None, seconds: float = 0.0, detail=None) -> None:
        if status not in TERMINAL:
            raise ValueError(f"not a terminal status: {status}")
        job = self.jobs[job_id]
        if job.done:
            raise ValueError(f"job {job_id} already finished as {job.status}")
        job.status, job.result, job.seconds, job.detail = status, result, seconds, detail
        self._write(job.to_json())

    def pending(self) -> list[JobRecord]:
        return [self.jobs[i] for i in sorted(self.jobs) if not self.jobs[i].done]

    def records(self) -> list[JobRecord]:
        return [self.jobs[i] for i in sorted(self.jobs)]

    def counts(self) -> dict[str, int]:
        out = {s: 0 for s in ("pending",) + TERMINAL}
        for job in self.jobs.values():
            out[job.status] += 1
        return out

    @property
    def complete(self) -> bool:
        return all(j.done for j in self.jobs.values())


Worker = Callable[[dict, dict], "tuple[str, str | None, str | None]"]


def _timed_call(fn: Worker, context: dict, job_id: str, recipe: dict):
    t = time.monotonic()
    try:
        status, result, detail = fn(context, recipe)
    except Exception as exc:  # recorded, never silently dropped
        status, result, detail = "error", None, f"{type(exc).__name__}: {exc}"
    return job_id, status, result, detail, time.monotonic() - t


def run_jobs(
    manifest: JobManifest,
    fn: Worker,
    workers: int = 1,
    progress: Callable[[JobRecord], None] | None = None,
    limit: int | None = None,
) -> dict[str, int]:
    """Run every pending job through ``fn(context, recipe)`` and record the outcome.

    ``fn`` returns ``(status, result, detail)`` and must be a picklable
    module-level function when ``workers > 1``. Results are written by this
    process only. ``limit`` stops after that many jobs (used to simulate an
    interrupted run).
    """
    todo = manifest.pending()
    if limit is not None:
        todo = todo[:limit]
    if workers <= 1 or len(todo) <= 1:
        for job in todo:
            _, status, result, detail, secs = _timed_call(fn, manifest.context, job.id, job.recipe)
            manifest.record(job.id, status, result, secs, detail)
            if progress:
                progress(manifest.jobs[job.id])
        return manifest.counts()
    with ProcessPoolExecutor(max_workers=workers) as pool:
        it = iter(todo)
        running = set()
        for job in it:
            running.add(pool.submit(_timed_call, fn, manifest.context, job.id, job.recipe))
            if len(running) >= 2 * workers:
                break
        while running:
            done, running = wait(running, return_when=FIRST_COMPLETED)
            for fut in done:
                job_id, status, result, detail, secs = fut.result()
                manifest.record(job_id, status, result, secs, detail)
                if progress:
                    progress(manifest.jobs[job_id])
                nxt = next(it, None)
                if nxt is not None:
                    running.add(pool.submit(_timed_call, fn, manifest.context, nxt.id, nxt.recipe))
    return manifest.counts()


def default_workers() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:  # pragma: no cover - non-Linux
        return os.cpu_count() or 1


def backend_context(backend: Any, budget: Any) -> dict:
    return {
        "backend": backend.name,
        "command": backend.command,
        "conflicts": None if budget is None else budget.conflicts,
        "seconds": None if budget is None else budget.seconds,
    }

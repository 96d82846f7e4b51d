import json

import pytest

from ramsey_dm.pipeline.manifest import JobManifest, ManifestLocked, default_workers, run_jobs


def square(ctx, recipe):
    x = recipe["x"]
    if x < 0:
        raise ValueError("negative")
    return ("sat" if x % 2 else "unsat"), str(x * x * ctx["scale"]), None


def test_in_memory_manifest():
    m = JobManifest(None, {"scale": 1})
    m.add_many((f"j{i}", {"x": i}) for i in range(4))
    m.add("j0", {"x": 0})  # identical redeclaration is a no-op
    with pytest.raises(ValueError):
        m.add("j0", {"x": 5})
    assert [j.id for j in m.pending()] == ["j0", "j1", "j2", "j3"]
    counts = run_jobs(m, square)
    assert counts["sat"] == 2 and counts["unsat"] == 2 and m.complete
    assert m.jobs["j3"].result == "9"


def test_resume_is_identical(tmp_path):
    path = tmp_path / "m.jsonl"
    with JobManifest(path, {"scale": 2}) as m:
        m.add_many((f"j{i}", {"x": i}) for i in range(6))
        run_jobs(m, square, limit=2)
        assert len(m.pending()) == 4
    with JobManifest(path, {"scale": 2}) as m:
        assert len(m.pending()) == 4
        run_jobs(m, square)
        resumed = [(j.id, j.status, j.result) for j in m.records()]
    with JobManifest(tmp_path / "fresh.jsonl", {"scale": 2}) as m:
        m.add_many((f"j{i}", {"x": i}) for i in range(6))
        run_jobs(m, square)
        assert [(j.id, j.status, j.result) for j in m.records()] == resumed
    size = path.stat().st_size
    with JobManifest(path, {"scale": 2}) as m:
        assert run_jobs(m, square)["pending"] == 0
    assert path.stat().st_size == size  # a completed manifest is left untouched


def test_terminal_status_is_final(tmp_path):
    with JobManifest(tmp_path / "m.jsonl", {}) as m:
        m.add("a", {"x": 1})
        m.record("a", "sat")
        with pytest.raises(ValueError):
            m.record("a", "unsat")
        with pytest.raises(ValueError):
            m.record("a", "pending")


def test_errors_are_recorded():
    m = JobManifest(None, {"scale": 1})
    m.add("bad", {"x": -1})
    run_jobs(m, square)
    assert m.jobs["bad"].status == "error" and "negative" in m.jobs["bad"].detail


def test_context_mismatch_and_lock(tmp_path):
    path = tmp_path / "m.jsonl"
    with JobManifest(path, {"scale": 1}) as m:
        with pytest.raises(ManifestLocked):
            JobManifest(path, {"scale": 1})
        m.add("a", {"x": 1})
    with pytest.raises(ValueError):
        JobManifest(path, {"scale": 3})


def test_torn_tail_is_dropped(tmp_path):
    path = tmp_path / "m.jsonl"
    with JobManifest(path, {}) as m:
        m.add("a", {"x": 1})
        m.add("b", {"x": 2})
        m.record("a", "sat", "1")
    with path.open("a") as fh:
        fh.write('{"id": "b", "status": "un')
    with JobManifest(path, {}) as m:
        assert m.jobs["a"].status == "sat" and m.jobs["b"].status == "pending"
    lines = path.read_text().splitlines()
    assert all(json.loads(line) for line in lines)


def test_corrupt_middle_line_is_an_error(tmp_path):
    path = tmp_path / "m.jsonl"
    path.write_text('{"context": {}}\nnot json\n{"id": "a", "recipe": {}, "status": "pending"}\n')
    with pytest.raises(ValueError):
        JobManifest(path, {})


def test_parallel_matches_serial(tmp_path):
    serial = JobManifest(None, {"scale": 3})
    serial.add_many((f"j{i:02d}", {"x": i}) for i in range(12))
    run_jobs(serial, square)
    par = JobManifest(tmp_path / "p.jsonl", {"scale": 3})
    par.add_many((f"j{i:02d}", {"x": i}) for i in range(12))
    run_jobs(par, square, workers=2)
    assert [(j.id, j.status, j.result) for j in par.records()] == [
        (j.id, j.status, j.result) for j in serial.records()
    ]
    par.close()
    assert default_workers() >= 1

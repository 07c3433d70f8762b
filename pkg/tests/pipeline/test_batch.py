import io
import json
import random

import pytest

from conftest import make_random_instance
from ilpsat.maxsat import save_wcnf
from ilpsat.pipeline import PipelineConfig, SolverKind, SolverSpec, discover_instances, run_batch


@pytest.fixture
def instance_dir(tmp_path):
    rng = random.Random(5)
    (tmp_path / "nested").mkdir()
    for name in ("b.wcnf", "a.wcnf", "nested/c.wcnf"):
        save_wcnf(make_random_instance(rng, max_vars=8, max_clauses=12), tmp_path / name)
    (tmp_path / "notes.txt").write_text("not an instance\n")
    return tmp_path


def test_discover_instances(instance_dir):
    """Test recursive discovery in sorted order."""
    names = [p.relative_to(instance_dir).as_posix() for p in discover_instances(instance_dir)]
    assert names == ["a.wcnf", "b.wcnf", "nested/c.wcnf"]


def test_run_batch_sequential(instance_dir):
    """Test one row per instance in input order with a JSON lines sink."""
    paths = discover_instances(instance_dir)
    sink = io.StringIO()
    rows = run_batch(paths, PipelineConfig(record_timings=False), sink=sink)

    assert [r["instance"] for r in rows] == ["a.wcnf", "b.wcnf", "c.wcnf"]
    assert [json.loads(line) for line in sink.getvalue().splitlines()] == rows
    assert all("preprocessingTimeSeconds" not in r for r in rows)


def test_run_batch_parallel_matches_sequential(instance_dir):
    """Test that worker threads produce the same rows."""
    paths = discover_instances(instance_dir)
    config = PipelineConfig(solver=SolverSpec(kind=SolverKind.RC2), record_timings=False)

    sequential = run_batch(paths, config)
    parallel = run_batch(paths, config, workers=3)

    key = lambda r: r["instance"]
    assert sorted(parallel, key=key) == sorted(sequential, key=key)


def test_run_batch_reports_bad_files(tmp_path):
    """Test that a malformed instance becomes an error row."""
    bad = tmp_path / "bad.wcnf"
    bad.write_text("p wcnf 2 1\nx y 0\n")

    rows = run_batch([bad], PipelineConfig())

    assert rows[0]["instance"] == "bad.wcnf"
    assert rows[0]["error"].startswith("MalformedLineError")


def test_run_batch_workers_validated(instance_dir):
    """Test the worker count check."""
    with pytest.raises(ValueError):
        run_batch(discover_instances(instance_dir), PipelineConfig(), workers=0)

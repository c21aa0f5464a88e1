import pytest

from buseg import bench_csv, run_bench
from buseg.bench import METHODS


def test_reps_floor_enforced():
    with pytest.raises(ValueError):
        run_bench([64], reps=9)


def test_bad_sizes_rejected():
    with pytest.raises(ValueError):
        run_bench([], reps=10)
    with pytest.raises(ValueError):
        run_bench([0], reps=10)


def test_record_layout():
    records = run_bench([32, 48], reps=10, seed=3)
    assert len(records) == 2 * len(METHODS)
    assert [(r.method, r.size) for r in records] == [
        (m, s) for s in (32, 48) for m in METHODS
    ]
    for r in records:
        assert r.reps == 10
        assert r.median_ns > 0


def test_csv_schema():
    records = run_bench([32], reps=10, seed=1)
    lines = bench_csv(records).strip().split("\n")
    assert lines[0] == "method,size,reps,median_ns"
    assert len(lines) == 1 + len(METHODS)
    assert lines[1].startswith("sl,32,10,")

import csv
import io

import pytest

from core.errors import ConfigurationError
from core.models import BenchResult
from core.prng import XorShiftGenerator
from services.bench import bench_buffer, format_csv, format_size, format_table, parse_size, run_bench


@pytest.mark.parametrize("text,size", [
    ("280K", 280 * 1024),
    ("1M", 2**20),
    ("4MiB", 4 * 2**20),
    ("16mb", 16 * 2**20),
    ("4096", 4096),
    (" 2G ", 2 * 2**30),
])
def test_parse_size(text, size):
    assert parse_size(text) == size


@pytest.mark.parametrize("text", ["", "abc", "1.5M", "-4K", "4T"])
def test_parse_size_rejects_garbage(text):
    with pytest.raises(ConfigurationError):
        parse_size(text)


def test_format_size():
    assert format_size(280 * 1024) == "280K"
    assert format_size(4 * 2**20) == "4M"
    assert format_size(1000) == "1000"


def test_bench_buffer_is_reproducible():
    buf = bench_buffer(5000, 0x5EED)
    assert buf == bench_buffer(5000, 0x5EED)
    assert buf == XorShiftGenerator(1, 0x5EED).byte_block(5000).tobytes()


def test_throughput_is_consistent_with_duration():
    result = BenchResult(module="x", size=2**20, reps=1, duration_ms=500.0)
    assert result.throughput_mib_s == pytest.approx(2.0)


def test_one_result_per_size_and_selection():
    results = run_bench(
        sizes=[1024, 8192],
        selections=["x", "t", "all"],
        reps=2,
        password="pw",
        warmup=False,
    )
    assert len(results) == 2 * 3
    assert [(r.size, r.module) for r in results] == [
        (1024, "x"), (1024, "t"), (1024, "all"),
        (8192, "x"), (8192, "t"), (8192, "all"),
    ]
    assert all(r.duration_ms > 0 for r in results)
    assert all(r.decrypt_ms is not None and r.decrypt_ms > 0 for r in results)
    assert all(r.reps == 2 for r in results)


def test_decrypt_timing_can_be_disabled():
    results = run_bench(sizes=[256], selections=["s"], reps=1, measure_decrypt=False)
    assert results[0].decrypt_ms is None


@pytest.mark.parametrize("kwargs", [{"reps": 0}, {"sizes": []}, {"selections": ["z"]}])
def test_invalid_parameters(kwargs):
    params = {"sizes": [64], "selections": ["x"], "reps": 1}
    params.update(kwargs)
    with pytest.raises(ConfigurationError):
        run_bench(**params)


def test_table_layout():
    results = [
        BenchResult("x", 1024, 1, 1.0),
        BenchResult("t", 1024, 1, 9.0),
        BenchResult("x", 2**20, 1, 2.0),
        BenchResult("t", 2**20, 1, 30.0),
    ]
    lines = format_table(results).splitlines()
    assert lines[0].split() == ["size", "(ms)", "x", "t"]
    assert lines[1].split() == ["1K", "1.00", "9.00"]
    assert lines[2].split() == ["1M", "2.00", "30.00"]
    assert format_table(results, throughput=True).splitlines()[0].split()[1] == "(MiB/s)"


def test_csv_output():
    results = [BenchResult("all", 4096, 3, 2.5, 2.0), BenchResult("x", 4096, 3, 0.5)]
    rows = list(csv.DictReader(io.StringIO(format_csv(results))))
    assert len(rows) == 2
    assert rows[0]["module"] == "all"
    assert float(rows[0]["encrypt_ms"]) == 2.5
    assert rows[1]["decrypt_ms"] == ""


@pytest.mark.slow
def test_transposition_dominates_on_large_buffers():
    results = run_bench(
        sizes=[16 * 2**20],
        selections=["x", "t", "s", "ct"],
        reps=1,
        warmup=False,
        measure_decrypt=False,
    )
    durations = {r.module: r.duration_ms for r in results}
    assert durations["t"] > durations["x"]
    assert durations["t"] > durations["s"]
    assert durations["t"] > durations["ct"]


@pytest.mark.slow
def test_xor_scales_near_linearly():
    results = run_bench(sizes=[4 * 2**20, 8 * 2**20], selections=["x"], reps=5, measure_decrypt=False)
    small, large = (r.duration_ms for r in results)
    assert large <= 3 * small


@pytest.mark.slow
def test_median_is_stable_when_reps_double():
    params = {"sizes": [2**20], "selections": ["x"], "measure_decrypt": False}
    few = run_bench(reps=5, **params)[0].duration_ms
    many = run_bench(reps=10, **params)[0].duration_ms
    assert 0.5 * few <= many <= 1.5 * few

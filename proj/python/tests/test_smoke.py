import math

import pytest

import plfusim as ps


def test_lfu_hand_trace():
    engine = ps.CacheEngine(2, ps.Policy.LFU)
    outcomes = [engine.access(i).hit for i in (1, 2, 1, 3, 1, 2)]
    assert outcomes == [False, False, True, False, True, False]
    assert engine.resident() == [(1, 3), (2, 1)]
    assert engine.metadata_size() == (2, 0)


def test_plfu_resumes_parked_frequency():
    engine = ps.CacheEngine(1, ps.Policy.PLFU)
    for i in (1, 2, 1):
        engine.access(i)
    assert engine.resident_frequency(1) == 2
    assert engine.parked_frequency(2) == 1


def test_plfua_gate():
    events, report = ps.replay(ps.Policy.PLFUA, 1, [1, 3, 1, 3, 1], hot_set=[1, 2])
    assert [e.hit for e in events] == [False, False, True, False, True]
    assert (report.hits, report.misses) == (2, 3)


def test_invalid_config_raises():
    with pytest.raises(ps.PlfuError, match="invalid-config"):
        ps.CacheEngine(0, ps.Policy.LFU)
    with pytest.raises(ValueError):
        ps.CacheEngine(1, ps.Policy.PLFUA, hot_set=[])


def test_zipf_pmf_and_generate():
    p = ps.zipf_pmf(2, 1.1)
    assert math.isclose(p[0] / p[1], 2 ** 1.1, rel_tol=1e-12)
    assert math.isclose(sum(ps.zipf_pmf(1000, 1.1)), 1.0, abs_tol=1e-12)
    a = ps.generate(100, 1.1, 1000, 7)
    assert a == ps.generate(100, 1.1, 1000, 7)
    assert min(a) >= 1 and max(a) <= 100


def test_ingest_and_hot_set():
    trace = ps.ingest_sessions([(100, 220, 7), (50, 109, 8), (10, 3610, 9)])
    assert trace == [9, 7]
    assert ps.hot_set([10, 10, 20, 30, 30, 30], 1) == [10, 30]
    with pytest.raises(ps.PlfuError, match="insufficient-objects"):
        ps.hot_set_for_zipf(100, 60)


def test_scatter_and_timed_run():
    trace = ps.generate(212, 1.1, 5000, 1)
    events, report = ps.replay(ps.Policy.LFU, 50, trace)
    points = ps.scatter(events, {i: i for i in range(1, 213)})
    assert len(points) == len(trace)
    timed_report, seconds = ps.timed_run(ps.Policy.LFU, trace, 50)
    assert timed_report.chr == report.chr
    assert seconds >= 0.0


def test_small_sweep():
    config = ps.SweepConfig()
    config.object_counts = [100]
    config.rates = [0.05, 0.25]
    config.policies = [ps.Policy.LFU, ps.Policy.PLFU]
    config.samples_per_case = 2
    config.requests_per_sample = 2000
    grids = ps.run_sweep(config)
    chr_grid = grids["plfu"]["mean_chr"]
    assert len(chr_grid["values"]) == 1 and len(chr_grid["values"][0]) == 2
    assert 0.0 <= chr_grid["values"][0][0] <= 1.0
    assert len(ps.default_grid().object_counts) == 10

import json
import math

import pytest

from pcnroute.generators import gen_hub_spoke, gen_random_pcn, gen_scale_free
from pcnroute.graph import ArcPolicy, build_graph
from pcnroute.search import apply_source_fee_zero, plan_unidirectional
from pcnroute.sim import (
    CSV_FIELDS, InfeasiblePaymentError, Payment, PaymentMetrics, SamplingError, benchmark, histogram,
    is_feasible, read_metrics_csv, run_experiment, sample_payments, summarize, write_results,
)


@pytest.fixture(scope="module")
def sf():
    return gen_scale_free(300, seed=11)


def test_two_vertex_graph():
    big = ArcPolicy(1, 0.01, 1e9)
    g = build_graph([("a", "b", big), ("b", "a", big)])
    pays = sample_payments(g, 5, seed=0)
    assert len(pays) == 5
    assert all({p.source, p.destination} == {0, 1} and 1 <= p.amount <= 1_000_000 for p in pays)


def test_sampler_deterministic(sf):
    assert sample_payments(sf, 40, seed=5) == sample_payments(sf, 40, seed=5)
    assert sample_payments(sf, 40, seed=5) != sample_payments(sf, 40, seed=6)


def test_sampler_accepts_only_feasible(sf):
    for p in sample_payments(sf, 40, seed=2):
        assert p.source != p.destination
        assert is_feasible(sf, p)


def test_degree_filter(sf):
    deg = sf.out_degrees()
    for p in sample_payments(sf, 40, seed=3, degree_cap=4):
        assert deg[p.source] <= 3 and deg[p.destination] <= 3


def test_sampler_errors():
    g = gen_hub_spoke(3)
    with pytest.raises(SamplingError, match="eligible"):
        sample_payments(g, 1, seed=0, degree_cap=1)
    # no arcs at all: every draw is rejected
    with pytest.raises(SamplingError, match="attempts"):
        sample_payments(gen_random_pcn(4, 0, seed=0), 1, seed=0, max_attempts=50)


def test_hub_spoke_reductions_positive():
    g = gen_hub_spoke(100)
    pays = sample_payments(g, 50, seed=1, degree_cap=2)  # spokes only
    metrics, summary = run_experiment(g, pays)
    assert all(m.reduction_pct > 0 for m in metrics)
    assert summary.reduction_mean > 0 and summary.n_payments == 50


def test_single_arc_experiment():
    g = build_graph([("s", "t", ArcPolicy(1, 0.1, 1e7))])
    metrics, summary = run_experiment(g, [Payment(0, 1, 100)])
    m = metrics[0]
    assert (m.uni_relaxations, m.bi_relaxations) == (1, 0)
    assert m.reduction_pct == 100 and m.uni_fee == 11 and m.bi_fee == 0
    assert sum(c for _, _, c in summary.histogram) == 1


def test_experiment_rejects_infeasible():
    g = build_graph([("s", "t", ArcPolicy(1, 0.1, 5))])
    with pytest.raises(InfeasiblePaymentError, match="payment 0"):
        run_experiment(g, [Payment(0, 1, 100)])


def test_metrics_invariants(sf):
    pays = sample_payments(sf, 60, seed=9)
    metrics, summary = run_experiment(sf, pays)
    assert sum(c for _, _, c in summary.histogram) == len(metrics)
    assert summary.uni_std >= 0 and summary.bi_std >= 0
    for p, m in zip(pays, metrics):
        assert m.reduction_pct <= 100
        assert m.reduction_pct == pytest.approx(100 * (m.uni_relaxations - m.bi_relaxations) / m.uni_relaxations)
        ref = plan_unidirectional(apply_source_fee_zero(sf, p.source), p.query())
        assert m.bi_fee == ref.total_fee
    # counts are deterministic
    again, _ = run_experiment(sf, pays)
    assert [(m.uni_relaxations, m.bi_relaxations) for m in again] == \
        [(m.uni_relaxations, m.bi_relaxations) for m in metrics]


def test_histogram_bins():
    h = histogram([-3, 0, 4.99, 5, 99.9, 100])
    assert len(h) == 21
    assert h[0] == (-math.inf, 0.0, 1)
    counts = {lo: c for lo, _, c in h}
    assert counts[0.0] == 2 and counts[5.0] == 1 and counts[95.0] == 2
    assert sum(c for _, _, c in h) == 6


def test_write_results_empty(tmp_path):
    paths = write_results([], summarize([]), tmp_path)
    assert paths["payments"].read_text().strip() == ",".join(CSV_FIELDS)
    assert json.loads(paths["summary"].read_text())["n_payments"] == 0


def test_write_results_roundtrip(tmp_path):
    metrics = [PaymentMetrics(k, k, k + 1, 10 * k + 1, 30 + k, 7, 100 * (23 + k) / (30 + k),
                              1 / 3, 0.1 * k, 2) for k in range(3)]
    summary = summarize(metrics)
    paths = write_results(metrics, summary, tmp_path / "out")
    rows = read_metrics_csv(paths["payments"])
    assert len(rows) == 3
    for r, m in zip(rows, metrics):
        assert abs(r["reduction_pct"] - m.reduction_pct) <= 1e-9
        assert r["uni_fee"] == m.uni_fee
    hist = paths["histogram"].read_text().splitlines()
    assert hist[0] == "bin_lo,bin_hi,count"
    assert sum(int(line.split(",")[2]) for line in hist[1:]) == 3


def test_write_results_unwritable(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError):
        write_results([], summarize([]), blocker / "sub")


def test_benchmark_empty():
    r = benchmark(gen_hub_spoke(3), [], repetitions=2)
    assert (r.uni_total, r.bi_total, r.uni_per_payment) == (0, 0, 0)
    assert r.per_payment_defined is False


def test_benchmark_runs(sf):
    pays = sample_payments(sf, 10, seed=4)
    r = benchmark(sf, pays, repetitions=2)
    assert len(r.uni_runs) == len(r.bi_runs) == 2
    assert r.uni_per_payment == pytest.approx(r.uni_total / 10)
    with pytest.raises(ValueError):
        benchmark(sf, pays, repetitions=0)

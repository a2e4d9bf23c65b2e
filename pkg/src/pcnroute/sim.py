"""Payment simulation: rejection-sampled payments, explored-vertex metrics, timing."""
from __future__ import annotations

import csv
import json
import math
import os
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from ._pykernel import MODE_BALANCE
from .fees import LINEAR
from .graph import ChannelGraph
from .search import Query, _run, plan_partial_bidirectional, plan_unidirectional

MAX_AMOUNT = 1_000_000
BIN_WIDTH = 5.0


class SamplingError(RuntimeError):
    pass


class InfeasiblePaymentError(RuntimeError):
    pass


@dataclass(frozen=True)
class Payment:
    source: int
    destination: int
    amount: int

    def query(self) -> Query:
        return Query(self.source, self.destination, self.amount)


@dataclass
class PaymentMetrics:
    payment_id: int
    source: int
    destination: int
    amount: int
    uni_relaxations: int
    bi_relaxations: int
    reduction_pct: float
    uni_fee: float
    bi_fee: float
    path_len: int


@dataclass
class ExperimentSummary:
    n_payments: int = 0
    uni_mean: float = 0.0
    uni_std: float = 0.0
    bi_mean: float = 0.0
    bi_std: float = 0.0
    reduction_mean: float = 0.0
    reduction_std: float = 0.0
    histogram: list = field(default_factory=list)
    uni_time_total: float = 0.0
    bi_time_total: float = 0.0
    uni_time_per_payment: float = 0.0
    bi_time_per_payment: float = 0.0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["histogram"] = [
            {"bin_lo": None if math.isinf(lo) else lo, "bin_hi": hi, "count": c}
            for lo, hi, c in self.histogram
        ]
        return d


def eligible_vertices(g: ChannelGraph, degree_cap: Optional[int] = None) -> np.ndarray:
    """All vertices, or those with out-degree strictly below ``degree_cap``."""
    if degree_cap is None:
        return np.arange(g.n_vertices)
    return np.flatnonzero(g.out_degrees() < degree_cap)


def is_feasible(g: ChannelGraph, p: Payment, backend=None) -> bool:
    state, _ = _run(g, p.query(), LINEAR, MODE_BALANCE, False, backend)
    return math.isfinite(state.cost[p.source])


def sample_payments(
    g: ChannelGraph,
    n: int,
    seed=None,
    degree_cap: Optional[int] = None,
    max_amount: int = MAX_AMOUNT,
    max_attempts: Optional[int] = None,
    backend=None,
) -> list[Payment]:
    """Draw feasible payments by rejection.

    Endpoints are a distinct pair drawn uniformly from the eligible set,
    the amount uniformly from ``1..max_amount``; a draw is kept iff the
    unidirectional planner finds a feasible path.
    """
    pool = eligible_vertices(g, degree_cap)
    if len(pool) < 2:
        raise SamplingError(f"only {len(pool)} eligible vertices; need at least 2")
    if max_attempts is None:
        max_attempts = 1000 + 1000 * n
    rng = np.random.default_rng(seed)
    out: list[Payment] = []
    attempts = 0
    while len(out) < n:
        if attempts >= max_attempts:
            raise SamplingError(
                f"accepted {len(out)} of {n} payments after {attempts} attempts"
            )
        attempts += 1
        i, j = rng.choice(len(pool), size=2, replace=False)
        amount = int(rng.integers(1, max_amount + 1))
        p = Payment(int(pool[i]), int(pool[j]), amount)
        if is_feasible(g, p, backend):
            out.append(p)
    return out


def histogram(values: Sequence[float], width: float = BIN_WIDTH) -> list[tuple[float, float, int]]:
    """Counts per ``width``-point bin over [0, 100] plus an underflow bin for negatives."""
    edges = np.arange(0.0, 100.0 + width / 2, width)
    bins = [(-math.inf, 0.0)] + list(zip(edges[:-1].tolist(), edges[1:].tolist()))
    counts = [0] * len(bins)
    for x in values:
        if x < 0:
            k = 0
        else:
            k = min(int(x // width), len(bins) - 2) + 1
        counts[k] += 1
    return [(lo, hi, c) for (lo, hi), c in zip(bins, counts)]


def summarize(metrics: Sequence[PaymentMetrics], uni_time=0.0, bi_time=0.0) -> ExperimentSummary:
    n = len(metrics)
    if n == 0:
        return ExperimentSummary(histogram=histogram([]))
    uni = np.array([m.uni_relaxations for m in metrics], dtype=float)
    bi = np.array([m.bi_relaxations for m in metrics], dtype=float)
    red = np.array([m.reduction_pct for m in metrics], dtype=float)
    return ExperimentSummary(
        n_payments=n,
        uni_mean=float(uni.mean()), uni_std=float(uni.std()),
        bi_mean=float(bi.mean()), bi_std=float(bi.std()),
        reduction_mean=float(red.mean()), reduction_std=float(red.std()),
        histogram=histogram(red.tolist()),
        uni_time_total=uni_time, bi_time_total=bi_time,
        uni_time_per_payment=uni_time / n, bi_time_per_payment=bi_time / n,
    )


def run_experiment(g: ChannelGraph, payments: Sequence[Payment], backend=None):
    """Run both planners on each payment; returns ``(metrics, summary)``."""
    metrics = []
    uni_time = bi_time = 0.0
    for k, p in enumerate(payments):
        q = p.query()
        uni = plan_unidirectional(g, q, backend=backend)
        if not uni.feasible:
            raise InfeasiblePaymentError(f"payment {k} {p} has no feasible path")
        bi = plan_partial_bidirectional(g, q, backend=backend)
        uni_time += uni.stats.wall_time
        bi_time += bi.stats.wall_time
        u, b = uni.stats.relaxations, bi.stats.relaxations
        metrics.append(PaymentMetrics(
            k, p.source, p.destination, p.amount, u, b,
            100.0 * (u - b) / u if u > 0 else 0.0,
            uni.total_fee, bi.total_fee, len(uni.arcs),
        ))
    return metrics, summarize(metrics, uni_time, bi_time)


@dataclass
class BenchResult:
    n_payments: int
    repetitions: int
    backend: str
    uni_total: float
    bi_total: float
    uni_per_payment: float
    bi_per_payment: float
    per_payment_defined: bool
    uni_runs: list = field(default_factory=list)
    bi_runs: list = field(default_factory=list)

    @property
    def reduction_pct(self) -> float:
        return 100.0 * (self.uni_total - self.bi_total) / self.uni_total if self.uni_total > 0 else 0.0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["reduction_pct"] = self.reduction_pct
        return d


def benchmark(g: ChannelGraph, payments: Sequence[Payment], repetitions: int = 10, backend=None) -> BenchResult:
    """Mean wall time of planning the whole payment set, per planner, single-threaded."""
    if repetitions < 1:
        raise ValueError("repetitions must be at least 1")
    from . import _backend
    queries = [p.query() for p in payments]
    runs = {"uni": [], "bi": []}
    planners = {"uni": plan_unidirectional, "bi": plan_partial_bidirectional}
    for _ in range(repetitions):
        for name, fn in planners.items():
            t0 = time.perf_counter()
            for q in queries:
                fn(g, q, backend=backend)
            runs[name].append(time.perf_counter() - t0)
    n = len(queries)
    uni_total = float(np.mean(runs["uni"])) if n else 0.0
    bi_total = float(np.mean(runs["bi"])) if n else 0.0
    return BenchResult(
        n, repetitions, backend or _backend.BACKEND, uni_total, bi_total,
        uni_total / n if n else 0.0, bi_total / n if n else 0.0, n > 0,
        runs["uni"], runs["bi"],
    )


CSV_FIELDS = ["payment_id", "source", "destination", "amount", "uni_relaxations",
              "bi_relaxations", "reduction_pct", "uni_fee", "bi_fee", "path_len"]


def write_results(metrics: Sequence[PaymentMetrics], summary: ExperimentSummary,
                  out_dir: Union[str, os.PathLike], labels: Optional[Sequence] = None) -> dict:
    """Write ``payments.csv``, ``summary.json`` and ``histogram.csv`` into ``out_dir``.

    With ``labels`` the source and destination columns carry vertex labels
    instead of dense ids.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "payments": out / "payments.csv",
        "summary": out / "summary.json",
        "histogram": out / "histogram.csv",
    }
    with open(paths["payments"], "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_FIELDS)
        for m in metrics:
            row = asdict(m)
            if labels is not None:
                row["source"], row["destination"] = labels[m.source], labels[m.destination]
            w.writerow([repr(row[f]) if isinstance(row[f], float) else row[f] for f in CSV_FIELDS])
    with open(paths["summary"], "w") as fh:
        json.dump(summary.to_dict(), fh, indent=2)
        fh.write("\n")
    with open(paths["histogram"], "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["bin_lo", "bin_hi", "count"])
        for lo, hi, c in summary.histogram:
            w.writerow([lo, hi, c])
    return paths


def read_metrics_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    for r in rows:
        for f in ("reduction_pct", "uni_fee", "bi_fee"):
            r[f] = float(r[f])
        for f in ("payment_id", "amount", "uni_relaxations", "bi_relaxations", "path_len"):
            r[f] = int(r[f])
    return rows

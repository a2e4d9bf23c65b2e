"""Property suites run by ``pcnroute verify`` and the acceptance tests."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

from .fees import (
    BARRIER, LINEAR, TOL, TabulatedFeeMap, amounts_closed_form, amounts_recursive,
    check_consistency, tabulated_pairs,
)
from .generators import gen_random_pcn
from .graph import ArcPolicy, ChannelGraph
from .search import (
    Query, apply_source_fee_zero, brute_force_lowest_fee, plan_partial_bidirectional,
    plan_unidirectional, plan_unidirectional_barrier,
)

REFERENCE_AMOUNT = 102
REFERENCE_BASE = [10, 5, 3.4, 11, 7]
REFERENCE_RATE = [0.1, 0.211, 0.15, 0.12, 0.11]


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "cases": self.cases,
                "failures": self.failures[:20], "n_failures": len(self.failures),
                "detail": self.detail}


def reference_path() -> list[ArcPolicy]:
    return [ArcPolicy(b, r) for b, r in zip(REFERENCE_BASE, REFERENCE_RATE)]


def listing_oracle(a, base, rate) -> list[float]:
    """Hop amounts from a plain backwards loop, index 0 = source."""
    n = len(base) - 1
    seq = {n + 1: a}
    ai = a
    for i in range(len(base) - 1, -1, -1):
        ai += base[i] + ai * rate[i]
        seq[i] = ai
    return [seq[i] for i in range(n + 2)]


def random_paths(seed, count) -> Iterator[tuple[list[ArcPolicy], float]]:
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(0, 11))
        path = [ArcPolicy(float(rng.uniform(0, 100)), float(rng.uniform(0, 1))) for _ in range(n)]
        yield path, float(rng.uniform(1, 1e6))


def recurrence_suite(seed=0, n_cases=1000) -> SuiteResult:
    res = SuiteResult("recurrence_equivalence")
    cases = [(reference_path(), REFERENCE_AMOUNT)] + list(random_paths(seed, n_cases))
    worst = 0.0
    for k, (path, a) in enumerate(cases):
        rec = amounts_recursive(path, a)
        closed = amounts_closed_form(path, a)
        diff = max(abs(x - y) for x, y in zip(rec, closed))
        worst = max(worst, diff)
        res.cases += 1
        if diff >= 1e-9 or len(rec) != len(closed):
            res.failures.append({"case": k, "max_abs_diff": diff})
    res.detail["max_abs_diff"] = worst
    return res


def random_graph_suite(seed=0, n_graphs=500, max_vertices=12, max_arcs=30,
                       max_tries=50) -> Iterator[tuple[ChannelGraph, Query, list[Query]]]:
    """Seeded small graphs, each with one feasible query.

    Also yields the infeasible queries drawn (and rejected) on the way, so
    callers can check that every planner agrees there is no path.
    """
    rng = np.random.default_rng(seed)
    produced = 0
    while produced < n_graphs:
        n = int(rng.integers(3, max_vertices + 1))
        m = int(rng.integers(n, min(max_arcs, n * (n - 1)) + 1))
        g = gen_random_pcn(n, m, ((0.0, 10.0), (0.0, 0.2)), (0.0, 2000.0), int(rng.integers(2**31)))
        rejected = []
        for _ in range(max_tries):
            s, t = (int(x) for x in rng.choice(n, 2, replace=False))
            q = Query(s, t, float(rng.integers(1, 1001)))
            if brute_force_lowest_fee(g, q).feasible:
                produced += 1
                yield g, q, rejected
                break
            rejected.append(q)


def oracle_suite(seed=0, n_graphs=500, backend=None) -> SuiteResult:
    """Unidirectional and barrier planners against the brute-force oracle."""
    res = SuiteResult("oracle_equivalence")
    infeasible = 0
    for k, (g, q, rejected) in enumerate(random_graph_suite(seed, n_graphs)):
        for qq in [q] + rejected:
            oracle = brute_force_lowest_fee(g, qq)
            uni = plan_unidirectional(g, qq, backend=backend)
            bar = plan_unidirectional_barrier(g, qq, backend=backend)
            res.cases += 1
            infeasible += not oracle.feasible
            if uni.total_fee != oracle.total_fee or bar.total_fee != oracle.total_fee:
                res.failures.append({"graph": k, "query": [qq.source, qq.destination, qq.amount],
                                     "oracle": oracle.total_fee, "uni": uni.total_fee,
                                     "barrier": bar.total_fee})
    res.detail["infeasible_queries"] = infeasible
    return res


def bidirectional_suite(seed=0, n_graphs=500, backend=None) -> SuiteResult:
    """Partial bidirectional against unidirectional on the source-fee-zero graph."""
    res = SuiteResult("bidirectional_soundness")
    for k, (g, q, rejected) in enumerate(random_graph_suite(seed, n_graphs)):
        for qq in [q] + rejected:
            gz = apply_source_fee_zero(g, qq.source)
            bi = plan_partial_bidirectional(g, qq, backend=backend)
            ref = plan_unidirectional(gz, qq, backend=backend)
            res.cases += 1
            problems = []
            if bi.total_fee != ref.total_fee:
                problems.append("fee")
            if bi.stats.relaxations > ref.stats.relaxations:
                problems.append("relaxations")
            if problems:
                res.failures.append({"graph": k, "query": [qq.source, qq.destination, qq.amount],
                                     "bi_fee": bi.total_fee, "ref_fee": ref.total_fee,
                                     "bi_relax": bi.stats.relaxations,
                                     "ref_relax": ref.stats.relaxations, "problems": problems})
    return res


def consistency_suite(seed=0, n_cases=10000) -> SuiteResult:
    """Random (policy, a <= a') pairs against linear and barrier maps."""
    res = SuiteResult("consistency")
    rng = np.random.default_rng(seed)
    base = rng.uniform(0, 100, n_cases)
    rate = rng.uniform(0, 1, n_cases)
    bal = rng.uniform(0, 1e6, n_cases)
    pairs = np.sort(rng.uniform(0, 1e6, (n_cases, 2)), axis=1)
    g = ChannelGraph([0, 1], np.zeros(n_cases, dtype=np.int64), np.ones(n_cases, dtype=np.int64),
                     base, rate, bal)
    for e in range(n_cases):
        pair = [(float(pairs[e, 0]), float(pairs[e, 1]))]
        for fee in (LINEAR, BARRIER):
            res.cases += 1
            verdict = check_consistency(fee, g, e, pair)
            if not verdict.consistent:
                res.failures.append({"arc": e, "map": fee.kind, "pair": pair[0]})
    return res


def fig4_graph() -> tuple[ChannelGraph, TabulatedFeeMap]:
    from .ingest import fixture_path, load_snapshot_file
    import json
    g, _ = load_snapshot_file(fixture_path("fig4"))
    with open(fixture_path("fig4_fees")) as fh:
        fees = TabulatedFeeMap.from_json(json.load(fh), g)
    return g, fees


def counterexample_suite(backend=None) -> SuiteResult:
    """The inconsistent tabulated map: Dijkstra pays 30 where 25 is possible."""
    res = SuiteResult("inconsistent_counterexample")
    g, fees = fig4_graph()
    q = Query.from_labels(g, "s", "t", 100)
    uni = plan_unidirectional(g, q, fees, backend=backend)
    oracle = brute_force_lowest_fee(g, q, fees)
    sj = g.arcs_between(g.vertex("s"), g.vertex("j"))[0]
    verdict = check_consistency(fees, g, sj, tabulated_pairs(fees, sj))
    res.cases = 3
    lab = g.labels
    res.detail = {
        "uni_fee": uni.total_fee,
        "oracle_fee": oracle.total_fee,
        "gap": uni.total_fee - oracle.total_fee,
        "uni_path": [lab[v] for v in uni.vertices],
        "oracle_path": [lab[v] for v in oracle.vertices],
        "violation": verdict.violation,
    }
    if abs(uni.total_fee - 30) > TOL or [lab[v] for v in uni.vertices] != ["s", "j", "t"]:
        res.failures.append({"expected": "uni fee 30 via s,j,t", "got": res.detail["uni_fee"]})
    if abs(oracle.total_fee - 25) > TOL or [lab[v] for v in oracle.vertices] != ["s", "j", "i", "t"]:
        res.failures.append({"expected": "oracle fee 25 via s,j,i,t", "got": res.detail["oracle_fee"]})
    if verdict.consistent or verdict.violation != (110.0, 120.0):
        res.failures.append({"expected": "violation (110, 120)", "got": verdict.violation})
    return res


def run_all(seed=0, n_cases=100, backend=None) -> list[SuiteResult]:
    """All suites; ``n_cases`` scales the randomized ones (0 runs none of them)."""
    results = [counterexample_suite(backend)]
    if n_cases > 0:
        results += [
            recurrence_suite(seed, n_cases),
            oracle_suite(seed, n_cases, backend),
            bidirectional_suite(seed, n_cases, backend),
            consistency_suite(seed, n_cases),
        ]
    return results

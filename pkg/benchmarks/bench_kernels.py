"""Compare the compiled and pure-Python search kernels.

    python benchmarks/bench_kernels.py --vertices 2500 --payments 500

Both kernels run the same seeded payments on the same synthetic graph; the
script checks that they report identical fees and relaxation counts, then
prints per-planner wall times and the speedup as JSON.
"""
import argparse
import json
import time

from pcnroute import _backend
from pcnroute.generators import gen_scale_free
from pcnroute.search import plan_partial_bidirectional, plan_unidirectional
from pcnroute.sim import sample_payments


def time_planner(fn, g, queries, backend, repeat):
    best = float("inf")
    outcome = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        results = [fn(g, q, backend=backend) for q in queries]
        best = min(best, time.perf_counter() - t0)
        outcome = [(r.total_fee, r.stats.relaxations) for r in results]
    return best, outcome


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--vertices", type=int, default=2500)
    p.add_argument("--payments", type=int, default=500)
    p.add_argument("--repeat", type=int, default=3, help="best-of repetitions")
    p.add_argument("--seed", type=int, default=1)
    args = p.parse_args(argv)

    g = gen_scale_free(args.vertices, seed=args.seed)
    queries = [pay.query() for pay in sample_payments(g, args.payments, args.seed)]
    report = {"n_vertices": g.n_vertices, "n_arcs": g.n_arcs, "payments": len(queries), "kernels": {}}
    outcomes = {}
    for name in sorted(_backend.KERNELS):
        row = {}
        for label, fn in (("uni", plan_unidirectional), ("bi", plan_partial_bidirectional)):
            row[label], outcomes[name, label] = time_planner(fn, g, queries, name, args.repeat)
        report["kernels"][name] = row
    if len(_backend.KERNELS) == 2:
        report["identical_results"] = all(
            outcomes["python", k] == outcomes["cython", k] for k in ("uni", "bi"))
        report["speedup"] = {k: report["kernels"]["python"][k] / report["kernels"]["cython"][k]
                             for k in ("uni", "bi")}
    else:
        report["note"] = "compiled kernel not built; only the Python kernel was timed"
    print(json.dumps(report, indent=2))


if __name__ == "__main__":
    main()

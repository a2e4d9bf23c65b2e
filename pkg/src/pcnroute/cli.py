"""``pcnroute`` command line: ingest, plan, simulate, bench, verify.

Exit codes: 0 success, 1 a verification suite failed, 2 bad usage or input.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys

from . import _backend
from .fees import LINEAR, TabulatedFeeMap
from .generators import gen_scale_free
from .graph import GraphError
from .ingest import SnapshotError, fixture_path, load_snapshot_file
from .search import OracleGuardError, Query, plan

DEFAULT_SEED = 20240222

log = logging.getLogger("pcnroute")


class InputError(Exception):
    pass


def default_seed() -> int:
    raw = os.environ.get("PCN_SEED")
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"PCN_SEED must be an integer, got {raw!r}") from None


def _json_default(x):
    if hasattr(x, "item"):
        return x.item()
    raise TypeError(f"cannot serialise {type(x).__name__}")


def emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, default=_json_default, allow_nan=False)
    sys.stdout.write("\n")


def load_graph(args):
    """Graph from ``--snapshot`` (a path or ``fixture:NAME``) or ``--synthetic N``."""
    if getattr(args, "synthetic", None):
        g = gen_scale_free(args.synthetic, seed=args.seed)
        return g, None
    path = args.snapshot
    if path is None:
        raise InputError("one of --snapshot or --synthetic is required")
    if path.startswith("fixture:"):
        try:
            path = fixture_path(path.split(":", 1)[1])
        except FileNotFoundError as exc:
            raise InputError(str(exc)) from None
    if not os.path.exists(path):
        raise InputError(f"snapshot file not found: {path}")
    try:
        return load_snapshot_file(path)
    except (SnapshotError, GraphError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot parse {path}: {exc}") from None


def _vertex(g, key):
    try:
        return g.vertex(key)
    except GraphError:
        # synthetic graphs are labelled by integers
        try:
            return g.vertex(int(key))
        except (GraphError, ValueError):
            raise InputError(f"unknown vertex {key!r}") from None


def cmd_ingest(args) -> int:
    _, report = load_graph(args)
    emit(report.to_dict())
    return 0


def cmd_plan(args) -> int:
    g, _ = load_graph(args)
    if not args.amount > 0:
        raise InputError("--amount must be positive")
    s, t = _vertex(g, args.source), _vertex(g, args.destination)
    if s == t:
        raise InputError("source and destination must differ")
    fee = LINEAR
    if args.fee_table:
        try:
            with open(args.fee_table) as fh:
                fee = TabulatedFeeMap.from_json(json.load(fh), g)
        except (OSError, ValueError, GraphError) as exc:
            raise InputError(f"cannot load fee table: {exc}") from None
    try:
        result = plan(g, Query(s, t, args.amount), args.planner, fee,
                      backend=args.backend, max_hops=args.max_hops)
    except (OracleGuardError, KeyError, ValueError) as exc:
        raise InputError(str(exc)) from None
    out = result.to_dict(g)
    out["source"], out["destination"], out["amount"] = args.source, args.destination, args.amount
    emit(out)
    return 0


def cmd_simulate(args) -> int:
    from .sim import SamplingError, run_experiment, sample_payments, write_results

    g, report = load_graph(args)
    try:
        payments = sample_payments(g, args.payments, args.seed, args.degree_cap, backend=args.backend)
    except SamplingError as exc:
        raise InputError(str(exc)) from None
    metrics, summary = run_experiment(g, payments, backend=args.backend)
    out = summary.to_dict()
    if args.output_dir:
        paths = write_results(metrics, summary, args.output_dir, labels=g.labels)
        out["files"] = {k: str(v) for k, v in paths.items()}
    if report is not None:
        out["ingest"] = report.to_dict()
    emit(out)
    return 0


def cmd_bench(args) -> int:
    from .sim import SamplingError, benchmark, sample_payments

    g, _ = load_graph(args)
    try:
        payments = sample_payments(g, args.payments, args.seed, args.degree_cap)
    except SamplingError as exc:
        raise InputError(str(exc)) from None
    backends = sorted(_backend.KERNELS) if args.backend == "both" else [args.backend]
    results = {}
    for name in backends:
        results[name or _backend.BACKEND] = benchmark(g, payments, args.repetitions, backend=name).to_dict()
    emit({"n_vertices": g.n_vertices, "n_arcs": g.n_arcs, "results": results})
    return 0


def cmd_verify(args) -> int:
    from .verify import run_all

    if args.cases == 0:
        print("warning: --cases 0 skips every randomized suite", file=sys.stderr)
    results = run_all(args.seed, args.cases, backend=args.backend)
    failed = [r.name for r in results if not r.passed]
    emit({"passed": not failed, "failed": failed, "suites": [r.to_dict() for r in results]})
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pcnroute", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def graph_args(sp, synthetic=False):
        sp.add_argument("--snapshot", help="lnd describegraph JSON, or fixture:NAME for a bundled example")
        if synthetic:
            sp.add_argument("--synthetic", type=int, metavar="N",
                            help="use a seeded scale-free graph with N vertices instead of a snapshot")

    def backend_arg(sp, both=False):
        choices = ["python", "cython"] + (["both"] if both else [])
        sp.add_argument("--backend", choices=choices, default=None,
                        help=f"search kernel (default: {_backend.BACKEND})")

    sp = sub.add_parser("ingest", help="load and filter a snapshot, print the ingest report")
    graph_args(sp)
    sp.set_defaults(func=cmd_ingest)

    sp = sub.add_parser("plan", help="plan one payment")
    graph_args(sp)
    sp.add_argument("--source", required=True)
    sp.add_argument("--destination", required=True)
    sp.add_argument("--amount", type=float, required=True)
    sp.add_argument("--planner", choices=["uni", "bi", "barrier", "oracle"], default="uni")
    sp.add_argument("--fee-table", help="JSON list of {arc: [source, target], amount, fee}")
    sp.add_argument("--max-hops", type=int, default=None, help="path length cap for the oracle")
    backend_arg(sp)
    sp.set_defaults(func=cmd_plan, seed=None)

    for name, func, helptext in (("simulate", cmd_simulate, "rejection-sample payments and compare planners"),
                                 ("bench", cmd_bench, "wall-clock benchmark of both planners")):
        sp = sub.add_parser(name, help=helptext)
        graph_args(sp, synthetic=True)
        sp.add_argument("--payments", type=int, default=10_000 if name == "simulate" else 1000)
        sp.add_argument("--seed", type=int, default=None, help=f"default $PCN_SEED or {DEFAULT_SEED}")
        sp.add_argument("--degree-cap", type=int, default=None,
                        help="only sample endpoints with out-degree below this")
        if name == "simulate":
            sp.add_argument("--output-dir", help="write payments.csv, summary.json, histogram.csv here")
            backend_arg(sp)
        else:
            sp.add_argument("--repetitions", type=int, default=10)
            backend_arg(sp, both=True)
        sp.set_defaults(func=func)

    sp = sub.add_parser("verify", help="run the property suites")
    sp.add_argument("--seed", type=int, default=None, help=f"default $PCN_SEED or {DEFAULT_SEED}")
    sp.add_argument("--cases", type=int, default=100, help="cases per randomized suite")
    backend_arg(sp)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if getattr(args, "seed", 0) is None:
            args.seed = default_seed()
        if getattr(args, "payments", 0) < 0 or getattr(args, "repetitions", 1) < 1:
            raise InputError("--payments must be >= 0 and --repetitions >= 1")
        return args.func(args)
    except InputError as exc:
        print(f"pcnroute: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

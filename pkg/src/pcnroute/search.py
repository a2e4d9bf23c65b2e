"""Lowest-fee path planning.

All planners search the transpose graph from the destination, because only
the amount delivered to the destination is known up front. The cost of a
vertex is the total fee of the cheapest route found from it to the
destination; relaxing the reversed arc ``(v, u)`` charges the fee of the
payment arc ``u -> v`` on the amount ``a + c(v)`` it has to forward.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _backend
from ._pykernel import MODE_BALANCE, MODE_BARRIER
from .fees import LINEAR, TOL, FeeMap, hop_amounts
from .graph import ChannelGraph, GraphError

STANDARD = "standard"
SOURCE_FEE_ZERO = "source_fee_zero"


class PathError(RuntimeError):
    """Path reconstruction found an inconsistent search state."""


class OracleGuardError(ValueError):
    pass


@dataclass(frozen=True)
class Query:
    source: int
    destination: int
    amount: float

    def __post_init__(self):
        if self.source == self.destination:
            raise ValueError("source and destination must differ")
        if not self.amount > 0:
            raise ValueError(f"amount must be positive, got {self.amount!r}")

    @classmethod
    def from_labels(cls, g: ChannelGraph, source, destination, amount) -> "Query":
        return cls(g.vertex(source), g.vertex(destination), amount)

    def check(self, g: ChannelGraph) -> None:
        for v in (self.source, self.destination):
            g._check_vertex(v)


@dataclass
class SearchStats:
    relaxations: int = 0
    pops: int = 0
    wall_time: float = 0.0
    backend: str = ""


@dataclass
class SearchState:
    cost: np.ndarray
    pred: np.ndarray
    popped: Optional[list] = None


@dataclass
class PathResult:
    arcs: tuple = ()
    vertices: tuple = ()
    hop_amounts: tuple = ()
    total_fee: float = math.inf
    stats: SearchStats = field(default_factory=SearchStats)
    semantics: str = STANDARD
    planner: str = ""

    @property
    def feasible(self) -> bool:
        return math.isfinite(self.total_fee)

    def __bool__(self):
        return self.feasible

    def to_dict(self, g: Optional[ChannelGraph] = None) -> dict:
        d = {
            "planner": self.planner,
            "feasible": self.feasible,
            "semantics": self.semantics,
            "total_fee": self.total_fee if self.feasible else None,
            "arcs": list(self.arcs),
            "hop_amounts": list(self.hop_amounts),
            "stats": {
                "relaxations": self.stats.relaxations,
                "pops": self.stats.pops,
                "wall_time": self.stats.wall_time,
                "backend": self.stats.backend,
            },
        }
        if g is not None:
            d["vertices"] = [g.labels[v] for v in self.vertices]
        return d


def _run(g, q, fee, mode, early_exit, backend, trace=False):
    q.check(g)
    fee_fn = None
    name = backend or _backend.BACKEND
    if fee.kind not in ("linear", "barrier"):
        # arbitrary maps go through the Python kernel's callback hook
        fee_fn = lambda e, amount: fee.fee(g, e, amount)  # noqa: E731
        name = "python"
    kernel = _backend.get_kernel(name)
    t0 = time.perf_counter()
    cost, pred, relax, pops, _, popped = kernel(
        g.in_indptr, g.in_arcs, g.out_indptr, g.out_arcs, g.source, g.target,
        g.base_fee, g.fee_rate, g.balance, g.n_vertices,
        q.source, q.destination, float(q.amount), mode, early_exit, fee_fn, trace,
    )
    stats = SearchStats(int(relax), int(pops), time.perf_counter() - t0, name)
    return SearchState(cost, pred, popped), stats


def reconstruct_path(g: ChannelGraph, state: SearchState, q: Query, fee: FeeMap = LINEAR,
                     semantics: str = STANDARD):
    """Follow predecessors from the source to the destination.

    Returns ``(arcs, vertices, hop_amounts)`` in payment direction. Under the
    source-fee-zero semantics the first hop is charged nothing.
    """
    s, t = q.source, q.destination
    if not math.isfinite(state.cost[s]):
        raise PathError("source was not reached")
    arcs, vertices = [], [s]
    v = s
    while v != t:
        e = int(state.pred[v])
        if e < 0 or len(arcs) > g.n_vertices:
            raise PathError(f"broken predecessor chain at vertex {v}")
        arcs.append(e)
        v = int(g.target[e])
        vertices.append(v)
    if semantics == SOURCE_FEE_ZERO:
        tail = hop_amounts(g, arcs[1:], q.amount, fee)
        amounts = [tail[0]] + tail
    else:
        amounts = hop_amounts(g, arcs, q.amount, fee)
    expected = q.amount + state.cost[s]
    if abs(amounts[0] - expected) > TOL * max(1.0, abs(expected)):
        raise PathError(f"hop amounts give {amounts[0]!r} at the source, search gave {expected!r}")
    for e, fwd in zip(arcs, amounts[1:]):
        if fwd > g.balance[e] + TOL * max(1.0, fwd):
            raise PathError(f"arc {e} cannot carry {fwd!r}")
    return tuple(arcs), tuple(vertices), tuple(amounts)


def _result(g, q, fee, state, stats, planner, semantics=STANDARD):
    c = float(state.cost[q.source])
    if not math.isfinite(c):
        return PathResult(stats=stats, semantics=semantics, planner=planner)
    arcs, vertices, amounts = reconstruct_path(g, state, q, fee, semantics)
    return PathResult(arcs, vertices, amounts, c, stats, semantics, planner)


def plan_unidirectional(g: ChannelGraph, q: Query, fee: FeeMap = LINEAR, *, backend=None) -> PathResult:
    """Reverse Dijkstra with the balance test ``c(v) + a <= b`` on admission."""
    state, stats = _run(g, q, fee, MODE_BALANCE, False, backend)
    return _result(g, q, fee, state, stats, "uni")


def plan_unidirectional_barrier(g: ChannelGraph, q: Query, *, backend=None) -> PathResult:
    """Variant where over-balance arcs cost infinity instead of being skipped.

    An unreachable source is reported as a result with infinite fee.
    """
    state, stats = _run(g, q, LINEAR, MODE_BARRIER, False, backend)
    return _result(g, q, LINEAR, state, stats, "barrier")


def plan_partial_bidirectional(g: ChannelGraph, q: Query, fee: FeeMap = LINEAR, *, backend=None) -> PathResult:
    """Reverse search that stops at the first popped out-neighbour of the source.

    Fees the source pays on its own channels come back to it, so the first
    hop is free and the fee reported is ``c(v)`` of that neighbour.
    """
    state, stats = _run(g, q, fee, MODE_BALANCE, True, backend)
    return _result(g, q, fee, state, stats, "bi", SOURCE_FEE_ZERO)


PLANNERS = {
    "uni": plan_unidirectional,
    "bi": plan_partial_bidirectional,
}


def search_trace(g: ChannelGraph, q: Query, fee: FeeMap = LINEAR, *, early_exit=False, backend=None):
    """Run a search and return ``(state, stats)`` with the pop sequence recorded."""
    return _run(g, q, fee, MODE_BALANCE, early_exit, backend, trace=True)


def apply_source_fee_zero(g: ChannelGraph, s: int) -> ChannelGraph:
    """Copy of ``g`` with zero fees on every arc leaving ``s``; balances kept."""
    g._check_vertex(s)
    out = g.out_arcs_of(s)
    if not out:
        return g
    base = g.base_fee.copy()
    rate = g.fee_rate.copy()
    base[out] = 0.0
    rate[out] = 0.0
    return g.with_policies(base_fee=base, fee_rate=rate)


MAX_ORACLE_VERTICES = 14
MAX_ORACLE_HOPS = 6


def brute_force_lowest_fee(g: ChannelGraph, q: Query, fee: FeeMap = LINEAR,
                           max_hops: Optional[int] = None) -> PathResult:
    """Enumerate every simple path and keep the cheapest feasible one.

    Paths are grown backwards from the destination so a balance violation
    prunes all extensions. Ties go to the lexicographically smallest arc-id
    sequence in payment direction.
    """
    q.check(g)
    n = g.n_vertices
    if n > MAX_ORACLE_VERTICES and (max_hops is None or max_hops > MAX_ORACLE_HOPS):
        raise OracleGuardError(
            f"{n} vertices is too many to enumerate; pass max_hops <= {MAX_ORACLE_HOPS}"
        )
    limit = n - 1 if max_hops is None else max_hops
    s, t, a = q.source, q.destination, float(q.amount)
    src = g.source
    bal = g.balance
    best_fee = math.inf
    best_arcs: Optional[tuple] = None
    n_paths = 0
    on_path = [False] * n
    stack: list[int] = []

    def visit(v: int, c: float) -> None:
        nonlocal best_fee, best_arcs, n_paths
        if v == s:
            n_paths += 1
            arcs = tuple(reversed(stack))
            if c < best_fee or (c == best_fee and arcs < best_arcs):
                best_fee, best_arcs = c, arcs
            return
        if len(stack) >= limit:
            return
        fwd = a + c
        on_path[v] = True
        for e in g.in_arcs_of(v):
            u = int(src[e])
            if on_path[u] or fwd > bal[e]:
                continue
            stack.append(e)
            visit(u, c + fee.fee(g, e, fwd))
            stack.pop()
        on_path[v] = False

    t0 = time.perf_counter()
    visit(t, 0.0)
    stats = SearchStats(relaxations=n_paths, wall_time=time.perf_counter() - t0, backend="oracle")
    if best_arcs is None:
        return PathResult(stats=stats, planner="oracle")
    vertices = (s,) + tuple(int(g.target[e]) for e in best_arcs)
    amounts = tuple(hop_amounts(g, best_arcs, a, fee))
    return PathResult(best_arcs, vertices, amounts, best_fee, stats, STANDARD, "oracle")


def plan(g: ChannelGraph, q: Query, planner: str = "uni", fee: FeeMap = LINEAR, *, backend=None,
         max_hops=None) -> PathResult:
    if planner == "uni":
        return plan_unidirectional(g, q, fee, backend=backend)
    if planner == "bi":
        return plan_partial_bidirectional(g, q, fee, backend=backend)
    if planner == "barrier":
        if fee.kind not in ("linear", "barrier"):
            raise ValueError("the barrier planner derives its fees from arc policies")
        return plan_unidirectional_barrier(g, q, backend=backend)
    if planner == "oracle":
        return brute_force_lowest_fee(g, q, fee, max_hops)
    raise ValueError(f"unknown planner {planner!r}")


__all__ = [
    "GraphError", "OracleGuardError", "PathError", "PathResult", "Query", "SearchState",
    "SearchStats", "apply_source_fee_zero", "brute_force_lowest_fee", "plan",
    "plan_partial_bidirectional", "plan_unidirectional", "plan_unidirectional_barrier",
    "reconstruct_path", "search_trace",
]

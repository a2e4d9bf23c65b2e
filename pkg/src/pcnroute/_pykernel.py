"""Pure-Python search kernel.

Reference implementation of the reverse (destination-rooted) fee search and
the fallback when the compiled extension is unavailable. ``_ckernel.pyx``
mirrors it line for line; keep the two in sync.

The search walks the transpose graph: the out-arcs of ``v`` there are the
in-arcs of ``v`` in the payment graph, so the CSR arrays passed in are the
payment graph's *in*-adjacency.
"""
import heapq
import math

import numpy as np

MODE_BALANCE = 0  # admit an arc only if c(v) + a fits its balance
MODE_BARRIER = 1  # infinite fee past the balance, admission on cost alone


def search(in_indptr, in_arcs, out_indptr, out_arcs, source, target,
           base_fee, fee_rate, balance, n, s, t, amount, mode=MODE_BALANCE,
           early_exit=False, fee_fn=None, trace=False):
    """Run one query; returns ``(cost, pred, relaxations, pops, exit_arc, popped)``.

    ``pred[v]`` is the payment-graph arc whose reversal reached ``v``.
    ``exit_arc`` is the arc out of ``s`` used by the early exit, else -1.
    ``fee_fn(arc, amount)`` replaces the linear fee when given.
    """
    inf = math.inf
    cost = [inf] * n
    pred = [-1] * n
    in_indptr = in_indptr.tolist() if hasattr(in_indptr, "tolist") else in_indptr
    in_arcs = in_arcs.tolist() if hasattr(in_arcs, "tolist") else in_arcs
    src = source.tolist() if hasattr(source, "tolist") else source
    base = base_fee.tolist() if hasattr(base_fee, "tolist") else base_fee
    rate = fee_rate.tolist() if hasattr(fee_rate, "tolist") else fee_rate
    bal = balance.tolist() if hasattr(balance, "tolist") else balance

    exit_targets = set()
    s_out = []
    if early_exit:
        s_out = [int(e) for e in out_arcs[out_indptr[s]:out_indptr[s + 1]]]
        exit_targets = {int(target[e]) for e in s_out}

    relaxations = 0
    pops = 0
    exit_arc = -1
    popped = [] if trace else None
    cost[t] = 0.0
    heap = [(0.0, t)]
    while heap:
        cv, v = heapq.heappop(heap)
        if cv > cost[v]:
            continue  # stale entry
        pops += 1
        if trace:
            popped.append((cv, v))
        if v == s:
            break
        if v in exit_targets:
            for e in s_out:
                if target[e] == v and cv + amount <= bal[e]:
                    exit_arc = e
                    break
            if exit_arc >= 0:
                cost[s] = cv
                pred[s] = exit_arc
                break
        fwd = cv + amount
        for k in range(in_indptr[v], in_indptr[v + 1]):
            e = in_arcs[k]
            relaxations += 1
            u = src[e]
            if mode == MODE_BALANCE:
                if fwd > bal[e]:
                    continue
                f = fee_fn(e, fwd) if fee_fn is not None else base[e] + rate[e] * fwd
            else:
                if fwd > bal[e]:
                    f = inf
                else:
                    f = fee_fn(e, fwd) if fee_fn is not None else base[e] + rate[e] * fwd
            cu = cv + f
            if cu < cost[u]:
                cost[u] = cu
                pred[u] = e
                heapq.heappush(heap, (cu, u))
    return (np.asarray(cost, dtype=np.float64), np.asarray(pred, dtype=np.int64),
            relaxations, pops, exit_arc, popped)

"""Synthetic channel graphs for tests and benchmarks."""
from __future__ import annotations

import numpy as np

from .graph import ArcPolicy, ChannelGraph, GraphError, build_graph


def gen_hub_spoke(n_spokes: int, policy: ArcPolicy = ArcPolicy(1.0, 0.001, 1e9)) -> ChannelGraph:
    """Hub ``"r"`` (vertex 0) joined both ways to spokes ``"v1".."vn"``."""
    if n_spokes < 2:
        raise GraphError("a hub-and-spoke graph needs at least two spokes")
    arcs = []
    for k in range(1, n_spokes + 1):
        arcs.append((f"v{k}", "r", policy))
        arcs.append(("r", f"v{k}", policy))
    return build_graph(arcs, vertices=["r"])


def gen_random_pcn(
    n_vertices: int,
    n_arcs: int,
    policy_ranges=((0.0, 10.0), (0.0, 0.05)),
    balance_range=(0.0, 1e6),
    seed=None,
) -> ChannelGraph:
    """Random simple digraph: distinct ordered pairs, uniform policies.

    ``policy_ranges`` is ``((base_lo, base_hi), (rate_lo, rate_hi))``.
    """
    max_arcs = n_vertices * (n_vertices - 1)
    if n_arcs < 0 or n_arcs > max_arcs:
        raise GraphError(f"cannot place {n_arcs} arcs on {n_vertices} vertices (max {max_arcs})")
    rng = np.random.default_rng(seed)
    (b_lo, b_hi), (r_lo, r_hi) = policy_ranges
    pair_ids = rng.choice(max_arcs, size=n_arcs, replace=False) if n_arcs else np.empty(0, dtype=np.int64)
    # pair index -> (u, v) skipping the diagonal
    u = pair_ids // (n_vertices - 1) if n_vertices > 1 else pair_ids
    v = pair_ids % (n_vertices - 1) if n_vertices > 1 else pair_ids
    v = v + (v >= u)
    base = rng.uniform(b_lo, b_hi, n_arcs)
    rate = rng.uniform(r_lo, r_hi, n_arcs)
    bal = rng.uniform(balance_range[0], balance_range[1], n_arcs)
    return ChannelGraph(list(range(n_vertices)), u, v, base, rate, bal)


def gen_scale_free(
    n_vertices: int = 2500,
    mean_channels: float = 5.0,
    seed=None,
    median_capacity: float = 4_000_000,
    capacity_sigma: float = 1.39,
) -> ChannelGraph:
    """Preferential-attachment channel graph with LN-like policies.

    Each new vertex opens a geometric number of channels (mean
    ``mean_channels``) to existing vertices picked proportionally to their
    degree, which yields a few large hubs and many low-degree leaves.
    Capacities are log-normal; the default sigma puts the mean near 2.6x the
    median. Base fees are mostly 0 or 1 sat, fee rates log-normal around
    100 ppm.
    """
    if n_vertices < 2:
        raise GraphError("need at least two vertices")
    rng = np.random.default_rng(seed)
    ends: list[int] = [0, 1]  # every channel endpoint, for degree-weighted picks
    channels = [(1, 0)]
    for v in range(2, n_vertices):
        k = min(int(rng.geometric(1.0 / mean_channels)), v)
        picks: set[int] = set()
        while len(picks) < k:
            picks.add(ends[int(rng.integers(len(ends)))])
        for u in sorted(picks):
            channels.append((v, u))
            ends.extend((v, u))
    n_ch = len(channels)
    capacity = np.round(median_capacity * np.exp(capacity_sigma * rng.standard_normal(n_ch)))
    src, dst, base, rate, bal = [], [], [], [], []
    for (a, b), cap in zip(channels, capacity):
        for x, y in ((a, b), (b, a)):
            src.append(x)
            dst.append(y)
            base.append(float(rng.choice([0.0, 1.0, 1.0, 1.0, 2.0])))
            rate.append(round(float(np.exp(np.log(100) + rng.standard_normal()))) / 1e6)
            bal.append(cap / 2)
    return ChannelGraph(list(range(n_vertices)), src, dst, base, rate, bal)

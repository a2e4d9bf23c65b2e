"""Directed multigraph model of a payment channel network snapshot.

Vertices are dense integers ``0..n-1``; the original keys (public keys or
fixture labels) are kept in ``ChannelGraph.labels``. Every directed arc has
its own id, policy and balance, so parallel channels stay distinct.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator, NamedTuple, Sequence

import numpy as np


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class ArcPolicy:
    """Base fee and balance in satoshis, fee rate as a proportion."""

    base_fee: float = 0.0
    fee_rate: float = 0.0
    balance: float = 0.0

    def __post_init__(self):
        for name in ("base_fee", "fee_rate", "balance"):
            value = getattr(self, name)
            if math.isnan(value) or value < 0:
                raise GraphError(f"{name} must be non-negative, got {value!r}")


class Arc(NamedTuple):
    id: int
    source: int
    target: int
    policy: ArcPolicy


def _csr(keys: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    # stable sort keeps arcs of one vertex in ascending arc-id order
    order = np.argsort(keys, kind="stable").astype(np.int64)
    counts = np.bincount(keys, minlength=n) if len(keys) else np.zeros(n, dtype=np.int64)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, order


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class ChannelGraph:
    """Immutable channel graph with out- and in-adjacency indices.

    Arc data lives in parallel numpy arrays indexed by arc id
    (``source``, ``target``, ``base_fee``, ``fee_rate``, ``balance``) so the
    search kernels can consume it without conversion.
    """

    def __init__(self, labels, source, target, base_fee, fee_rate, balance, *, transposed=False):
        self.labels: tuple = tuple(labels)
        self.source = _frozen(np.asarray(source, dtype=np.int64))
        self.target = _frozen(np.asarray(target, dtype=np.int64))
        self.base_fee = _frozen(np.asarray(base_fee, dtype=np.float64))
        self.fee_rate = _frozen(np.asarray(fee_rate, dtype=np.float64))
        self.balance = _frozen(np.asarray(balance, dtype=np.float64))
        self.transposed = transposed
        n = len(self.labels)
        self._index = {label: v for v, label in enumerate(self.labels)}
        if len(self._index) != n:
            raise GraphError("duplicate vertex labels")
        if np.any(self.source == self.target):
            bad = int(np.flatnonzero(self.source == self.target)[0])
            raise GraphError(f"self-loop arc {bad} at vertex {self.labels[self.source[bad]]!r}")
        if len(self.source) and (self.source.min() < 0 or max(self.source.max(), self.target.max()) >= n):
            raise GraphError("arc endpoint out of range")
        for name in ("base_fee", "fee_rate", "balance"):
            arr = getattr(self, name)
            if np.any(~(arr >= 0)):
                raise GraphError(f"negative or NaN {name} on some arc")
        self.out_indptr, self.out_arcs = (_frozen(a) for a in _csr(self.source, n))
        self.in_indptr, self.in_arcs = (_frozen(a) for a in _csr(self.target, n))

    @property
    def n_vertices(self) -> int:
        return len(self.labels)

    @property
    def n_arcs(self) -> int:
        return len(self.source)

    def __len__(self) -> int:
        return self.n_vertices

    def __repr__(self) -> str:
        kind = "transposed " if self.transposed else ""
        return f"<{kind}ChannelGraph |V|={self.n_vertices} |E|={self.n_arcs}>"

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChannelGraph):
            return NotImplemented
        return (
            self.labels == other.labels
            and self.transposed == other.transposed
            and all(
                np.array_equal(getattr(self, f), getattr(other, f))
                for f in ("source", "target", "base_fee", "fee_rate", "balance")
            )
        )

    __hash__ = None

    def vertex(self, label: Hashable) -> int:
        """Dense id for a vertex label."""
        try:
            return self._index[label]
        except (KeyError, TypeError):
            raise GraphError(f"unknown vertex {label!r}") from None

    def _check_vertex(self, v: int) -> None:
        if not (isinstance(v, (int, np.integer)) and 0 <= v < self.n_vertices):
            raise GraphError(f"unknown vertex id {v!r}")

    def policy(self, arc_id: int) -> ArcPolicy:
        return ArcPolicy(float(self.base_fee[arc_id]), float(self.fee_rate[arc_id]), float(self.balance[arc_id]))

    def arc(self, arc_id: int) -> Arc:
        return Arc(int(arc_id), int(self.source[arc_id]), int(self.target[arc_id]), self.policy(arc_id))

    def arcs(self) -> Iterator[Arc]:
        for i in range(self.n_arcs):
            yield self.arc(i)

    def out_arcs_of(self, v: int) -> list[int]:
        self._check_vertex(v)
        return self.out_arcs[self.out_indptr[v]:self.out_indptr[v + 1]].tolist()

    def in_arcs_of(self, v: int) -> list[int]:
        self._check_vertex(v)
        return self.in_arcs[self.in_indptr[v]:self.in_indptr[v + 1]].tolist()

    def out_degree(self, v: int) -> int:
        self._check_vertex(v)
        return int(self.out_indptr[v + 1] - self.out_indptr[v])

    def out_degrees(self) -> np.ndarray:
        return np.diff(self.out_indptr)

    def arcs_between(self, u: int, v: int) -> list[int]:
        return [a for a in self.out_arcs_of(u) if self.target[a] == v]

    def transpose(self) -> "ChannelGraph":
        """Same arcs, ids and policies with every direction reversed."""
        return ChannelGraph(
            self.labels, self.target, self.source, self.base_fee, self.fee_rate, self.balance,
            transposed=not self.transposed,
        )

    def with_policies(self, base_fee=None, fee_rate=None, balance=None) -> "ChannelGraph":
        return ChannelGraph(
            self.labels, self.source, self.target,
            self.base_fee if base_fee is None else base_fee,
            self.fee_rate if fee_rate is None else fee_rate,
            self.balance if balance is None else balance,
            transposed=self.transposed,
        )


def build_graph(
    arc_list: Iterable[tuple[Hashable, Hashable, ArcPolicy]],
    vertices: Sequence[Hashable] = (),
) -> ChannelGraph:
    """Build a graph from ``(source, target, policy)`` triples.

    Vertex ids are assigned densely, first the labels in ``vertices`` (which
    lets callers keep isolated vertices) and then endpoints in order of first
    appearance.
    """
    index: dict = {}
    for label in vertices:
        index.setdefault(label, len(index))
    src, dst, base, rate, bal = [], [], [], [], []
    for k, (u, v, policy) in enumerate(arc_list):
        if u == v:
            raise GraphError(f"arc {k} is a self-loop at {u!r}")
        if not isinstance(policy, ArcPolicy):
            policy = ArcPolicy(*policy)
        src.append(index.setdefault(u, len(index)))
        dst.append(index.setdefault(v, len(index)))
        base.append(policy.base_fee)
        rate.append(policy.fee_rate)
        bal.append(policy.balance)
    return ChannelGraph(list(index), src, dst, base, rate, bal)


def transpose_view(g: ChannelGraph) -> ChannelGraph:
    return g.transpose()


def out_degree(g: ChannelGraph, v: int) -> int:
    return g.out_degree(v)

"""Fee maps, hop-amount recurrences and the consistency check."""
from __future__ import annotations

import json
import math
from fractions import Fraction
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .graph import ArcPolicy, ChannelGraph, GraphError

TOL = 1e-9
INF = math.inf


class MissingFeeError(KeyError):
    """A tabulated fee map was asked for an (arc, amount) it does not define."""

    def __init__(self, arc, amount):
        self.arc = arc
        self.amount = amount
        super().__init__(f"no tabulated fee for arc {arc!r} at amount {amount!r}")

    def __str__(self):
        return self.args[0]


def fee_linear(policy: ArcPolicy, amount: float) -> float:
    if amount < 0:
        raise ValueError(f"amount must be non-negative, got {amount!r}")
    return policy.base_fee + policy.fee_rate * amount


def fee_barrier(policy: ArcPolicy, amount: float) -> float:
    """Linear fee while ``amount`` fits the balance, infinite beyond it."""
    fee = fee_linear(policy, amount)
    return fee if amount <= policy.balance else INF


class FeeMap:
    kind = "abstract"

    def fee(self, g: ChannelGraph, arc_id: int, amount: float) -> float:
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}()"


class LinearFeeMap(FeeMap):
    kind = "linear"

    def fee(self, g, arc_id, amount):
        if amount < 0:
            raise ValueError(f"amount must be non-negative, got {amount!r}")
        return float(g.base_fee[arc_id]) + float(g.fee_rate[arc_id]) * amount


class BarrierFeeMap(FeeMap):
    kind = "barrier"

    def fee(self, g, arc_id, amount):
        if amount < 0:
            raise ValueError(f"amount must be non-negative, got {amount!r}")
        if amount > g.balance[arc_id]:
            return INF
        return float(g.base_fee[arc_id]) + float(g.fee_rate[arc_id]) * amount


LINEAR = LinearFeeMap()
BARRIER = BarrierFeeMap()


class TabulatedFeeMap(FeeMap):
    """Finite ``(arc id, amount) -> fee`` lookup; anything else is an error."""

    kind = "tabulated"

    def __init__(self, entries: Iterable[tuple[int, float, float]] = ()):
        self._table: dict[int, list[tuple[float, float]]] = {}
        for arc_id, amount, fee in entries:
            self._table.setdefault(int(arc_id), []).append((float(amount), float(fee)))

    def __len__(self):
        return sum(len(v) for v in self._table.values())

    def entries(self) -> list[tuple[int, float, float]]:
        return [(arc, a, f) for arc, rows in sorted(self._table.items()) for a, f in rows]

    def amounts(self, arc_id: int) -> list[float]:
        return sorted(a for a, _ in self._table.get(arc_id, ()))

    def fee(self, g, arc_id, amount):
        for tab_amount, fee in self._table.get(int(arc_id), ()):
            if abs(tab_amount - amount) <= TOL:
                return fee
        raise MissingFeeError(int(arc_id), amount)

    @classmethod
    def from_json(cls, doc, g: ChannelGraph) -> "TabulatedFeeMap":
        """Load ``[{arc: [source, target], amount, fee}, ...]``.

        ``arc`` names an arc of ``g`` in payment direction by vertex label; an
        entry applies to every parallel arc between the pair.
        """
        if isinstance(doc, (str, bytes)):
            doc = json.loads(doc)
        if isinstance(doc, dict):
            doc = doc.get("entries", doc.get("fees"))
        if not isinstance(doc, list):
            raise ValueError("fee table must be a list of {arc, amount, fee} objects")
        entries = []
        for k, row in enumerate(doc):
            try:
                u, v = row["arc"]
                amount, fee = float(row["amount"]), float(row["fee"])
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"fee table entry {k} is malformed: {row!r}") from exc
            if fee < 0 or amount < 0:
                raise ValueError(f"fee table entry {k} has a negative value")
            arcs = g.arcs_between(g.vertex(u), g.vertex(v))
            if not arcs:
                raise GraphError(f"fee table entry {k}: no arc {u!r} -> {v!r}")
            entries.extend((a, amount, fee) for a in arcs)
        return cls(entries)

    def to_json(self, g: ChannelGraph) -> list[dict]:
        return [
            {"arc": [g.labels[g.source[a]], g.labels[g.target[a]]], "amount": amt, "fee": fee}
            for a, amt, fee in self.entries()
        ]


def amounts_recursive(path: Sequence[ArcPolicy], amount: float) -> list[float]:
    """Amounts ``a_1..a_{n+1}`` that must reach each vertex of the path.

    Walks back from the destination: ``a_{i-1} = a_i + fee(e_i, a_i)``.
    Evaluated in exact rational arithmetic and rounded once per entry.
    """
    if amount < 0:
        raise ValueError(f"amount must be non-negative, got {amount!r}")
    a = Fraction(amount)
    out = [a]
    for policy in reversed(path):
        a = a + Fraction(policy.base_fee) + Fraction(policy.fee_rate) * a
        out.append(a)
    out.reverse()
    return [float(x) for x in out]


def amounts_closed_form(path: Sequence[ArcPolicy], amount: float) -> list[float]:
    """Same sequence as :func:`amounts_recursive`, solved directly.

    With ``P_m`` the product of ``1 + rate`` over arcs ``m..n``::

        a_i = P_i * (a + sum_{m=i..n} base_m / P_m)

    Exact like the recursive form, so the two agree to the last bit.
    """
    if amount < 0:
        raise ValueError(f"amount must be non-negative, got {amount!r}")
    n = len(path)
    growth = [Fraction(1)] * (n + 1)
    for m in range(n - 1, -1, -1):
        growth[m] = growth[m + 1] * (1 + Fraction(path[m].fee_rate))
    a = Fraction(amount)
    out = []
    for i in range(n + 1):
        s = sum((Fraction(path[m].base_fee) / growth[m] for m in range(i, n)), Fraction(0))
        out.append(float(growth[i] * (a + s)))
    return out


def hop_amounts(g: ChannelGraph, arcs: Sequence[int], amount: float, fee_map: FeeMap = LINEAR) -> list[float]:
    """Recursive hop amounts for arc ids of ``g`` under any fee map."""
    out = [float(amount)]
    a = float(amount)
    for arc_id in reversed(arcs):
        a = a + fee_map.fee(g, arc_id, a)
        out.append(a)
    out.reverse()
    return out


@dataclass(frozen=True)
class ConsistencyVerdict:
    consistent: bool
    violation: Optional[tuple[float, float]] = None
    analytic: Optional[bool] = None
    checked: int = 0

    def __bool__(self):
        return self.consistent


def check_consistency(
    fee_map: FeeMap,
    g: ChannelGraph,
    arc_id: int,
    amount_pairs: Iterable[tuple[float, float]] = (),
) -> ConsistencyVerdict:
    """Test ``a + f(a) <= a' + f(a')`` for sampled pairs ``a <= a'``.

    Linear and barrier maps are also checked analytically: the derivative of
    the fee in the amount (the fee rate) must be at least -1.
    """
    analytic = None
    if fee_map.kind in ("linear", "barrier"):
        analytic = bool(g.fee_rate[arc_id] >= -1)
    checked = 0
    for a, a2 in amount_pairs:
        if a > a2:
            raise ValueError(f"pair ({a}, {a2}) is not ordered")
        lhs = a + fee_map.fee(g, arc_id, a)
        rhs = a2 + fee_map.fee(g, arc_id, a2)
        checked += 1
        if lhs == rhs:  # covers inf == inf
            continue
        if lhs > rhs + TOL:
            return ConsistencyVerdict(False, (a, a2), analytic, checked)
    return ConsistencyVerdict(analytic is not False, None, analytic, checked)


def tabulated_pairs(fee_map: TabulatedFeeMap, arc_id: int) -> list[tuple[float, float]]:
    """All ordered pairs of amounts tabulated for one arc."""
    amounts = fee_map.amounts(arc_id)
    return [(x, y) for i, x in enumerate(amounts) for y in amounts[i:]]

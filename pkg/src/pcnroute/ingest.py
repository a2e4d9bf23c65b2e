"""Loading lnd ``describegraph`` snapshots into a :class:`ChannelGraph`.

Each channel yields up to two arcs: ``node1_policy`` prices ``node1 -> node2``
and ``node2_policy`` the reverse. Arcs without a policy, or with a disabled
one, are dropped, then vertices left without any arc. Channel capacity is
split evenly between the two directions.
"""
from __future__ import annotations

import json
import logging
import os
from pathlib import Path
from dataclasses import asdict, dataclass

from .graph import ArcPolicy, ChannelGraph, build_graph

log = logging.getLogger(__name__)


class SnapshotError(ValueError):
    pass


@dataclass
class IngestReport:
    raw_vertices: int = 0
    raw_arcs: int = 0
    kept_vertices: int = 0
    kept_arcs: int = 0
    dropped_no_policy: int = 0
    dropped_disabled: int = 0
    dropped_isolated: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


def assign_balances(capacity) -> float:
    """Balance given to each direction of a channel: half its capacity."""
    if capacity < 0:
        raise SnapshotError(f"negative capacity {capacity!r}")
    return capacity / 2


def _int(value, what):
    # lnd serialises 64-bit integers as JSON strings
    if isinstance(value, bool):
        raise SnapshotError(f"{what}: expected an integer, got {value!r}")
    try:
        if isinstance(value, str):
            return int(value.strip())
        if isinstance(value, float) and value.is_integer():
            return int(value)
        if isinstance(value, int):
            return value
    except ValueError:
        pass
    raise SnapshotError(f"{what}: expected an integer, got {value!r}")


def _policy(raw, balance, where):
    """ArcPolicy for one direction, or a drop reason string."""
    if not raw:
        return "no_policy"
    if not isinstance(raw, dict):
        raise SnapshotError(f"{where}: policy must be an object")
    if raw.get("disabled", False) is True:
        return "disabled"
    if "fee_base_msat" not in raw or "fee_rate_milli_msat" not in raw:
        return "no_policy"
    base = _int(raw["fee_base_msat"], f"{where}.fee_base_msat")
    rate = _int(raw["fee_rate_milli_msat"], f"{where}.fee_rate_milli_msat")
    if base < 0 or rate < 0:
        raise SnapshotError(f"{where}: negative fee")
    return ArcPolicy(base / 1000, rate / 1_000_000, balance)


def load_snapshot(document) -> tuple[ChannelGraph, IngestReport]:
    """Parse a snapshot given as a dict or JSON text."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SnapshotError(f"malformed JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise SnapshotError("snapshot must be a JSON object with 'nodes' and 'edges'")
    nodes = document.get("nodes", [])
    edges = document.get("edges", [])
    if not isinstance(nodes, list) or not isinstance(edges, list):
        raise SnapshotError("'nodes' and 'edges' must be lists")

    keys = []
    seen = set()
    for k, node in enumerate(nodes):
        try:
            key = node["pub_key"]
        except (KeyError, TypeError):
            raise SnapshotError(f"nodes[{k}] has no pub_key") from None
        if key in seen:
            raise SnapshotError(f"duplicate pub_key {key!r}")
        seen.add(key)
        keys.append(key)

    report = IngestReport(raw_vertices=len(keys), raw_arcs=2 * len(edges))
    arcs = []
    for k, edge in enumerate(edges):
        where = f"edges[{k}]"
        try:
            n1, n2 = edge["node1_pub"], edge["node2_pub"]
            capacity = _int(edge["capacity"], f"{where}.capacity")
        except (KeyError, TypeError):
            raise SnapshotError(f"{where} lacks node1_pub/node2_pub/capacity") from None
        for key in (n1, n2):
            if key not in seen:
                raise SnapshotError(f"{where} references unknown pub_key {key!r}")
        if n1 == n2:
            raise SnapshotError(f"{where} is a self-channel")
        if capacity < 0:
            raise SnapshotError(f"{where} has negative capacity {capacity}")
        balance = assign_balances(capacity)
        for u, v, side in ((n1, n2, "node1_policy"), (n2, n1, "node2_policy")):
            policy = _policy(edge.get(side), balance, f"{where}.{side}")
            if policy == "no_policy":
                report.dropped_no_policy += 1
            elif policy == "disabled":
                report.dropped_disabled += 1
            else:
                arcs.append((u, v, policy))

    incident = {u for u, _, _ in arcs} | {v for _, v, _ in arcs}
    kept = [key for key in keys if key in incident]
    g = build_graph(arcs, vertices=kept)
    report.kept_vertices = g.n_vertices
    report.kept_arcs = g.n_arcs
    report.dropped_isolated = report.raw_vertices - report.kept_vertices
    log.info("ingested %d/%d vertices, %d/%d arcs", report.kept_vertices, report.raw_vertices,
             report.kept_arcs, report.raw_arcs)
    return g, report


def load_snapshot_file(path: str | os.PathLike) -> tuple[ChannelGraph, IngestReport]:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return load_snapshot(text)


def _policy_json(g, e):
    return {
        "fee_base_msat": str(round(float(g.base_fee[e]) * 1000)),
        "fee_rate_milli_msat": str(round(float(g.fee_rate[e]) * 1_000_000)),
        "disabled": False,
    }


def dump_snapshot(g: ChannelGraph) -> dict:
    """Serialise ``g`` back into the snapshot schema.

    Consecutive reverse arcs with equal balances are folded into one channel,
    which is how :func:`load_snapshot` emits them; any other arc becomes a
    one-sided channel. Fees are rounded to whole msat and ppm.
    """
    edges = []
    e = 0
    m = g.n_arcs
    while e < m:
        u, v = int(g.source[e]), int(g.target[e])
        edge = {
            "channel_id": str(len(edges)),
            "node1_pub": g.labels[u],
            "node2_pub": g.labels[v],
            "capacity": str(round(float(g.balance[e]) * 2)),
            "node1_policy": _policy_json(g, e),
            "node2_policy": None,
        }
        if (e + 1 < m and g.source[e + 1] == v and g.target[e + 1] == u
                and g.balance[e + 1] == g.balance[e]):
            edge["node2_policy"] = _policy_json(g, e + 1)
            e += 1
        edges.append(edge)
        e += 1
    return {"nodes": [{"pub_key": label} for label in g.labels], "edges": edges}


def fixture_path(name: str) -> Path:
    """Path of a bundled worked-example snapshot, e.g. ``fixture_path("fig3")``."""
    path = Path(__file__).with_name("fixtures") / f"{name}.json"
    if not path.exists():
        raise FileNotFoundError(f"no bundled fixture {name!r}")
    return path

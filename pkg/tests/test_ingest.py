import json

import pytest

from pcnroute.generators import gen_random_pcn
from pcnroute.graph import ArcPolicy, build_graph
from pcnroute.ingest import (
    SnapshotError, assign_balances, dump_snapshot, fixture_path, load_snapshot, load_snapshot_file,
)


def policy(base_msat=1000, rate=1, disabled=False):
    return {"fee_base_msat": str(base_msat), "fee_rate_milli_msat": str(rate), "disabled": disabled}


def channel(a, b, cap, p1=None, p2=None):
    return {"node1_pub": a, "node2_pub": b, "capacity": str(cap), "node1_policy": p1, "node2_policy": p2}


def snapshot(nodes, edges):
    return {"nodes": [{"pub_key": k} for k in nodes], "edges": edges}


def test_empty_snapshot():
    g, rep = load_snapshot({"nodes": [], "edges": []})
    assert g.n_vertices == 0 and g.n_arcs == 0
    assert all(v == 0 for v in rep.to_dict().values())


def test_one_sided_channel():
    g, rep = load_snapshot(snapshot(["a", "b"], [channel("a", "b", 1000, policy())]))
    assert g.n_arcs == 1
    assert (g.labels[g.source[0]], g.labels[g.target[0]]) == ("a", "b")
    assert rep.dropped_no_policy == 1 and rep.raw_arcs == 2 and rep.kept_arcs == 1


def test_node2_policy_governs_reverse():
    g, _ = load_snapshot(snapshot(["a", "b"], [channel("a", "b", 1000, None, policy(5000, 7))]))
    assert g.n_arcs == 1
    assert (g.labels[g.source[0]], g.labels[g.target[0]]) == ("b", "a")
    assert g.policy(0) == ArcPolicy(5, 7e-6, 500)


@pytest.mark.parametrize("cap,expected", [(4_000_000, 2_000_000), (0, 0), (1, 0.5)])
def test_assign_balances(cap, expected):
    assert assign_balances(cap) == expected


def test_units():
    g, _ = load_snapshot(snapshot(["a", "b"], [channel("a", "b", 10, policy(1000, 1))]))
    assert g.base_fee[0] == 1 and g.fee_rate[0] == 1e-6 and g.balance[0] == 5


def test_disabled_and_isolated_counted():
    doc = snapshot(["a", "b", "c", "d"], [
        channel("a", "b", 100, policy(), policy(disabled=True)),
        channel("c", "d", 100, policy(disabled=True), None),
    ])
    g, rep = load_snapshot(doc)
    assert list(g.labels) == ["a", "b"]
    assert (rep.dropped_disabled, rep.dropped_no_policy, rep.dropped_isolated) == (2, 1, 2)
    assert rep.raw_arcs == rep.kept_arcs + rep.dropped_disabled + rep.dropped_no_policy
    assert rep.raw_vertices == rep.kept_vertices + rep.dropped_isolated


def test_integers_as_json_numbers_or_strings():
    doc = snapshot(["a", "b"], [{"node1_pub": "a", "node2_pub": "b", "capacity": 8,
                                 "node1_policy": {"fee_base_msat": 2000, "fee_rate_milli_msat": 10}}])
    g, _ = load_snapshot(json.dumps(doc))
    assert g.policy(0) == ArcPolicy(2, 1e-5, 4)


@pytest.mark.parametrize("doc,match", [
    ("{not json", "malformed"),
    ([], "JSON object"),
    (snapshot(["a"], [channel("a", "zz", 1, policy())]), "unknown pub_key"),
    (snapshot(["a", "b"], [channel("a", "b", -1, policy())]), "negative capacity"),
    (snapshot(["a", "b"], [channel("a", "b", "lots", policy())]), "integer"),
    (snapshot(["a", "a"], []), "duplicate"),
    (snapshot(["a"], [channel("a", "a", 1, policy())]), "self-channel"),
    (snapshot(["a", "b"], [channel("a", "b", 1, policy(-1))]), "negative fee"),
    ({"nodes": [{}], "edges": []}, "pub_key"),
])
def test_parse_errors(doc, match):
    with pytest.raises(SnapshotError, match=match):
        load_snapshot(doc)


def test_filtering_idempotent_two_sided():
    rng_graph = gen_random_pcn(10, 0, seed=1)  # vertices only, arcs added below
    arcs = []
    for k, (u, v) in enumerate([(0, 1), (1, 2), (2, 3), (3, 0), (4, 1)]):
        p = ArcPolicy(k, k / 1000, 1000 * (k + 1))
        arcs += [(rng_graph.labels[u], rng_graph.labels[v], p), (rng_graph.labels[v], rng_graph.labels[u], p)]
    g = build_graph(arcs)
    g1, r1 = load_snapshot(dump_snapshot(g))
    g2, r2 = load_snapshot(dump_snapshot(g1))
    assert g1 == g2 and r1 == r2
    assert r2.dropped_no_policy == r2.dropped_disabled == r2.dropped_isolated == 0


def test_fixtures_reingest_identically():
    for name in ("fig1", "fig2", "fig3", "fig4", "fig5", "fig6"):
        g, _ = load_snapshot_file(fixture_path(name))
        again, rep = load_snapshot(dump_snapshot(g))
        assert again == g
        assert rep.dropped_isolated == 0


def test_no_kept_vertex_isolated():
    g, _ = load_snapshot_file(fixture_path("fig5"))
    deg = g.out_degrees() + (g.in_indptr[1:] - g.in_indptr[:-1])
    assert (deg > 0).all()


def test_missing_fixture():
    with pytest.raises(FileNotFoundError):
        fixture_path("fig99")

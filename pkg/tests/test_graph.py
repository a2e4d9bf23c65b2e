import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pcnroute.generators import gen_hub_spoke, gen_random_pcn
from pcnroute.graph import ArcPolicy, ChannelGraph, GraphError, build_graph, out_degree, transpose_view

P = ArcPolicy(1, 0.01, 100)


def test_empty_graph():
    g = build_graph([])
    assert g.n_vertices == 0 and g.n_arcs == 0
    assert transpose_view(g).n_arcs == 0


def test_two_arc_chain():
    g = build_graph([("s", "i", P), ("i", "t", P)])
    assert (g.n_vertices, g.n_arcs) == (3, 2)
    s = g.vertex("s")
    assert g.out_arcs_of(s) == [0]
    assert g.arc(0).target == g.vertex("i")


def test_fig2_has_path_but_no_direct_arc():
    g = build_graph([("v_i", "v_k", P), ("v_k", "v_j", P)])
    vi, vk, vj = (g.vertex(x) for x in ("v_i", "v_k", "v_j"))
    assert g.arcs_between(vi, vj) == []
    assert g.arcs_between(vi, vk) and g.arcs_between(vk, vj)


def test_self_loop_rejected():
    with pytest.raises(GraphError):
        build_graph([("a", "a", P)])


@pytest.mark.parametrize("field", ["base_fee", "fee_rate", "balance"])
def test_negative_policy_rejected(field):
    with pytest.raises(GraphError):
        ArcPolicy(**{field: -1.0})
    kwargs = {f: np.zeros(1) for f in ("base_fee", "fee_rate", "balance")}
    kwargs[field] = np.array([-1.0])
    with pytest.raises(GraphError):
        ChannelGraph([0, 1], [0], [1], **kwargs)


def test_parallel_arcs_are_distinct():
    g = build_graph([("a", "b", P), ("a", "b", ArcPolicy(2, 0, 5))])
    assert g.n_arcs == 2
    assert g.arcs_between(0, 1) == [0, 1]
    assert g.policy(1) == ArcPolicy(2, 0, 5)


def test_fig3_transpose_reverses_all_arcs(fig3):
    gt = transpose_view(fig3)
    got = {(gt.labels[a.source], gt.labels[a.target]) for a in gt.arcs()}
    assert got == {("i", "s"), ("j", "s"), ("t", "i"), ("t", "j")}
    for a in fig3.arcs():
        b = gt.arc(a.id)
        assert (b.source, b.target, b.policy) == (a.target, a.source, a.policy)


def test_transpose_involution(fig3):
    assert transpose_view(transpose_view(fig3)) == fig3
    assert transpose_view(fig3) != fig3


def test_out_degree(fig3):
    assert out_degree(fig3, fig3.vertex("s")) == 2
    assert out_degree(fig3, fig3.vertex("t")) == 0
    with pytest.raises(GraphError):
        out_degree(fig3, 99)
    with pytest.raises(GraphError):
        fig3.vertex("nope")


def test_isolated_vertex_degree():
    g = build_graph([("a", "b", P)], vertices=["lonely"])
    assert out_degree(g, g.vertex("lonely")) == 0


def test_hub_degree():
    g = gen_hub_spoke(7)
    assert out_degree(g, g.vertex("r")) == 7


def test_immutable(fig3):
    with pytest.raises(ValueError):
        fig3.balance[0] = 0.0
    with pytest.raises(ValueError):
        fig3.out_arcs[0] = 3


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 9), st.data())
def test_adjacency_invariants(n, data):
    m = data.draw(st.integers(0, n * (n - 1)))
    g = gen_random_pcn(n, m, seed=data.draw(st.integers(0, 2**32 - 1)))
    assert int(g.out_degrees().sum()) == g.n_arcs
    for v in range(n):
        assert all(g.source[e] == v for e in g.out_arcs_of(v))
        assert all(g.target[e] == v for e in g.in_arcs_of(v))
    gt = g.transpose()
    for e in range(m):
        assert (gt.source[e], gt.target[e]) == (g.target[e], g.source[e])
        assert gt.policy(e) == g.policy(e)
    assert sorted(gt.in_arcs.tolist()) == list(range(m))

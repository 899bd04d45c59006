import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import brute_min_cut, graphs
from edp3 import MultiGraph, PathSeq, augment, bounded_max_flow, cut_edges, decompose, maximal_min_cut
from edp3.flow import BalancedArcSet, FlowError


@st.composite
def flow_cases(draw):
    n, edges = draw(graphs(max_nodes=7, max_edges=14, min_nodes=2))
    s = draw(st.integers(0, n - 1))
    t = draw(st.integers(0, n - 1).filter(lambda x: x != s))
    r = draw(st.integers(1, 4))
    return n, edges, s, t, r


@given(flow_cases())
def test_value_is_bounded_min_cut(case):
    n, edges, s, t, r = case
    g = MultiGraph(n, edges)
    F, cut = bounded_max_flow(g, s, t, r)
    lam = brute_min_cut(n, edges, s, t)
    assert F.value == min(r, lam)
    assert F.is_balanced() and F.is_reverse_free()
    if lam < r:
        assert cut is not None and s in cut and t not in cut
        assert len(cut_edges(g, cut)) == lam
    else:
        assert cut is None


@given(flow_cases())
def test_decomposition(case):
    n, edges, s, t, r = case
    g = MultiGraph(n, edges)
    F, _ = bounded_max_flow(g, s, t, r)
    st_paths, ts_paths, cycles = decompose(F)
    assert len(st_paths) == F.value and not ts_paths
    used = np.concatenate([p.edges for p in st_paths + cycles] or [np.zeros(0, int)])
    assert len(set(used.tolist())) == len(used) == len(F)
    for p in st_paths:
        assert p.endpoints == (s, t)
        PathSeq.from_edges(g, s, p.edges)
    for c in cycles:
        assert c.nodes[0] == c.nodes[-1]


@given(flow_cases())
def test_maximal_cut_contains_minimal(case):
    n, edges, s, t, r = case
    g = MultiGraph(n, edges)
    lam = brute_min_cut(n, edges, s, t)
    F, small = bounded_max_flow(g, s, t, lam + 1)
    big = maximal_min_cut(g, s, t, F)
    assert set(small.tolist()) <= set(big.tolist())
    assert len(cut_edges(g, big)) == lam
    assert t not in big


def test_maximal_cut_needs_maximum():
    g = MultiGraph(2, [(0, 1), (0, 1)])
    F, _ = bounded_max_flow(g, 0, 1, 1)
    with pytest.raises(FlowError):
        maximal_min_cut(g, 0, 1, F)


def test_augment_by_hand():
    g = MultiGraph(4, [(0, 1), (1, 3), (0, 2), (2, 3), (1, 2)])
    F = BalancedArcSet(g, 0, 3)
    F = augment(F, PathSeq([0, 1, 2, 3], [0, 4, 3]))
    assert F.value == 1
    # second path must cancel the 1->2 arc
    G = augment(F, PathSeq([0, 2, 1, 3], [2, 4, 1]))
    assert G.value == 2 and G.is_balanced() and G.is_reverse_free()
    assert len(G) == 4  # edge 4 cancelled
    with pytest.raises(FlowError):
        augment(G, PathSeq([0, 1, 3], [0, 1]))
    assert F.value == 1  # augment returns a new set


def test_from_arcs_rejects_antiparallel():
    g = MultiGraph(2, [(0, 1)])
    a = g.arc(0, 0)
    with pytest.raises(FlowError):
        BalancedArcSet.from_arcs(g, 0, 1, [a, g.arc(0, 1)])

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cut1, eulerian_instances, par3, star
from edp3 import (
    GenConfig, Instance, Solution, bench_config, brute_force_solve, cut_condition_check, cut_edges,
    demand_crossing, gen_instance, is_eulerian, solve, verify_solution,
)
from edp3.gen import inflate
from edp3.io import render_instance


def test_brute_force_named():
    assert verify_solution(par3(), brute_force_solve(par3()))
    assert brute_force_solve(cut1()) is None
    assert verify_solution(star(), brute_force_solve(star()))


def test_brute_force_needs_search():
    # pair 1 has several routes and only some leave room for pair 2
    inst = Instance.build(4, [(0, 3), (0, 1), (1, 3), (1, 2), (2, 3), (0, 2)],
                          [(0, 3), (1, 2), (0, 0)])
    sol = brute_force_solve(inst)
    assert sol is not None and verify_solution(inst, sol)


def test_brute_force_size_guard():
    inst = Instance.build(2, [(0, 1)] * 20, [(0, 0)] * 3)
    with pytest.raises(ValueError):
        brute_force_solve(inst)


def test_cut_check_named():
    assert cut_condition_check(par3()) is None
    w = cut_condition_check(cut1())
    assert (w.cut_capacity, w.demand_crossing) == (1, 3)
    assert w.cut_set.tolist() in ([0], [1])


@settings(max_examples=300)
@given(eulerian_instances(max_nodes=7, max_edges=10))
def test_oracles_agree(inst):
    sol = brute_force_solve(inst)
    w = cut_condition_check(inst)
    assert (sol is None) == (w is not None)
    if sol is not None:
        assert verify_solution(inst, sol)
    else:
        assert len(cut_edges(inst.graph, w.cut_set)) == w.cut_capacity < w.demand_crossing
        assert demand_crossing(inst, w.cut_set) == w.demand_crossing


@given(st.integers(0, 10**6), st.sampled_from(["feasible", "random"]), st.integers(2, 10))
def test_gen_is_eulerian_and_deterministic(seed, mode, n):
    cfg = GenConfig(nodes=n, cycles=2, edges=8, seed=seed, mode=mode)
    a, b = gen_instance(cfg), gen_instance(cfg)
    assert render_instance(a) == render_instance(b)
    assert is_eulerian(a)
    assert len(a.demands) == 3


@settings(max_examples=60)
@given(st.integers(0, 10**6), st.integers(2, 7))
def test_feasible_mode_is_feasible(seed, n):
    inst = gen_instance(GenConfig(nodes=n, cycles=1, trail_max=3, cycle_max=3, seed=seed))
    if inst.graph.num_edges <= 14:
        assert brute_force_solve(inst) is not None


def test_clusters_and_span():
    inst = gen_instance(GenConfig(nodes=40, edges=80, clusters=4, bridges=0, seed=3, mode="random"))
    assert is_eulerian(inst)
    inst = gen_instance(GenConfig(nodes=1000, cycles=20, cycle_min=10, cycle_max=10, span=5, seed=1))
    _, us, vs = inst.graph.edge_arrays()
    gap = np.abs(us - vs)
    gap = np.minimum(gap, 1000 - gap)
    # closed walks jump back to their start once
    assert np.mean(gap <= 5) > 0.85


def test_bad_configs():
    for kw in ({"mode": "nope"}, {"nodes": 1}, {"trail_min": 3, "trail_max": 2},
               {"cycle_min": 1}, {"span": -1}, {"clusters": 5}):
        with pytest.raises(ValueError):
            GenConfig(**kw)


def test_bench_config_size():
    for m in (2**12, 2**14):
        inst = gen_instance(bench_config(m))
        assert abs(inst.graph.num_edges - m) < 0.05 * m
        assert is_eulerian(inst)


def test_inflate_keeps_verdict():
    for inst in (par3(), cut1(), star()):
        big = inflate(inst, 3000, seed=1)
        assert is_eulerian(big) and big.graph.num_edges >= 3000
        assert isinstance(solve(big), Solution) == (brute_force_solve(inst) is not None)

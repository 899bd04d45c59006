import itertools
import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from edp3 import Instance, MultiGraph

DATA = Path(__file__).parent / "data"

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def make_eulerian(n, edges, pairs):
    """Pair up the odd nodes of G + H with extra edges, in node order."""
    deg = np.zeros(n, int)
    for u, v in list(edges) + [p for p in pairs if p[0] != p[1]]:
        deg[u] += 1
        deg[v] += 1
    odd = np.flatnonzero(deg % 2).tolist()
    return list(edges) + list(zip(odd[0::2], odd[1::2]))


@st.composite
def graphs(draw, max_nodes=7, max_edges=12, min_nodes=2):
    n = draw(st.integers(min_nodes, max_nodes))
    pair = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] != e[1])
    edges = draw(st.lists(pair, max_size=max_edges))
    return n, edges


@st.composite
def eulerian_instances(draw, max_nodes=7, max_edges=12):
    n, edges = draw(graphs(max_nodes, max_edges))
    node = st.integers(0, n - 1)
    pairs = draw(st.lists(st.tuples(node, node), min_size=3, max_size=3))
    return Instance.build(n, make_eulerian(n, edges, pairs), pairs)


def brute_min_cut(n, edges, s, t):
    """Minimum s-t cut by enumerating every node set containing s but not t."""
    others = [v for v in range(n) if v not in (s, t)]
    best = len(edges)
    for k in range(len(others) + 1):
        for extra in itertools.combinations(others, k):
            side = {s, *extra}
            best = min(best, sum((u in side) != (v in side) for u, v in edges))
    return best


def load_corpus():
    items = json.loads((DATA / "critical_corpus.json").read_text())
    out = []
    for item in items:
        inst = Instance(MultiGraph(item["n"], [tuple(e) for e in item["edges"]]),
                        [tuple(p) for p in item["pairs"]])
        out.append((item, inst))
    return out


@pytest.fixture(scope="session")
def critical_corpus():
    return load_corpus()


# named instances
def par3():
    return Instance.build(2, [(0, 1)] * 3, [(0, 1)] * 3)


def cut1():
    return Instance.build(2, [(0, 1)], [(0, 1)] * 3)


def star():
    k4 = [(a, b) for a, b in itertools.combinations(range(4), 2)]
    return Instance.build(4, k4, [(0, 1), (0, 2), (0, 3)])


# acceptance lines, printed after the run
ACCEPTANCE: dict[int, str] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}"
    ACCEPTANCE[criterion] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])

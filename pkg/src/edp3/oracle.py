"""Exhaustive reference procedures for small instances.

Both work from the plain edge list and share no code with the solver.
"""
from __future__ import annotations

from collections import Counter, deque

import numpy as np

from .graph import Instance, PathSeq, Solution, Witness


def _connected(cnt: Counter, adj: dict, s: int, t: int) -> bool:
    if s == t:
        return True
    seen = {s}
    queue = deque([s])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in seen and cnt[(min(x, y), max(x, y))] > 0:
                if y == t:
                    return True
                seen.add(y)
                queue.append(y)
    return False


def _bfs_path(cnt: Counter, adj: dict, s: int, t: int) -> list[int] | None:
    prev = {s: None}
    queue = deque([s])
    while queue:
        x = queue.popleft()
        if x == t:
            path = []
            while x is not None:
                path.append(x)
                x = prev[x]
            return path[::-1]
        for y in adj[x]:
            if y not in prev and cnt[(min(x, y), max(x, y))] > 0:
                prev[y] = x
                queue.append(y)
    return None


def _simple_paths(cnt: Counter, adj: dict, s: int, t: int):
    path = [s]
    on_path = {s}

    def rec(x):
        if x == t:
            yield list(path)
            return
        for y in adj[x]:
            if y in on_path or cnt[(min(x, y), max(x, y))] == 0:
                continue
            path.append(y)
            on_path.add(y)
            yield from rec(y)
            path.pop()
            on_path.discard(y)

    yield from rec(s)


def brute_force_solve(inst: Instance, max_edges: int = 18) -> Solution | None:
    """Exact search: a Solution, or None when no three edge-disjoint paths exist.

    Parallel edges are interchangeable, so the search works on edge
    multiplicities and enumerates node-simple paths pair by pair; the last
    pair only needs connectivity in what is left.
    """
    edges = inst.graph.edges()
    if len(edges) > max_edges:
        raise ValueError(f"brute force limited to {max_edges} edges, got {len(edges)}")
    ids: dict[tuple[int, int], list[int]] = {}
    adj: dict[int, set[int]] = {v: set() for v in range(inst.graph.n)}
    for e, u, v in edges:
        ids.setdefault((min(u, v), max(u, v)), []).append(e)
        adj[u].add(v)
        adj[v].add(u)
    adj = {v: sorted(ws) for v, ws in adj.items()}
    cnt = Counter({k: len(v) for k, v in ids.items()})
    pairs = [(d.s, d.t) for d in inst.demands]

    def step(cnt: Counter, path: list[int], delta: int) -> None:
        for x, y in zip(path, path[1:]):
            cnt[(min(x, y), max(x, y))] += delta

    def rec(i: int) -> list[list[int]] | None:
        if i == len(pairs):
            return []
        if not all(_connected(cnt, adj, s, t) for s, t in pairs[i:]):
            return None
        s, t = pairs[i]
        if s == t:
            rest = rec(i + 1)
            return None if rest is None else [[s]] + rest
        if i == len(pairs) - 1:
            return [_bfs_path(cnt, adj, s, t)]
        for path in _simple_paths(cnt, adj, s, t):
            step(cnt, path, -1)
            rest = rec(i + 1)
            step(cnt, path, +1)
            if rest is not None:
                return [path] + rest
        return None

    found = rec(0)
    if found is None:
        return None
    pool = {k: list(v) for k, v in ids.items()}
    paths = []
    for nodes in found:
        es = [pool[(min(x, y), max(x, y))].pop() for x, y in zip(nodes, nodes[1:])]
        paths.append(PathSeq(np.array(nodes), np.array(es, dtype=np.int64)))
    return Solution(paths)


def cut_condition_check(inst: Instance, max_nodes: int = 20) -> Witness | None:
    """None if d_G(U) >= d_H(U) for every node set U, else the smallest violator."""
    n = inst.graph.n
    if n > max_nodes:
        raise ValueError(f"cut enumeration limited to {max_nodes} nodes, got {n}")
    if n < 2:
        return None
    _, us, vs = inst.graph.edge_arrays()
    # every cut up to complementation: subsets of the first n-1 nodes
    sets = np.arange(1, 1 << (n - 1), dtype=np.int64)
    d_g = np.zeros(len(sets), np.int64)
    for u, v in zip(us.tolist(), vs.tolist()):
        d_g += ((sets >> u) ^ (sets >> v)) & 1
    d_h = np.zeros(len(sets), np.int64)
    for d in inst.demands:
        d_h += ((sets >> d.s) ^ (sets >> d.t)) & 1
    bad = np.flatnonzero(d_g < d_h)
    if not len(bad):
        return None
    sizes = np.array([bin(int(x)).count("1") for x in sets[bad]])
    sizes = np.minimum(sizes, n - sizes)
    best = int(bad[np.argmin(sizes)])
    bits = int(sets[best])
    members = [v for v in range(n) if bits >> v & 1]
    if 2 * len(members) > n:
        members = [v for v in range(n) if not bits >> v & 1]
    return Witness(np.array(members, dtype=np.int64), int(d_g[best]), int(d_h[best]))

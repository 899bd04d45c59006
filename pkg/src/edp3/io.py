"""Text formats.

Instance file (node ids 1-based)::

    c optional comment lines, anywhere
    p edp <n> <m>
    e <u> <v>        (m lines)
    d <s> <t>        (exactly 3 lines)

Solution file: three lines, each the space-separated node ids of one path in
demand order.
"""
from __future__ import annotations

from collections import defaultdict

import numpy as np

from .graph import DemandPair, GraphError, Instance, MultiGraph, PathSeq, Solution, Witness


class FormatError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        super().__init__(f"line {line}: {msg}" if line is not None else msg)
        self.line = line


def _ints(parts: list[str], count: int, lineno: int) -> list[int]:
    if len(parts) != count:
        raise FormatError(f"expected {count} integers", lineno)
    try:
        return [int(x) for x in parts]
    except ValueError:
        raise FormatError("non-integer field", lineno) from None


def parse_instance(text: str) -> Instance:
    n = m = None
    us, vs, pairs = [], [], []
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        tag = parts[0]
        if tag == "p":
            if n is not None:
                raise FormatError("duplicate header", lineno)
            if len(parts) != 4 or parts[1] != "edp":
                raise FormatError("header must be 'p edp <n> <m>'", lineno)
            n, m = _ints(parts[2:], 2, lineno)
            if n < 1 or m < 0:
                raise FormatError("bad node or edge count", lineno)
            continue
        if n is None:
            raise FormatError("data before header", lineno)
        if tag == "e":
            u, v = _ints(parts[1:], 2, lineno)
            if not (1 <= u <= n and 1 <= v <= n):
                raise FormatError(f"node id out of range 1..{n}", lineno)
            if u == v:
                raise FormatError(f"loop at node {u}", lineno)
            us.append(u - 1)
            vs.append(v - 1)
        elif tag == "d":
            s, t = _ints(parts[1:], 2, lineno)
            if not (1 <= s <= n and 1 <= t <= n):
                raise FormatError(f"node id out of range 1..{n}", lineno)
            pairs.append((s - 1, t - 1))
        else:
            raise FormatError(f"unknown line type {tag!r}", lineno)
    if n is None:
        raise FormatError("missing header")
    if len(us) != m:
        raise FormatError(f"header announces {m} edges, found {len(us)}")
    if len(pairs) != 3:
        raise FormatError(f"expected exactly 3 demand lines, found {len(pairs)}")
    g = MultiGraph.from_arrays(n, np.array(us, np.int64), np.array(vs, np.int64))
    return Instance(g, [DemandPair(s, t, i + 1) for i, (s, t) in enumerate(pairs)])


def read_instance(path) -> Instance:
    with open(path) as fh:
        return parse_instance(fh.read())


def render_instance(inst: Instance, comment: str | None = None) -> str:
    _, us, vs = inst.graph.edge_arrays()
    lines = [f"c {comment}"] if comment else []
    lines.append(f"p edp {inst.graph.n} {len(us)}")
    lines.extend(f"e {u} {v}" for u, v in zip((us + 1).tolist(), (vs + 1).tolist()))
    lines.extend(f"d {d.s + 1} {d.t + 1}" for d in inst.demands)
    return "\n".join(lines) + "\n"


def render_solution(sol: Solution) -> str:
    return "".join(" ".join(map(str, (p.nodes + 1).tolist())) + "\n" for p in sol.paths)


def render_witness(w: Witness) -> str:
    ids = " ".join(map(str, (w.cut_set + 1).tolist()))
    return f"U = {ids}\ndG = {w.cut_capacity}\ndH = {w.demand_crossing}\n"


def parse_solution(text: str, n: int) -> list[list[int]]:
    paths = []
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        try:
            nodes = [int(x) - 1 for x in parts]
        except ValueError:
            raise FormatError("non-integer node id", lineno) from None
        if any(not 0 <= v < n for v in nodes):
            raise FormatError(f"node id out of range 1..{n}", lineno)
        paths.append(nodes)
    return paths


def solution_from_nodes(g: MultiGraph, node_paths: list[list[int]]) -> Solution | None:
    """Attach edge ids to node sequences, or None if some step has no free edge.

    Parallel edges are interchangeable, so taking any unused copy per step is
    exact.
    """
    free: dict[tuple[int, int], list[int]] = defaultdict(list)
    for e, u, v in g.edges():
        free[(min(u, v), max(u, v))].append(e)
    paths = []
    for nodes in node_paths:
        if not nodes:
            return None
        es = []
        for x, y in zip(nodes, nodes[1:]):
            pool = free.get((min(x, y), max(x, y)))
            if not pool:
                return None
            es.append(pool.pop())
        paths.append(PathSeq(np.array(nodes), np.array(es, dtype=np.int64)))
    return Solution(paths)


__all__ = [
    "FormatError", "GraphError", "parse_instance", "parse_solution", "read_instance",
    "render_instance", "render_solution", "render_witness", "solution_from_nodes",
]

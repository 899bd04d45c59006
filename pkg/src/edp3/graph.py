"""Undirected multigraphs with stable edge ids, demand pairs and solutions."""
from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import _kernels as K


class GraphError(ValueError):
    """Malformed graph or instance data."""


class NotEulerianError(ValueError):
    def __init__(self, node: int):
        super().__init__(f"instance is not Eulerian: node {node} has odd degree in G + H")
        self.node = node


def _grow(arr: np.ndarray, size: int, fill) -> np.ndarray:
    out = np.full(size, fill, dtype=arr.dtype)
    out[: len(arr)] = arr
    return out


class MultiGraph:
    """Undirected multigraph on nodes ``0..n-1``; loops are rejected.

    Edge ids are dense and never reused: ``remove_edge`` only tombstones.
    The array bundle in ``_g`` is what the compiled kernels operate on.
    """

    def __init__(self, n: int = 0, edges: Iterable[tuple[int, int]] = (), *,
                 reserve_nodes: int = 0, reserve_edges: int = 0):
        pairs = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        self._init_arrays(n, pairs[:, 0], pairs[:, 1], reserve_nodes, reserve_edges)

    @classmethod
    def from_arrays(cls, n: int, us, vs, *, reserve_nodes: int = 0,
                    reserve_edges: int = 0) -> "MultiGraph":
        g = cls.__new__(cls)
        g._init_arrays(n, np.asarray(us, np.int64), np.asarray(vs, np.int64),
                       reserve_nodes, reserve_edges)
        return g

    def _init_arrays(self, n, us, vs, reserve_nodes, reserve_edges):
        if n < 0:
            raise GraphError("node count must be non-negative")
        if len(us) != len(vs):
            raise GraphError("endpoint arrays differ in length")
        if len(us):
            if min(us.min(), vs.min()) < 0 or max(us.max(), vs.max()) >= n:
                raise GraphError("edge endpoint out of range")
            loops = np.flatnonzero(us == vs)
            if len(loops):
                raise GraphError(f"loop at node {int(us[loops[0]])} (edge {int(loops[0])})")
        m = len(us)
        node_cap = n + max(reserve_nodes, 2)
        edge_cap = m + max(reserve_edges, 4)
        self._g = K.build_csr(n, us.astype(np.int64), vs.astype(np.int64),
                              node_cap, edge_cap, 2 * edge_cap)
        self._kills: list[np.ndarray] = []
        self._depth = 0

    # ------------------------------------------------------------ queries
    @property
    def n(self) -> int:
        return int(self._g[0][K.N_NODES])

    @property
    def m(self) -> int:
        """Number of edge ids issued so far (dead ones included)."""
        return int(self._g[0][K.N_EDGES])

    @property
    def num_edges(self) -> int:
        return int(np.count_nonzero(self._g[11][: self.m]))

    def __repr__(self) -> str:
        return f"MultiGraph(n={self.n}, edges={self.num_edges})"

    def endpoints(self, e: int) -> tuple[int, int]:
        return int(self._g[9][e]), int(self._g[10][e])

    def is_alive(self, e: int) -> bool:
        return 0 <= e < self.m and bool(self._g[11][e])

    def other(self, e: int, v: int) -> int:
        u, w = self.endpoints(e)
        if v == u:
            return w
        if v == w:
            return u
        raise GraphError(f"node {v} is not an endpoint of edge {e}")

    def incident(self, v: int) -> list[tuple[int, int]]:
        """``(edge_id, other_endpoint)`` for each live edge at ``v``."""
        self._check_node(v)
        g = self._g
        out = []
        p = K.first_arc(g, v)
        while p >= 0:
            if not g[8][p]:
                out.append((int(g[7][p]), int(g[5][p])))
            p = K.next_arc(g, p, v)
        return out

    def edges(self) -> list[tuple[int, int, int]]:
        ids, us, vs = self.edge_arrays()
        return list(zip(ids.tolist(), us.tolist(), vs.tolist()))

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        m = self.m
        ids = np.flatnonzero(self._g[11][:m])
        return ids, self._g[9][ids].astype(np.int64), self._g[10][ids].astype(np.int64)

    def arc(self, e: int, tail: int) -> int:
        """Position of the arc of edge ``e`` that leaves ``tail``."""
        p = int(self._g[12][e])
        if self._g[5][p] == tail:
            p = int(self._g[6][p])
        if self._g[5][int(self._g[6][p])] != tail:
            raise GraphError(f"node {tail} is not an endpoint of edge {e}")
        return p

    def arc_info(self, a: int) -> tuple[int, int, int]:
        """``(edge_id, tail, head)`` of arc position ``a``."""
        g = self._g
        return int(g[7][a]), int(g[5][g[6][a]]), int(g[5][a])

    @property
    def num_positions(self) -> int:
        return int(self._g[0][K.N_POS])

    def _check_node(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise GraphError(f"invalid node id {v}")

    # ------------------------------------------------------------ mutation
    def reserve(self, nodes: int = 0, edges: int = 0) -> None:
        """Make room for ``nodes`` more nodes and ``edges`` more edges."""
        g = list(self._g)
        meta = g[0]
        need_n = int(meta[K.N_NODES]) + nodes
        if need_n > len(g[1]):
            cap = max(need_n, 2 * len(g[1]))
            g[1] = _grow(g[1], cap, 0)
            g[2] = _grow(g[2], cap, 0)
            g[3] = _grow(g[3], cap, -1)
        need_e = int(meta[K.N_EDGES]) + edges
        if need_e > len(g[9]):
            cap = max(need_e, 2 * len(g[9]))
            for i, fill in ((9, 0), (10, 0), (11, False), (12, 0)):
                g[i] = _grow(g[i], cap, fill)
        need_p = int(meta[K.N_POS]) + 2 * edges
        if need_p > len(g[5]):
            cap = max(need_p, 2 * len(g[5]))
            for i, fill in ((4, -1), (5, 0), (6, 0), (7, 0), (8, False)):
                g[i] = _grow(g[i], cap, fill)
        self._g = tuple(g)

    def add_node(self) -> int:
        self.reserve(nodes=1)
        return int(K.add_node(self._g))

    def add_edge(self, u: int, v: int) -> int:
        self._check_node(u)
        self._check_node(v)
        if u == v:
            raise GraphError(f"loop at node {u}")
        self.reserve(edges=1)
        return int(K.add_edge(self._g, u, v))

    def remove_edge(self, e: int) -> None:
        if not self.is_alive(e):
            raise GraphError(f"edge {e} is not present")
        self.remove_edges(np.array([e]))

    def remove_edges(self, ids) -> None:
        """Tombstone edges (already dead ids are ignored)."""
        ids = np.asarray(ids, dtype=np.int64)
        g = self._g
        ids = ids[g[11][ids]]
        if self._depth:
            self._kills.append(ids)
        g[11][ids] = False
        pos = g[12][ids]
        g[8][pos] = True
        g[8][g[6][pos]] = True

    @contextmanager
    def scratch(self) -> Iterator["MultiGraph"]:
        """Undo every node/edge addition and removal made inside the block."""
        n0, m0 = self.n, self.m
        mark = len(self._kills)
        self._depth += 1
        try:
            yield self
        finally:
            self._depth -= 1
            g = self._g
            while len(self._kills) > mark:
                ids = self._kills.pop()
                ids = ids[ids < m0]
                g[11][ids] = True
                pos = g[12][ids]
                g[8][pos] = False
                g[8][g[6][pos]] = False
            K.rollback(g, n0, m0)

    def copy(self, *, reserve_nodes: int = 0, reserve_edges: int = 0) -> "MultiGraph":
        """Independent copy with all edges packed into the CSR block."""
        m = self.m
        out = MultiGraph.from_arrays(self.n, self._g[9][:m], self._g[10][:m],
                                     reserve_nodes=reserve_nodes, reserve_edges=reserve_edges)
        dead = np.flatnonzero(~self._g[11][:m])
        if len(dead):
            out.remove_edges(dead)
        return out


@dataclass(frozen=True)
class DemandPair:
    s: int
    t: int
    index: int = 0

    @property
    def trivial(self) -> bool:
        return self.s == self.t


@dataclass
class Instance:
    graph: MultiGraph
    demands: list[DemandPair]

    def __post_init__(self):
        self.demands = [d if isinstance(d, DemandPair) else DemandPair(int(d[0]), int(d[1]), i + 1)
                        for i, d in enumerate(self.demands)]
        if len(self.demands) > 3:
            raise GraphError("at most three demand pairs are supported")
        for d in self.demands:
            for v in (d.s, d.t):
                if not 0 <= v < self.graph.n:
                    raise GraphError(f"demand endpoint {v} is not a node")

    @classmethod
    def build(cls, n: int, edges: Iterable[tuple[int, int]],
              pairs: Sequence[tuple[int, int]]) -> "Instance":
        return cls(MultiGraph(n, edges), [DemandPair(s, t, i + 1) for i, (s, t) in enumerate(pairs)])


@dataclass
class PathSeq:
    """A walk given by its node sequence and the edge ids between them."""
    nodes: np.ndarray
    edges: np.ndarray = field(default_factory=lambda: np.zeros(0, np.int64))

    def __post_init__(self):
        self.nodes = np.asarray(self.nodes, dtype=np.int64)
        self.edges = np.asarray(self.edges, dtype=np.int64)

    @classmethod
    def empty(cls, v: int) -> "PathSeq":
        return cls(np.array([v]), np.zeros(0, np.int64))

    @classmethod
    def from_edges(cls, g: MultiGraph, start: int, edges) -> "PathSeq":
        edges = np.asarray(edges, dtype=np.int64)
        nodes, ok = K.walk_nodes(g._g[9], g._g[10], edges, start)
        if not ok:
            raise GraphError("edge sequence is not a walk")
        return cls(nodes, edges)

    @property
    def endpoints(self) -> tuple[int, int]:
        return int(self.nodes[0]), int(self.nodes[-1])

    def __len__(self) -> int:
        return len(self.edges)

    def reversed(self) -> "PathSeq":
        return PathSeq(self.nodes[::-1].copy(), self.edges[::-1].copy())

    def simplified(self, n: int) -> "PathSeq":
        nodes, edges = K.simplify_walk(self.nodes, self.edges, n)
        return PathSeq(nodes, edges)

    def __add__(self, other: "PathSeq") -> "PathSeq":
        if self.nodes[-1] != other.nodes[0]:
            raise GraphError("walks do not meet")
        return PathSeq(np.concatenate([self.nodes, other.nodes[1:]]),
                       np.concatenate([self.edges, other.edges]))


@dataclass
class Solution:
    paths: list[PathSeq]


@dataclass
class Witness:
    """A node set whose cut capacity is below the demand crossing it."""
    cut_set: np.ndarray
    cut_capacity: int
    demand_crossing: int

    def __post_init__(self):
        self.cut_set = np.sort(np.asarray(self.cut_set, dtype=np.int64))


# ---------------------------------------------------------------- operations

def _as_mask(g: MultiGraph, U) -> np.ndarray:
    U = np.asarray(U)
    if U.dtype == np.bool_ and len(U) == g.n:
        return U
    mask = np.zeros(g.n, np.bool_)
    if U.size:
        mask[U.astype(np.int64)] = True
    return mask


def degree(g: MultiGraph, v: int) -> int:
    g._check_node(v)
    return int(K.degree(g._g, v))


def degrees(g: MultiGraph) -> np.ndarray:
    _, us, vs = g.edge_arrays()
    return np.bincount(us, minlength=g.n) + np.bincount(vs, minlength=g.n)


def cut_edges(g: MultiGraph, U) -> np.ndarray:
    """Ids of live edges with exactly one endpoint in ``U``."""
    mask = _as_mask(g, U)
    ids, us, vs = g.edge_arrays()
    return ids[mask[us] != mask[vs]]


def demand_crossing(inst: Instance, U) -> int:
    mask = _as_mask(inst.graph, U)
    return sum(1 for d in inst.demands if mask[d.s] != mask[d.t])


def connected_components(g: MultiGraph) -> np.ndarray:
    """Component label per node; labels are ``0..c-1`` in order of first node."""
    return K.components(g._g)


def odd_nodes(inst: Instance) -> np.ndarray:
    deg = degrees(inst.graph)
    for d in inst.demands:
        if d.s != d.t:
            deg[d.s] += 1
            deg[d.t] += 1
    return np.flatnonzero(deg % 2)


def is_eulerian(inst: Instance) -> bool:
    return len(odd_nodes(inst)) == 0


def verify_solution(inst: Instance, sol: Solution) -> bool:
    """Each path is a walk between its demand's ends; no edge is used twice."""
    g = inst.graph
    if len(sol.paths) != len(inst.demands):
        return False
    eu, ev, alive = g._g[9], g._g[10], g._g[11]
    used = []
    for d, path in zip(inst.demands, sol.paths):
        nodes, edges = path.nodes, path.edges
        if len(nodes) != len(edges) + 1:
            return False
        if nodes.min() < 0 or nodes.max() >= g.n:
            return False
        if (int(nodes[0]), int(nodes[-1])) not in ((d.s, d.t), (d.t, d.s)):
            return False
        if len(edges):
            if edges.min() < 0 or edges.max() >= g.m or not alive[edges].all():
                return False
            a, b = nodes[:-1], nodes[1:]
            x, y = eu[edges], ev[edges]
            if not np.all(((x == a) & (y == b)) | ((x == b) & (y == a))):
                return False
        used.append(edges)
    allused = np.concatenate(used) if used else np.zeros(0, np.int64)
    return len(np.unique(allused)) == len(allused)

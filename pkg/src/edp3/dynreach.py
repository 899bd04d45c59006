"""Incremental min(r, max #edge-disjoint s-t paths) under source-edge moves.

Keeps a maximum balanced arc set F (value < r) together with a maximal tree of
residual arcs directed towards ``t``.  New edges extend the tree by resuming a
depth-first search; when ``s`` joins the tree the tree path is an augmenting
path, F is augmented and the tree is rebuilt.  Once the value reaches ``r``
all maintenance stops.
"""
from __future__ import annotations

import numpy as np

from . import _kernels as K
from .flow import BalancedArcSet
from .graph import GraphError, MultiGraph


class DynReach:
    def __init__(self, g: MultiGraph, s: int, t: int, r: int, *, copy: bool = True):
        g._check_node(s)
        g._check_node(t)
        if s == t:
            raise GraphError("source and sink coincide")
        if r < 1:
            raise ValueError("bound r must be positive")
        self.graph = g.copy(reserve_edges=64) if copy else g
        self.s, self.t, self.r = s, t, r
        cap = len(self.graph._g[1])
        self.ds = np.zeros(7, np.int64)
        self.ds[K.D_S], self.ds[K.D_T], self.ds[K.D_R] = s, t, r
        self.fstate = np.zeros(len(self.graph._g[5]), np.int8)
        self.covered = np.zeros(cap, np.bool_)
        self.parent = np.full(cap, -1, np.int32)
        self.cursor = np.full(cap, -1, np.int32)
        self.stack = np.empty(cap, np.int32)
        self.covlist = np.empty(cap, np.int32)
        stamp = np.zeros(cap, np.int32)
        if not K.dr_init(self.graph._g, self.ds, self.fstate, self.covered, self.parent,
                         self.cursor, self.stack, self.covlist, stamp):
            raise AssertionError("initial arc set is not maximum")

    def _state(self):
        return (self.graph._g, self.ds, self.fstate, self.covered, self.parent,
                self.cursor, self.stack, self.covlist)

    def _reserve(self, edges: int) -> None:
        self.graph.reserve(edges=edges)
        size = len(self.graph._g[5])
        if size > len(self.fstate):
            self.fstate = np.concatenate([self.fstate, np.zeros(size - len(self.fstate), np.int8)])

    # ------------------------------------------------------------ queries
    def query(self) -> int:
        return int(self.ds[K.D_VALUE])

    @property
    def saturated(self) -> bool:
        return self.query() >= self.r

    @property
    def scans(self) -> int:
        """Arc inspections performed so far (initial flow, tree growth, insertions)."""
        return int(self.ds[K.D_SCANS])

    @property
    def breakthroughs(self) -> int:
        return int(self.ds[K.D_BREAKS])

    @property
    def flow(self) -> BalancedArcSet:
        return BalancedArcSet(self.graph, self.s, self.t, self.fstate)

    def covered_nodes(self) -> np.ndarray:
        return np.sort(self.covlist[: self.ds[K.D_NCOV]].astype(np.int64))

    def tree_parent(self, v: int) -> int:
        """Arc position from ``v`` towards ``t`` in the tree (-1 for the root)."""
        if not self.covered[v]:
            raise GraphError(f"node {v} is not covered by the tree")
        return int(self.parent[v])

    # ------------------------------------------------------------ updates
    def _source_edge(self, v: int) -> int:
        for e, w in self.graph.incident(self.s):
            if w == v:
                return e
        raise GraphError(f"no edge between source {self.s} and {v}")

    def move(self, v: int, v2: int, edge: int | None = None) -> int:
        """Replace edge s-v by edges s-v2 and v2-v; returns the new s-v2 edge id."""
        g = self.graph
        g._check_node(v)
        g._check_node(v2)
        if self.s in (v, v2):
            raise GraphError("move endpoints must differ from the source")
        if v == v2:
            raise GraphError("move would create a loop")
        if edge is None:
            edge = self._source_edge(v)
        elif not g.is_alive(edge) or set(g.endpoints(edge)) != {self.s, v}:
            raise GraphError(f"edge {edge} does not join {self.s} and {v}")
        self._reserve(2)
        return int(K.dr_move(*self._state(), edge, v, v2))

    def insert_edge(self, u: int, v: int) -> int:
        g = self.graph
        g._check_node(u)
        g._check_node(v)
        if u == v:
            raise GraphError("loop edge")
        self._reserve(1)
        return int(K.dr_insert(*self._state(), u, v))

    def replay(self, nodes, move_edge: int = -1) -> int:
        """Undo a walk ``nodes[0] .. nodes[-1]`` step by step from its end.

        With ``move_edge`` set (an edge joining the source and ``nodes[-1]``)
        every step is a :meth:`move`; otherwise every step re-inserts the
        walked edge.  Returns the first level (index into ``nodes``) at which
        the query reaches ``r``, or -1.
        """
        nodes = np.asarray(nodes, dtype=np.int64)
        self._reserve(2 * max(len(nodes) - 1, 0))
        level = int(K.dr_replay(*self._state(), nodes, move_edge))
        if level == -2:
            raise AssertionError("edge capacity exhausted during replay")
        return level


def dyn_new(g: MultiGraph, s: int, t: int, r: int) -> DynReach:
    return DynReach(g, s, t, r)


def dyn_query(d: DynReach) -> int:
    return d.query()


def dyn_move(d: DynReach, v: int, v2: int) -> None:
    d.move(v, v2)

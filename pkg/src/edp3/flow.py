"""Balanced arc sets on the bidirected graph and bounded Ford-Fulkerson."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from . import _kernels as K
from .graph import GraphError, MultiGraph, PathSeq


class FlowError(ValueError):
    pass


_EMPTY_MASK = np.zeros(0, np.bool_)


def _scratch_buffers(g: MultiGraph):
    cap = len(g._g[1])
    return (np.zeros(cap, np.int32), np.empty(cap, np.int32),
            np.empty(cap, np.int32), np.empty(cap, np.int32))


class BalancedArcSet:
    """Arc subset F of the bidirected graph, stored as per-position flow bits.

    F is kept reverse-free: an arc and its reverse are never both members.
    """

    def __init__(self, graph: MultiGraph, s: int, t: int, state: np.ndarray | None = None):
        self.graph = graph
        self.s = s
        self.t = t
        size = len(graph._g[5])
        if state is None:
            state = np.zeros(size, np.int8)
        elif len(state) < size:
            state = np.concatenate([state, np.zeros(size - len(state), np.int8)])
        self.state = state

    @classmethod
    def from_arcs(cls, graph: MultiGraph, s: int, t: int, arcs: Sequence[int]) -> "BalancedArcSet":
        F = cls(graph, s, t)
        rev = graph._g[6]
        for a in arcs:
            if F.state[a] & (K.IN_F | K.REV_IN_F):
                raise FlowError(f"arc {a} or its reverse already present")
            F.state[a] |= K.IN_F
            F.state[rev[a]] |= K.REV_IN_F
        return F

    def copy(self) -> "BalancedArcSet":
        return BalancedArcSet(self.graph, self.s, self.t, self.state.copy())

    def __contains__(self, a: int) -> bool:
        return bool(self.state[a] & K.IN_F)

    def arcs(self) -> np.ndarray:
        npos = self.graph.num_positions
        live = ~self.graph._g[8][:npos]
        return np.flatnonzero((self.state[:npos] & K.IN_F).astype(bool) & live)

    def members(self) -> list[tuple[int, int, int]]:
        return [self.graph.arc_info(int(a)) for a in self.arcs()]

    def _net(self) -> np.ndarray:
        g = self.graph._g
        arcs = self.arcs()
        heads = g[5][arcs].astype(np.int64)
        tails = g[5][g[6][arcs]].astype(np.int64)
        n = self.graph.n
        return np.bincount(tails, minlength=n) - np.bincount(heads, minlength=n)

    @property
    def value(self) -> int:
        return int(self._net()[self.s])

    def is_balanced(self) -> bool:
        net = self._net()
        net[[self.s, self.t]] = 0
        return not net.any()

    def is_reverse_free(self) -> bool:
        npos = self.graph.num_positions
        inf = (self.state[:npos] & K.IN_F).astype(bool)
        return not np.any(inf & inf[self.graph._g[6][:npos]])

    def __len__(self) -> int:
        return len(self.arcs())


def _arcs_of_path(g: MultiGraph, path: PathSeq) -> list[int]:
    return [g.arc(int(e), int(x)) for e, x in zip(path.edges, path.nodes[:-1])]


def decompose(F: BalancedArcSet) -> tuple[list[PathSeq], list[PathSeq], list[PathSeq]]:
    """Split F into s-t paths, t-s paths and cycles, all arc-disjoint."""
    g = F.graph
    ok, arcs, starts, kinds = K.decompose(g._g, F.state, F.s, F.t)
    if not ok:
        raise FlowError("arc set is not balanced")
    eid = g._g[7]
    tail_of = g._g[5][g._g[6][arcs]]
    out: tuple[list, list, list] = ([], [], [])
    for i, kind in enumerate(kinds):
        seg = arcs[starts[i]:starts[i + 1]]
        nodes = np.append(tail_of[starts[i]:starts[i + 1]], g._g[5][seg[-1]]).astype(np.int64)
        out[kind].append(PathSeq(nodes, eid[seg].astype(np.int64)))
    return out


def augment(F: BalancedArcSet, path: PathSeq | Sequence[int]) -> BalancedArcSet:
    """Return F augmented along an arc-simple residual s-t path.

    ``path`` is either a PathSeq (arcs follow its direction) or a list of arc
    positions.
    """
    g = F.graph
    arcs = _arcs_of_path(g, path) if isinstance(path, PathSeq) else [int(a) for a in path]
    if not arcs:
        raise FlowError("empty augmenting path")
    if len(set(arcs)) != len(arcs):
        raise FlowError("path is not arc-simple")
    x = F.s
    for a in arcs:
        e, tail, head = g.arc_info(a)
        if tail != x:
            raise FlowError("arcs do not form a walk from the source")
        if not g.is_alive(e) or F.state[a] & K.IN_F:
            raise FlowError(f"arc {a} is not in the residual graph")
        x = head
    if x != F.t:
        raise FlowError("path does not end at the sink")
    out = F.copy()
    rev = g._g[6]
    for a in arcs:
        K.push_arc(out.state, rev, a)
    return out


def _run_bounded(g: MultiGraph, s: int, t: int, r: int, mask: np.ndarray | None = None):
    if s == t:
        raise FlowError("source and sink coincide")
    state = np.zeros(len(g._g[5]), np.int8)
    stamp, parent, cursor, stack = _scratch_buffers(g)
    use_mask = mask is not None
    value, tag, scans = K.bounded_flow(g._g, state, s, t, r, stamp, 0, parent, cursor, stack,
                                       mask if use_mask else _EMPTY_MASK, use_mask)
    reach = stamp[: g.n] == tag if value < r else None
    return state, int(value), reach, int(scans)


def bounded_max_flow(g: MultiGraph, s: int, t: int, r: int) -> tuple[BalancedArcSet, np.ndarray | None]:
    """Up to ``r`` augmentations from the empty set.

    Returns F and, when fewer than ``r`` paths exist, the inclusion-wise
    minimal minimum cut (nodes reachable from ``s`` in the residual graph).
    """
    g._check_node(s)
    g._check_node(t)
    state, value, reach, _ = _run_bounded(g, s, t, r)
    F = BalancedArcSet(g, s, t, state)
    return F, (np.flatnonzero(reach) if reach is not None else None)


def _reach_sink(g: MultiGraph, F: BalancedArcSet) -> np.ndarray:
    stamp, parent, cursor, stack = _scratch_buffers(g)
    K.search(g._g, F.state, True, True, _EMPTY_MASK, False, F.t, -1,
             stamp, 1, parent, cursor, stack)
    return stamp[: g.n] == 1


def maximal_min_cut(g: MultiGraph, s: int, t: int, F: BalancedArcSet) -> np.ndarray:
    """Largest minimum s-t cut: every node that cannot reach ``t`` residually."""
    if (F.s, F.t) != (s, t):
        raise FlowError("arc set was built for a different terminal pair")
    reach = _reach_sink(g, F)
    if reach[s]:
        raise FlowError("arc set is not of maximum value")
    return np.flatnonzero(~reach)


__all__ = [
    "BalancedArcSet", "FlowError", "GraphError", "augment", "bounded_max_flow",
    "decompose", "maximal_min_cut",
]

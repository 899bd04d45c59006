"""Three edge-disjoint paths in Eulerian instances.

Pipeline for three demand pairs sharing a component:

1. feasibility via one bounded max-flow per signature (orientation pattern
   of the separated pairs, attached to an auxiliary source and sink);
2. trace a node-simple path P1 for the first pair and move its terminal
   along P1 edge by edge; if the final instance is feasible, P1 plus a
   two-pair solution of the rest is the answer;
3. otherwise walk back along P1 with one :class:`DynReach` per signature to
   find the last feasible level j;
4. at level j find a cut U with d_G(U) = d_H(U) = 2, two terminals inside
   and G[U] connected, route across it, finish inside U with the two-pair
   procedure and trace the third path by parity.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Sequence

import numpy as np

from . import _kernels as K
from .dynreach import DynReach
from .flow import BalancedArcSet, _reach_sink, _run_bounded, decompose
from .graph import (
    GraphError, Instance, MultiGraph, NotEulerianError, PathSeq, Solution, Witness,
    connected_components, cut_edges, odd_nodes, verify_solution,
)

Pairs = Sequence[tuple[int, int]]

_NO_FLOW = np.zeros(0, np.int8)


class CriticalCutError(RuntimeError):
    """No cut of the required shape exists: the instance is not critical."""


@dataclass(frozen=True)
class Signature:
    """Orientation per demand pair: +1 puts s_i with the source, -1 puts t_i
    with the source, 0 leaves the pair unseparated."""
    orient: tuple[int, ...]

    @property
    def k(self) -> int:
        return sum(1 for o in self.orient if o)

    def flipped(self) -> "Signature":
        return Signature(tuple(-o for o in self.orient))

    def source_slots(self) -> frozenset[int]:
        """Terminal slots (2i for s_i, 2i+1 for t_i) on the source side."""
        return frozenset(2 * i + (o < 0) for i, o in enumerate(self.orient) if o)


def signatures(npairs: int, canonical: bool = True) -> list[Signature]:
    """All orientation patterns with at least one separated pair.

    With ``canonical`` a pattern and its flip (same flow value, roles of
    source and sink exchanged) are listed once: 13 patterns for three pairs.
    """
    out = []
    for orient in product((0, 1, -1), repeat=npairs):
        if not any(orient):
            continue
        if canonical and next(o for o in orient if o) < 0:
            continue
        out.append(Signature(orient))
    return out


@dataclass
class MoveTrace:
    """The path P1 = p_0 e_1 p_1 ... e_k p_k along which s_1 is moved."""
    nodes: np.ndarray
    edges: np.ndarray

    @property
    def k(self) -> int:
        return len(self.edges)


@dataclass
class CriticalCut:
    nodes: np.ndarray
    cut: tuple[int, int]
    inner: tuple[int, int]
    outer: tuple[int, int]
    slots: tuple[int, int]


@dataclass
class SolveStats:
    path_length: int = 0
    level_k_feasible: bool | None = None
    critical_index: int | None = None
    reached_critical_cut: bool = False
    case: str | None = None
    jsearch_scans: int = 0
    jsearch_budget: int = 0


# ---------------------------------------------------------------- helpers

def _pairs(inst: Instance) -> list[tuple[int, int]]:
    return [(d.s, d.t) for d in inst.demands]


def _attach(g: MultiGraph, pairs: Pairs, sig: Signature):
    """Add s*, t* and the auxiliary edges for ``sig`` (call inside a scratch)."""
    ss = g.add_node()
    ts = g.add_node()
    aux = []
    for (s, t), o in zip(pairs, sig.orient):
        if not o:
            aux.append(None)
            continue
        src, snk = (s, t) if o > 0 else (t, s)
        aux.append((g.add_edge(ss, src), g.add_edge(snk, ts)))
    return ss, ts, aux


def _witness(g: MultiGraph, pairs: Pairs, mask: np.ndarray) -> Witness:
    size = int(mask.sum())
    if g.n - size < size:
        mask = ~mask
    d_h = sum(1 for s, t in pairs if mask[s] != mask[t])
    return Witness(np.flatnonzero(mask), len(cut_edges(g, mask)), d_h)


def _trace(g: MultiGraph, s: int, t: int) -> PathSeq | None:
    """Depth-first s-t path in the live graph (node-simple), or None."""
    if s == t:
        return PathSeq.empty(s)
    cap = len(g._g[1])
    stamp = np.zeros(cap, np.int32)
    parent = np.empty(cap, np.int32)
    cursor = np.empty(cap, np.int32)
    stack = np.empty(cap, np.int32)
    found, _ = K.search(g._g, _NO_FLOW, False, False, np.zeros(0, np.bool_), False,
                        s, t, stamp, 1, parent, cursor, stack)
    if not found:
        return None
    edges, nodes = K.path_from_parents(g._g, parent, s, t)
    return PathSeq(nodes, edges)


def _trace_all(g: MultiGraph, pairs: Pairs) -> list[PathSeq] | None:
    """Trace the pairs one after another, deleting each path's edges.

    Exact for Eulerian instances with at most two pairs per component: after
    deleting an s-t path the next pair's ends are the only odd nodes left in
    their component.
    """
    out = []
    with g.scratch():
        for s, t in pairs:
            p = _trace(g, s, t)
            if p is None:
                return None
            g.remove_edges(p.edges)
            out.append(p)
    return out


def _connected_within(g: MultiGraph, mask: np.ndarray, start: int) -> bool:
    cap = len(g._g[1])
    full = np.zeros(cap, np.bool_)
    full[: len(mask)] = mask
    stamp = np.zeros(cap, np.int32)
    buf = np.empty(cap, np.int32), np.empty(cap, np.int32), np.empty(cap, np.int32)
    K.search(g._g, _NO_FLOW, False, False, full, True, start, -1, stamp, 1, *buf)
    return int(np.count_nonzero(stamp == 1)) == int(mask.sum())


# ---------------------------------------------------------------- feasibility

def _bound(sig: Signature) -> int:
    # Eulerian parity: a violated cut has d_G <= d_H - 2, so flow k - 1
    # already separates feasible from infeasible and k = 1 never fails.
    return sig.k - 1


def _check(g: MultiGraph, pairs: Pairs, comp: np.ndarray | None = None) -> Witness | None:
    active = [(s, t) for s, t in pairs if s != t]
    if comp is None:
        comp = connected_components(g)
    for s, t in active:
        if comp[s] != comp[t]:
            return _witness(g, pairs, comp == comp[s])
    if len(active) < 3 or len({int(comp[s]) for s, _ in active}) > 1:
        # at most two pairs per component, each connected
        return None
    # one component: patterns with k = 2 are covered by connectivity
    n0 = g.n
    best = None
    for sig in signatures(3):
        if sig.k < 3:
            continue
        with g.scratch():
            ss, ts, _ = _attach(g, active, sig)
            _, value, reach, _ = _run_bounded(g, ss, ts, _bound(sig))
        if value < _bound(sig):
            w = _witness(g, pairs, reach[:n0])
            if best is None or len(w.cut_set) < len(best.cut_set):
                best = w
    return best


def check_feasible(inst: Instance) -> Witness | None:
    """None if the Eulerian instance is feasible, else a violated cut."""
    odd = odd_nodes(inst)
    if len(odd):
        raise NotEulerianError(int(odd[0]))
    return _check(inst.graph, _pairs(inst))


def is_feasible(inst: Instance) -> bool:
    return check_feasible(inst) is None


# ---------------------------------------------------------------- two pairs

def solve_two_pairs(g: MultiGraph, d1: tuple[int, int], d2: tuple[int, int]) -> tuple[PathSeq, PathSeq]:
    """Edge-disjoint paths for two pairs; the four terminals must share a
    component and the instance must be Eulerian."""
    inst = Instance(g, [d1, d2])
    odd = odd_nodes(inst)
    if len(odd):
        raise NotEulerianError(int(odd[0]))
    comp = connected_components(g)
    if len({int(comp[v]) for v in (*d1, *d2)}) != 1:
        raise GraphError("terminals are not in one connected component")
    paths = _trace_all(g, [d1, d2])
    if paths is None:
        raise AssertionError("second path missing in an Eulerian instance")
    return paths[0], paths[1]


# ---------------------------------------------------------------- critical index

def _critical_index(g: MultiGraph, pairs: Pairs, trace: MoveTrace,
                    sigs: Sequence[Signature] | None = None,
                    stats: SolveStats | None = None) -> int:
    j = trace.k
    for sig in sigs or signatures(len(pairs)):
        if _bound(sig) < 1:
            continue
        with g.scratch():
            ss, ts, aux = _attach(g, pairs, sig)
            o = sig.orient[0]
            if o == 0:
                src, snk, move_edge = ss, ts, -1
            elif o > 0:
                src, snk, move_edge = ss, ts, aux[0][0]
            else:
                src, snk, move_edge = ts, ss, aux[0][1]
            dyn = DynReach(g, src, snk, _bound(sig), copy=False)
            level = dyn.replay(trace.nodes, move_edge)
            if stats is not None:
                stats.jsearch_scans += dyn.scans
                stats.jsearch_budget += _bound(sig) * g.m
        if level < 0:
            raise AssertionError(f"signature {sig.orient} never satisfied; level 0 must be feasible")
        j = min(j, level)
    return j


def find_critical_index(inst_k: Instance, trace: MoveTrace,
                        sigs: Sequence[Signature] | None = None,
                        stats: SolveStats | None = None) -> int:
    """Largest j such that moving s_1 along the first j edges of P1 keeps the
    instance feasible.

    ``inst_k`` is the instance after all moves: P1's edges are deleted and the
    first pair sits at ``(t_1, t_1)``.
    """
    pairs = _pairs(inst_k)
    if pairs[0][0] != trace.nodes[-1]:
        raise GraphError("first demand must sit at the end of the move trace")
    return _critical_index(inst_k.graph, pairs, trace, sigs, stats)


# ---------------------------------------------------------------- critical cut

def _critical_cut(g: MultiGraph, pairs: Pairs, rejected: list | None = None) -> CriticalCut:
    slots = [v for pair in pairs for v in pair]
    n0 = g.n
    comp = connected_components(g)
    if len({int(comp[v]) for v in slots}) != 1:
        raise CriticalCutError("terminals span several components")
    in_comp = comp == comp[slots[0]]
    for a, b in combinations(range(len(slots)), 2):
        if a // 2 == b // 2:
            continue
        with g.scratch():
            ss = g.add_node()
            ts = g.add_node()
            for i, x in enumerate(slots):
                for _ in range(3):
                    if i in (a, b):
                        g.add_edge(ss, x)
                    else:
                        g.add_edge(x, ts)
            state, value, _, _ = _run_bounded(g, ss, ts, 3)
            if value == 3:
                continue
            if value < 2:
                raise CriticalCutError("instance violates the cut condition")
            reach = _reach_sink(g, BalancedArcSet(g, ss, ts, state))
        mask = ~reach[:n0] & in_comp
        edges = cut_edges(g, mask)
        if len(edges) != 2:
            if rejected is not None:
                rejected.append(((a, b), "capacity"))
            continue
        if not _connected_within(g, mask, slots[a]):
            if rejected is not None:
                rejected.append(((a, b), "disconnected"))
            continue
        inner, outer = [], []
        for e in edges:
            u, v = g.endpoints(int(e))
            if not mask[u]:
                u, v = v, u
            inner.append(u)
            outer.append(v)
        return CriticalCut(np.flatnonzero(mask), (int(edges[0]), int(edges[1])),
                           (inner[0], inner[1]), (outer[0], outer[1]), (a, b))
    raise CriticalCutError("no cut with two inside terminals and capacity two")


def find_critical_cut(inst: Instance, rejected: list | None = None) -> CriticalCut:
    """Cut U with d_G(U) = d_H(U) = 2, two terminal slots inside and G[U]
    connected; raises :class:`CriticalCutError` when there is none.

    Slot pairs whose cut fails a check are appended to ``rejected`` as
    ``((a, b), reason)``.
    """
    pairs = _pairs(inst)
    if len(pairs) != 3 or any(s == t for s, t in pairs):
        raise CriticalCutError("needs three non-trivial demand pairs")
    return _critical_cut(inst.graph, pairs, rejected)


def _solve_critical(g: MultiGraph, pairs: Pairs, cut: CriticalCut,
                    stats: SolveStats | None = None) -> list[PathSeq]:
    slots = [v for pair in pairs for v in pair]
    a, b = cut.slots
    pa, pb = a // 2, b // 2
    pc = 3 - pa - pb
    sa, ta, sb, tb = slots[a], slots[a ^ 1], slots[b], slots[b ^ 1]
    mask = np.zeros(g.n, np.bool_)
    mask[cut.nodes] = True

    with g.scratch():
        ss = g.add_node()
        ts = g.add_node()
        g.add_edge(ss, cut.inner[0])
        g.add_edge(ss, cut.inner[1])
        to_a = g.add_edge(ta, ts)
        g.add_edge(tb, ts)
        state, value, _, _ = _run_bounded(g, ss, ts, 2)
        if value < 2:
            raise AssertionError("fewer than two paths leave the critical cut")
        st_paths, _, _ = decompose(BalancedArcSet(g, ss, ts, state))

    # outside[i] = (segment from outer[i] to its terminal, reaches t_a?)
    outside: dict[int, tuple[PathSeq, bool]] = {}
    for path in st_paths:
        hits = np.flatnonzero(np.isin(path.edges, cut.cut))
        if len(hits) != 1:
            raise AssertionError("flow path crosses the critical cut more than once")
        i = hits[0]
        seg = PathSeq(path.nodes[i + 1:-1], path.edges[i + 1:-1])
        outside[cut.cut.index(int(path.edges[i]))] = (seg, int(path.edges[-1]) == to_a)
    if len(outside) != 2 or outside[0][1] == outside[1][1]:
        raise AssertionError("flow paths do not pair the cut edges with both mates")
    ia = 0 if outside[0][1] else 1
    ib = 1 - ia
    if stats is not None:
        stats.case = "A" if ia == 0 else "B"

    with g.scratch():
        ids, us, vs = g.edge_arrays()
        g.remove_edges(ids[~(mask[us] & mask[vs])])
        inside = _trace_all(g, [(sa, cut.inner[ia]), (sb, cut.inner[ib])])
    if inside is None:
        raise AssertionError("two-pair instance inside the cut is infeasible")

    def through(i: int, inner_path: PathSeq) -> PathSeq:
        bridge = PathSeq(np.array([cut.inner[i], cut.outer[i]]), np.array([cut.cut[i]]))
        return inner_path + bridge + outside[i][0]

    path_a = through(ia, inside[0])
    path_b = through(ib, inside[1])
    with g.scratch():
        g.remove_edges(path_a.edges)
        g.remove_edges(path_b.edges)
        path_c = _trace(g, *pairs[pc])
    if path_c is None:
        raise AssertionError("third path missing after removing two paths")
    out: list[PathSeq] = [None, None, None]  # type: ignore[list-item]
    out[pa] = path_a if a % 2 == 0 else path_a.reversed()
    out[pb] = path_b if b % 2 == 0 else path_b.reversed()
    out[pc] = path_c
    return out


def solve_critical(inst: Instance, cut: CriticalCut, stats: SolveStats | None = None) -> Solution:
    return Solution(_solve_critical(inst.graph, _pairs(inst), cut, stats))


# ---------------------------------------------------------------- drivers

def _prelude(g: MultiGraph, pairs: Pairs):
    """Active pair indices, plus a component Witness or whether all three
    active pairs share one component (with the component labels)."""
    active = [i for i, (s, t) in enumerate(pairs) if s != t]
    comp = connected_components(g)
    for i in active:
        s, t = pairs[i]
        if comp[s] != comp[t]:
            return active, _witness(g, pairs, comp == comp[s]), comp
    three = len(active) == 3 and len({int(comp[pairs[i][0]]) for i in active}) == 1
    return active, three, comp


def _eulerian_pairs(inst: Instance) -> list[tuple[int, int]]:
    odd = odd_nodes(inst)
    if len(odd):
        raise NotEulerianError(int(odd[0]))
    return _pairs(inst)


def _finish(inst: Instance, g: MultiGraph, pairs, active, found: list[PathSeq]) -> Solution:
    paths = [PathSeq.empty(s) for s, _ in pairs]
    for i, p in zip(active, found):
        paths[i] = p.simplified(g.n)
    sol = Solution(paths)
    if not verify_solution(inst, sol):
        raise AssertionError("constructed paths fail verification")
    return sol


def _solve_three(g: MultiGraph, pairs: Pairs, stats: SolveStats,
                 comp: np.ndarray | None = None) -> list[PathSeq] | Witness:
    w = _check(g, pairs, comp)
    if w is not None:
        return w
    s1, t1 = pairs[0]
    p1 = _trace(g, s1, t1)
    trace = MoveTrace(p1.nodes, p1.edges)
    stats.path_length = trace.k
    with g.scratch():
        g.remove_edges(p1.edges)
        level_k = [(t1, t1), pairs[1], pairs[2]]
        stats.level_k_feasible = _check(g, level_k) is None
        if stats.level_k_feasible:
            return [p1] + _trace_all(g, pairs[1:])
        j = _critical_index(g, level_k, trace, stats=stats)
    stats.critical_index = j
    with g.scratch():
        g.remove_edges(p1.edges[:j])
        level_j = [(int(p1.nodes[j]), t1), pairs[1], pairs[2]]
        comp = connected_components(g)
        if len({int(comp[v]) for pair in level_j for v in pair}) == 1:
            cut = _critical_cut(g, level_j)
            stats.reached_critical_cut = True
            paths = _solve_critical(g, level_j, cut, stats)
        else:
            paths = _trace_all(g, level_j)
    paths[0] = PathSeq(p1.nodes[: j + 1], p1.edges[:j]) + paths[0]
    return paths


def solve(inst: Instance, stats: SolveStats | None = None) -> Solution | Witness:
    """Three edge-disjoint paths for an Eulerian instance, or a violated cut.

    Works on ``inst.graph`` in place; every change is rolled back.
    """
    stats = stats if stats is not None else SolveStats()
    pairs = _eulerian_pairs(inst)
    g = inst.graph
    active, three, comp = _prelude(g, pairs)
    if isinstance(three, Witness):
        return three
    sub = [pairs[i] for i in active]
    with g.scratch():
        if three:
            found = _solve_three(g, sub, stats, comp)
            if isinstance(found, Witness):
                return found
        else:
            found = _trace_all(g, sub)
    return _finish(inst, g, pairs, active, found)


def solve_quadratic(inst: Instance) -> Solution | Witness:
    """Reference solver: greedily apply feasible local moves to s_1."""
    pairs = _eulerian_pairs(inst)
    g = inst.graph.copy(reserve_nodes=4, reserve_edges=64)
    active, three, comp = _prelude(g, pairs)
    if isinstance(three, Witness):
        return three
    sub = [pairs[i] for i in active]
    if not three:
        return _finish(inst, g, pairs, active, _trace_all(g, sub))
    w = _check(g, sub, comp)
    if w is not None:
        return w
    (s1, t1), rest = sub[0], sub[1:]
    cur, moved, bad = s1, [], set()
    while cur != t1:
        for e, w_ in g.incident(cur):
            if e in bad:
                continue
            with g.scratch():
                g.remove_edges([e])
                ok = _check(g, [(w_, t1), *rest]) is None
            if ok:
                g.remove_edges([e])
                moved.append(e)
                cur = w_
                break
            bad.add(e)
        else:
            raise AssertionError("feasible instance without a feasible local move")
    found = [PathSeq.from_edges(g, s1, moved)] + _trace_all(g, rest)
    return _finish(inst, g, pairs, active, found)

"""Seeded random Eulerian instances.

``feasible`` mode builds G as the union of three random trails (one per
demand pair, endpoints become the pair) plus random closed walks, so a
solution exists by construction.  ``random`` mode draws an arbitrary
multigraph and demands, then pairs up the odd nodes of G + H with extra
edges; those instances are Eulerian but often infeasible.  With
``clusters > 1`` random mode draws edges inside node blocks and joins the
blocks by ``bridges`` extra edges, which makes small violated cuts common at
larger sizes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import DemandPair, Instance, MultiGraph

MODES = ("feasible", "random")


@dataclass(frozen=True)
class GenConfig:
    nodes: int = 8
    cycles: int = 1
    trail_min: int = 1
    trail_max: int = 4
    cycle_min: int = 2
    cycle_max: int = 4
    edges: int = 10
    seed: int = 0
    mode: str = "feasible"
    clusters: int = 1
    bridges: int = 0
    span: int = 0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.nodes < 2:
            raise ValueError("need at least two nodes")
        if not 0 <= self.trail_min <= self.trail_max:
            raise ValueError("bad trail length bounds")
        if not 2 <= self.cycle_min <= self.cycle_max:
            raise ValueError("closed walks need length at least two")
        if self.span < 0:
            raise ValueError("span must be non-negative")
        if not 1 <= self.clusters <= self.nodes // 2:
            raise ValueError("each cluster needs at least two nodes")


def _walk(rng: np.random.Generator, n: int, start: int, length: int, span: int = 0) -> np.ndarray:
    # consecutive nodes always differ; span > 0 keeps steps within +-span
    if 0 < span < n // 2:
        steps = rng.integers(1, span + 1, size=length) * rng.choice((-1, 1), size=length)
    else:
        steps = rng.integers(1, n, size=length)
    return (start + np.concatenate([[0], np.cumsum(steps)])) % n


def _feasible(cfg: GenConfig, rng: np.random.Generator):
    n = cfg.nodes
    us, vs, pairs = [], [], []
    for _ in range(3):
        walk = _walk(rng, n, int(rng.integers(n)), int(rng.integers(cfg.trail_min, cfg.trail_max + 1)), cfg.span)
        us.append(walk[:-1])
        vs.append(walk[1:])
        pairs.append((int(walk[0]), int(walk[-1])))
    for _ in range(cfg.cycles):
        length = int(rng.integers(cfg.cycle_min, cfg.cycle_max + 1))
        walk = _walk(rng, n, int(rng.integers(n)), length - 1, cfg.span)
        if walk[-1] != walk[0]:
            walk = np.append(walk, walk[0])
        us.append(walk[:-1])
        vs.append(walk[1:])
    return np.concatenate(us), np.concatenate(vs), pairs


def _random(cfg: GenConfig, rng: np.random.Generator):
    n, k = cfg.nodes, cfg.clusters
    # block b holds nodes lo[b] .. lo[b+1]-1
    lo = np.linspace(0, n, k + 1).astype(np.int64)
    block = rng.integers(k, size=cfg.edges)
    size = lo[block + 1] - lo[block]
    a = rng.integers(size)
    us = lo[block] + a
    vs = lo[block] + (a + rng.integers(1, size)) % size
    if k > 1 and cfg.bridges:
        bu = rng.integers(n, size=cfg.bridges)
        bv = (bu + rng.integers(1, n, size=cfg.bridges)) % n
        us, vs = np.concatenate([us, bu]), np.concatenate([vs, bv])
    pairs = [(int(rng.integers(n)), int(rng.integers(n))) for _ in range(3)]
    deg = np.bincount(us, minlength=n) + np.bincount(vs, minlength=n)
    for s, t in pairs:
        if s != t:
            deg[s] += 1
            deg[t] += 1
    odd = rng.permutation(np.flatnonzero(deg % 2))
    if k > 1:
        # pair odd nodes inside their block first
        odd = odd[np.argsort(np.searchsorted(lo, odd, side="right"), kind="stable")]
    return np.concatenate([us, odd[0::2]]), np.concatenate([vs, odd[1::2]]), pairs


def gen_instance(cfg: GenConfig) -> Instance:
    rng = np.random.default_rng(cfg.seed)
    us, vs, pairs = (_feasible if cfg.mode == "feasible" else _random)(cfg, rng)
    order = rng.permutation(len(us))
    g = MultiGraph.from_arrays(cfg.nodes, us[order], vs[order])
    return Instance(g, [DemandPair(s, t, i + 1) for i, (s, t) in enumerate(pairs)])


def bench_config(m: int, seed: int = 0, degree: int = 8, span: int = 256) -> GenConfig:
    """Feasible-mode config with about ``m`` edges and average degree ``degree``.

    Walk steps stay within ``span`` node ids, which gives the memory layout
    some locality; ``span=0`` draws steps uniformly (an expander).
    """
    trail = m // 8
    cycles = max((m - 3 * trail) // 32, 0)
    return GenConfig(nodes=max(2 * m // degree, 2), cycles=cycles, trail_min=trail, trail_max=trail,
                     cycle_min=16, cycle_max=48, seed=seed, mode="feasible", span=span)


def inflate(inst: Instance, m: int, seed: int = 0, subdivide: int = 4, blob: int = 256,
            span: int = 16) -> Instance:
    """Grow ``inst`` to about ``m`` edges with the same cut structure.

    Every edge becomes a path of ``subdivide`` edges, then Eulerian blobs of
    ``blob`` fresh nodes are hung off single existing nodes, so no cut that
    matters changes and a node-simple path never enters a blob.
    """
    rng = np.random.default_rng(seed)
    _, us0, vs0 = inst.graph.edge_arrays()
    n = inst.graph.n
    us, vs = [], []
    for u, v in zip(us0.tolist(), vs0.tolist()):
        chain = np.concatenate([[u], np.arange(n, n + subdivide - 1), [v]])
        n += subdivide - 1
        us.append(chain[:-1])
        vs.append(chain[1:])
    core = n
    rest = m - subdivide * len(us0)
    while rest > 0:
        size = min(blob, max(rest // 8, 2))
        base = n
        n += size
        hub = int(rng.integers(core))
        budget = min(rest, 4 * size)
        first = True
        while budget > 0:
            length = int(rng.integers(8, 33))
            walk = base + _walk(rng, size, int(rng.integers(size)), length - 1, span)
            if walk[-1] != walk[0]:
                walk = np.append(walk, walk[0])
            if first:
                walk[0] = walk[-1] = hub
                if walk[1] == walk[-2] == hub or len(walk) < 3:
                    continue
                first = False
            us.append(walk[:-1])
            vs.append(walk[1:])
            budget -= len(walk) - 1
            rest -= len(walk) - 1
    us, vs = np.concatenate(us), np.concatenate(vs)
    return Instance(MultiGraph.from_arrays(n, us, vs), list(inst.demands))

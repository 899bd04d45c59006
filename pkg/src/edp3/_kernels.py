"""Compiled traversal kernels.

A graph is a tuple of flat arrays (see ``GRAPH_FIELDS``).  Arcs are named by
their position.  Edges present at construction time occupy a CSR block
``[0, nbase)`` grouped by tail; edges added later live in a pool past
``nbase``, threaded through per-node singly linked lists (newest first).
Scanning node ``x`` walks its CSR range and then its pool list.

Flow state is a separate ``int8`` array indexed by arc position: bit 0 means
"this arc is in F", bit 1 means "the reverse arc is in F".  Keeping both bits
on the same position lets forward and backward residual scans read one
sequential byte per arc.
"""
import numpy as np
from numba import njit

GRAPH_FIELDS = (
    "meta", "off", "end", "xfirst", "xnext", "head", "rev", "eid", "pdead",
    "eu", "ev", "alive", "epos",
)

# meta slots
N_NODES, N_EDGES, N_POS, N_BASE = 0, 1, 2, 3

IN_F = 1
REV_IN_F = 2

# dynreach scalar slots
D_S, D_T, D_R, D_VALUE, D_SCANS, D_NCOV, D_BREAKS = range(7)


@njit(cache=True, inline="always")
def first_arc(G, x):
    if G[1][x] < G[2][x]:
        return G[1][x]
    return G[3][x]


@njit(cache=True, inline="always")
def next_arc(G, p, x):
    if p < G[0][3]:
        q = p + 1
        if q < G[2][x]:
            return q
        return G[3][x]
    return G[4][p]


@njit(cache=True)
def build_csr(n, us, vs, node_cap, edge_cap, pos_cap):
    m = len(us)
    meta = np.zeros(4, np.int64)
    off = np.zeros(node_cap, np.int32)
    end = np.zeros(node_cap, np.int32)
    xfirst = np.full(node_cap, -1, np.int32)
    xnext = np.full(pos_cap, -1, np.int32)
    head = np.zeros(pos_cap, np.int32)
    rev = np.zeros(pos_cap, np.int32)
    eid = np.zeros(pos_cap, np.int32)
    pdead = np.zeros(pos_cap, np.bool_)
    eu = np.zeros(edge_cap, np.int32)
    ev = np.zeros(edge_cap, np.int32)
    alive = np.zeros(edge_cap, np.bool_)
    epos = np.zeros(edge_cap, np.int32)
    deg = np.zeros(n + 1, np.int64)
    for e in range(m):
        deg[us[e]] += 1
        deg[vs[e]] += 1
    acc = 0
    for x in range(n):
        off[x] = acc
        acc += deg[x]
        end[x] = off[x]
    for e in range(m):
        u = us[e]
        v = vs[e]
        pu = end[u]
        end[u] += 1
        pv = end[v]
        end[v] += 1
        head[pu] = v
        head[pv] = u
        rev[pu] = pv
        rev[pv] = pu
        eid[pu] = e
        eid[pv] = e
        eu[e] = u
        ev[e] = v
        alive[e] = True
        epos[e] = pu
    meta[0] = n
    meta[1] = m
    meta[2] = 2 * m
    meta[3] = 2 * m
    return (meta, off, end, xfirst, xnext, head, rev, eid, pdead, eu, ev, alive, epos)


@njit(cache=True)
def add_node(G):
    meta = G[0]
    x = meta[0]
    if x >= len(G[1]):
        return -1
    G[1][x] = 0
    G[2][x] = 0
    G[3][x] = -1
    meta[0] = x + 1
    return x


@njit(cache=True)
def add_edge(G, u, v):
    meta, off, end, xfirst, xnext, head, rev, eid, pdead, eu, ev, alive, epos = G
    e = meta[1]
    p = meta[2]
    if e >= len(eu) or p + 2 > len(head):
        return -1
    eu[e] = u
    ev[e] = v
    alive[e] = True
    epos[e] = p
    head[p] = v
    head[p + 1] = u
    rev[p] = p + 1
    rev[p + 1] = p
    eid[p] = e
    eid[p + 1] = e
    pdead[p] = False
    pdead[p + 1] = False
    xnext[p] = xfirst[u]
    xfirst[u] = p
    xnext[p + 1] = xfirst[v]
    xfirst[v] = p + 1
    meta[1] = e + 1
    meta[2] = p + 2
    return e


@njit(cache=True)
def kill_edge(G, e):
    G[11][e] = False
    p = G[12][e]
    G[8][p] = True
    G[8][G[6][p]] = True


@njit(cache=True)
def rollback(G, n_to, m_to):
    """Pop pool edges ``m_to..`` and nodes ``n_to..`` in reverse insertion order."""
    meta, off, end, xfirst, xnext, head, rev, eid, pdead, eu, ev, alive, epos = G
    for e in range(meta[1] - 1, m_to - 1, -1):
        p = epos[e]
        xfirst[ev[e]] = xnext[p + 1]
        xfirst[eu[e]] = xnext[p]
        meta[2] = p
    meta[1] = m_to
    for x in range(n_to, meta[0]):
        xfirst[x] = -1
        off[x] = 0
        end[x] = 0
    meta[0] = n_to


@njit(cache=True)
def degree(G, v):
    d = 0
    p = first_arc(G, v)
    while p >= 0:
        if not G[8][p]:
            d += 1
        p = next_arc(G, p, v)
    return d


@njit(cache=True)
def search(G, fstate, use_flow, backward, mask, use_mask, s, t,
           stamp, tag, parent, cursor, stack):
    """Depth-first search from ``s`` with an explicit stack.

    Forward mode follows residual arcs leaving the current node; backward
    mode follows residual arcs entering it, so visited nodes are those that
    can reach ``s``.  ``parent[y]`` is the arc that discovered ``y``, oriented
    in the residual direction.  Stops as soon as ``t`` is stamped.
    """
    head = G[5]
    rev = G[6]
    pdead = G[8]
    stamp[s] = tag
    parent[s] = -1
    cursor[s] = first_arc(G, s)
    stack[0] = s
    sp = 1
    scans = 0
    if s == t:
        return True, scans
    while sp > 0:
        x = stack[sp - 1]
        p = cursor[x]
        if p < 0:
            sp -= 1
            continue
        cursor[x] = next_arc(G, p, x)
        scans += 1
        if pdead[p]:
            continue
        if use_flow:
            if backward:
                if fstate[p] & REV_IN_F:
                    continue
            elif fstate[p] & IN_F:
                continue
        y = head[p]
        if stamp[y] == tag:
            continue
        if use_mask and not mask[y]:
            continue
        stamp[y] = tag
        if backward:
            parent[y] = rev[p]
        else:
            parent[y] = p
        cursor[y] = first_arc(G, y)
        stack[sp] = y
        sp += 1
        if y == t:
            return True, scans
    return False, scans


@njit(cache=True, inline="always")
def push_arc(fstate, rev, a):
    """Flip one arc of an augmenting path: cancel a reverse unit or add a forward one."""
    r = rev[a]
    if fstate[a] & REV_IN_F:
        fstate[r] &= REV_IN_F
        fstate[a] &= IN_F
    else:
        fstate[a] |= IN_F
        fstate[r] |= REV_IN_F


@njit(cache=True)
def augment_parents(G, fstate, parent, s, t):
    head = G[5]
    rev = G[6]
    y = t
    while y != s:
        a = parent[y]
        push_arc(fstate, rev, a)
        y = head[rev[a]]


@njit(cache=True)
def bounded_flow(G, fstate, s, t, r, stamp, tag, parent, cursor, stack, mask, use_mask):
    value = 0
    scans = 0
    while value < r:
        tag += 1
        found, sc = search(G, fstate, True, False, mask, use_mask, s, t,
                           stamp, tag, parent, cursor, stack)
        scans += sc
        if not found:
            break
        augment_parents(G, fstate, parent, s, t)
        value += 1
    return value, tag, scans


@njit(cache=True)
def path_from_parents(G, parent, s, t):
    """Edge ids and node ids of the parent-pointer path ``s -> t``."""
    head = G[5]
    rev = G[6]
    eid = G[7]
    k = 0
    y = t
    while y != s:
        y = head[rev[parent[y]]]
        k += 1
    edges = np.empty(k, np.int64)
    nodes = np.empty(k + 1, np.int64)
    y = t
    nodes[k] = t
    i = k
    while y != s:
        a = parent[y]
        i -= 1
        edges[i] = eid[a]
        y = head[rev[a]]
        nodes[i] = y
    return edges, nodes


@njit(cache=True)
def components(G):
    n = G[0][0]
    label = np.full(n, -1, np.int64)
    stack = np.empty(n, np.int64)
    cursor = np.empty(n, np.int64)
    head = G[5]
    pdead = G[8]
    c = 0
    for r in range(n):
        if label[r] >= 0:
            continue
        label[r] = c
        stack[0] = r
        cursor[r] = first_arc(G, r)
        sp = 1
        while sp > 0:
            x = stack[sp - 1]
            p = cursor[x]
            if p < 0:
                sp -= 1
                continue
            cursor[x] = next_arc(G, p, x)
            if pdead[p]:
                continue
            y = head[p]
            if label[y] < 0:
                label[y] = c
                cursor[y] = first_arc(G, y)
                stack[sp] = y
                sp += 1
        c += 1
    return label


@njit(cache=True)
def walk_nodes(eu, ev, edges, start):
    nodes = np.empty(len(edges) + 1, np.int64)
    nodes[0] = start
    x = start
    for i in range(len(edges)):
        e = edges[i]
        if eu[e] == x:
            x = ev[e]
        elif ev[e] == x:
            x = eu[e]
        else:
            return nodes[: i + 1], False
        nodes[i + 1] = x
    return nodes, True


@njit(cache=True)
def simplify_walk(nodes, edges, n):
    """Shortcut every closed sub-walk; the result is node-simple."""
    pos = np.full(n, -1, np.int64)
    out_nodes = np.empty(len(nodes), np.int64)
    out_edges = np.empty(len(edges), np.int64)
    L = 0
    out_nodes[0] = nodes[0]
    pos[nodes[0]] = 0
    for i in range(len(edges)):
        y = nodes[i + 1]
        k = pos[y]
        if k >= 0:
            for j in range(k + 1, L + 1):
                pos[out_nodes[j]] = -1
            L = k
        else:
            out_edges[L] = edges[i]
            L += 1
            out_nodes[L] = y
            pos[y] = L
    return out_nodes[: L + 1].copy(), out_edges[:L].copy()


# ---------------------------------------------------------------- decompose

@njit(cache=True)
def _next_out(G, fstate, cursor, x):
    p = cursor[x]
    if p == -2:
        p = first_arc(G, x)
    while p >= 0 and (G[8][p] or not (fstate[p] & IN_F)):
        p = next_arc(G, p, x)
    if p >= 0:
        cursor[x] = next_arc(G, p, x)
    else:
        cursor[x] = -1
    return p


@njit(cache=True)
def _emit(wa, lo, hi, kind, out_arcs, seg_start, seg_kind, cnt):
    for i in range(lo, hi):
        out_arcs[cnt[0]] = wa[i]
        cnt[0] += 1
    seg_kind[cnt[1]] = kind
    cnt[1] += 1
    seg_start[cnt[1]] = cnt[0]


@njit(cache=True)
def _phase(G, fstate, cursor, pos, wn, wa, start, stop, kind,
           out_arcs, seg_start, seg_kind, cnt):
    head = G[5]
    while True:
        a = _next_out(G, fstate, cursor, start)
        if a < 0:
            return True
        L = 0
        wn[0] = start
        pos[start] = 0
        while True:
            y = head[a]
            wa[L] = a
            L += 1
            if y == stop:
                _emit(wa, 0, L, kind, out_arcs, seg_start, seg_kind, cnt)
                for i in range(L):
                    pos[wn[i]] = -1
                break
            k = pos[y]
            if k >= 0:
                _emit(wa, k, L, 2, out_arcs, seg_start, seg_kind, cnt)
                for i in range(k + 1, L):
                    pos[wn[i]] = -1
                L = k
            else:
                wn[L] = y
                pos[y] = L
            a = _next_out(G, fstate, cursor, wn[L])
            if a < 0:
                if L == 0:
                    pos[start] = -1
                    break
                return False


@njit(cache=True)
def decompose(G, fstate, s, t):
    """Split F into s-t paths (kind 0), t-s paths (kind 1) and cycles (kind 2).

    Walks keep a position index per node so that every emitted path is
    node-simple; closed sub-walks are emitted as cycles on the spot.
    """
    n = G[0][0]
    npos = G[0][2]
    cursor = np.full(n, -2, np.int64)
    pos = np.full(n, -1, np.int64)
    wn = np.empty(n + 1, np.int64)
    wa = np.empty(n + 1, np.int64)
    out_arcs = np.empty(npos, np.int64)
    seg_start = np.zeros(npos + 1, np.int64)
    seg_kind = np.zeros(npos, np.int64)
    cnt = np.zeros(2, np.int64)
    ok = _phase(G, fstate, cursor, pos, wn, wa, s, t, 0, out_arcs, seg_start, seg_kind, cnt)
    if ok:
        ok = _phase(G, fstate, cursor, pos, wn, wa, t, s, 1, out_arcs, seg_start, seg_kind, cnt)
    if ok:
        for x in range(n):
            ok = _phase(G, fstate, cursor, pos, wn, wa, x, -1, 2,
                        out_arcs, seg_start, seg_kind, cnt)
            if not ok:
                break
    nseg = cnt[1]
    return ok, out_arcs[: cnt[0]].copy(), seg_start[: nseg + 1].copy(), seg_kind[:nseg].copy()


# ---------------------------------------------------------------- dynreach
#
# State: ds (int64 scalars), fstate, covered, parent, cursor, stack, covlist.
# The tree is stored as parent arcs pointing towards t; covlist records the
# covered nodes so a rebuild can clear them without an O(n) sweep.

@njit(cache=True)
def dr_extend(G, ds, fstate, covered, parent, cursor, stack, sp, covlist):
    s = ds[D_S]
    head = G[5]
    rev = G[6]
    pdead = G[8]
    scans = 0
    while sp > 0:
        x = stack[sp - 1]
        p = cursor[x]
        if p < 0:
            sp -= 1
            continue
        cursor[x] = next_arc(G, p, x)
        scans += 1
        if pdead[p] or fstate[p] & REV_IN_F:
            continue
        y = head[p]
        if covered[y]:
            continue
        covered[y] = True
        parent[y] = rev[p]
        covlist[ds[D_NCOV]] = y
        ds[D_NCOV] += 1
        cursor[y] = first_arc(G, y)
        if y == s:
            ds[D_SCANS] += scans
            return True
        stack[sp] = y
        sp += 1
    ds[D_SCANS] += scans
    return False


@njit(cache=True)
def dr_rebuild(G, ds, fstate, covered, parent, cursor, stack, covlist):
    for i in range(ds[D_NCOV]):
        covered[covlist[i]] = False
    ds[D_NCOV] = 0
    t = ds[D_T]
    covered[t] = True
    parent[t] = -1
    covlist[0] = t
    ds[D_NCOV] = 1
    cursor[t] = first_arc(G, t)
    stack[0] = t
    return dr_extend(G, ds, fstate, covered, parent, cursor, stack, 1, covlist)


@njit(cache=True)
def dr_settle(G, ds, fstate, covered, parent, cursor, stack, covlist, broke):
    """Handle breakthroughs: augment along the tree and rebuild it."""
    head = G[5]
    rev = G[6]
    while broke:
        x = ds[D_S]
        while x != ds[D_T]:
            a = parent[x]
            push_arc(fstate, rev, a)
            x = head[a]
        ds[D_VALUE] += 1
        ds[D_BREAKS] += 1
        if ds[D_VALUE] >= ds[D_R]:
            return
        broke = dr_rebuild(G, ds, fstate, covered, parent, cursor, stack, covlist)


@njit(cache=True)
def dr_init(G, ds, fstate, covered, parent, cursor, stack, covlist, stamp):
    empty = np.zeros(0, np.bool_)
    value, tag, scans = bounded_flow(G, fstate, ds[D_S], ds[D_T], ds[D_R], stamp, 0,
                                     parent, cursor, stack, empty, False)
    ds[D_VALUE] = value
    ds[D_SCANS] += scans
    if value < ds[D_R]:
        broke = dr_rebuild(G, ds, fstate, covered, parent, cursor, stack, covlist)
        if broke:
            return False
    return True


@njit(cache=True)
def dr_insert_arc(G, ds, fstate, covered, parent, cursor, stack, covlist, a):
    """Extend the tree if arc ``a`` is residual and enters the covered set."""
    ds[D_SCANS] += 1
    if G[8][a] or fstate[a] & IN_F:
        return False
    q = G[5][a]
    p = G[5][G[6][a]]
    if not covered[q] or covered[p]:
        return False
    covered[p] = True
    parent[p] = a
    covlist[ds[D_NCOV]] = p
    ds[D_NCOV] += 1
    cursor[p] = first_arc(G, p)
    if p == ds[D_S]:
        return True
    stack[0] = p
    return dr_extend(G, ds, fstate, covered, parent, cursor, stack, 1, covlist)


@njit(cache=True)
def dr_add_edge(G, ds, fstate, covered, parent, cursor, stack, covlist, u, v, f_uv, f_vu):
    e = add_edge(G, u, v)
    if e < 0:
        return -1
    p = G[12][e]
    q = G[6][p]
    fstate[p] = 0
    fstate[q] = 0
    if f_uv:
        fstate[p] |= IN_F
        fstate[q] |= REV_IN_F
    if f_vu:
        fstate[q] |= IN_F
        fstate[p] |= REV_IN_F
    return e


@njit(cache=True)
def dr_absorb(G, ds, fstate, covered, parent, cursor, stack, covlist, e):
    """Run the insertion rule on both arcs of a freshly added edge."""
    p = np.int64(G[12][e])
    q = np.int64(G[6][p])
    for a in (p, q):
        if ds[D_VALUE] >= ds[D_R]:
            return
        broke = dr_insert_arc(G, ds, fstate, covered, parent, cursor, stack, covlist, a)
        dr_settle(G, ds, fstate, covered, parent, cursor, stack, covlist, broke)


@njit(cache=True)
def dr_insert(G, ds, fstate, covered, parent, cursor, stack, covlist, u, v):
    e = dr_add_edge(G, ds, fstate, covered, parent, cursor, stack, covlist, u, v, False, False)
    if e >= 0:
        dr_absorb(G, ds, fstate, covered, parent, cursor, stack, covlist, e)
    return e


@njit(cache=True)
def dr_move(G, ds, fstate, covered, parent, cursor, stack, covlist, e_sv, v, v2):
    """Replace edge s-v by s-v2 and v2-v; returns the id of the new s-v2 edge."""
    s = ds[D_S]
    p = G[12][e_sv]
    if G[5][p] != v:
        p = G[6][p]
    q = G[6][p]
    f_out = (fstate[p] & IN_F) != 0
    f_in = (fstate[q] & IN_F) != 0
    kill_edge(G, e_sv)
    fstate[p] = 0
    fstate[q] = 0
    e1 = dr_add_edge(G, ds, fstate, covered, parent, cursor, stack, covlist, s, v2, f_out, f_in)
    if e1 < 0:
        return -1
    e2 = dr_add_edge(G, ds, fstate, covered, parent, cursor, stack, covlist, v2, v, f_out, f_in)
    if e2 < 0:
        return -1
    dr_absorb(G, ds, fstate, covered, parent, cursor, stack, covlist, e1)
    dr_absorb(G, ds, fstate, covered, parent, cursor, stack, covlist, e2)
    return e1


@njit(cache=True)
def dr_replay(G, ds, fstate, covered, parent, cursor, stack, covlist, nodes, move_edge):
    """Walk a terminal back along ``nodes`` (last to first) until saturation.

    With ``move_edge >= 0`` each step is a Move of the source edge; otherwise
    each step only re-inserts the traversed edge.  Returns the level at which
    the query first reports ``r`` (or -1).
    """
    i = len(nodes) - 1
    if ds[D_VALUE] >= ds[D_R]:
        return i
    while i > 0:
        v = nodes[i]
        v2 = nodes[i - 1]
        if move_edge >= 0:
            move_edge = dr_move(G, ds, fstate, covered, parent, cursor, stack, covlist,
                                move_edge, v, v2)
            if move_edge < 0:
                return -2
        else:
            if dr_insert(G, ds, fstate, covered, parent, cursor, stack, covlist, v2, v) < 0:
                return -2
        i -= 1
        if ds[D_VALUE] >= ds[D_R]:
            return i
    return -1

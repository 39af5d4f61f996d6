"""Clustering decoder for Z_d syndromes on a syndrome graph.

Grow/merge/neutralize tree clusters: every charged check seeds a
cluster; non-neutral clusters grow one ring of neighbors per epoch,
clusters meeting each other merge (smaller hung as a subtree of the
larger), and a cluster is neutral once its total Z_d charge vanishes or
it touches the auxiliary boundary node.  Neutral clusters are peeled by
transporting each node charge along its tree path to the root (or out
through the boundary), producing a correction y with H y = syndrome.

Deterministic: clusters are processed in creation order and neighbors
in ascending node index.  The hot loop is numba-compiled when numba is
importable, with an identical pure-Python fallback.
"""

from __future__ import annotations

import numpy as np

from .checks import SyndromeGraph

try:  # pragma: no cover - exercised implicitly
    from numba import njit

    HAVE_NUMBA = True
except Exception:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        if args and callable(args[0]):
            return args[0]
        return wrap


@njit(cache=True)
def _cluster_core(
    indptr,
    adj_node,
    adj_edge,
    adj_coef,
    edge_u,
    edge_v,
    coef_u,
    coef_v,
    aux,
    charges,
    d,
    y_edges,
    growth_mode,
):
    nn = aux + 1
    n_nodes = aux  # real check nodes
    # union-find over clusters, indexed by seed slot
    seeds = np.nonzero(charges)[0]
    n_seed = len(seeds)
    if n_seed == 0:
        return 0
    uf_parent = np.arange(n_seed)
    charge = np.zeros(n_seed, dtype=np.int64)
    has_aux = np.zeros(n_seed, dtype=np.uint8)
    aux_leaf = np.full(n_seed, -1, dtype=np.int64)
    aux_edge = np.full(n_seed, -1, dtype=np.int64)
    size = np.ones(n_seed, dtype=np.int64)
    alive = np.ones(n_seed, dtype=np.uint8)

    cluster_of = np.full(nn, -1, dtype=np.int64)  # node -> uf slot (not compressed)
    tree_parent = np.full(nn, -1, dtype=np.int64)
    tree_edge = np.full(nn, -1, dtype=np.int64)
    # member linked lists per cluster
    member_head = np.full(n_seed, -1, dtype=np.int64)
    member_tail = np.full(n_seed, -1, dtype=np.int64)
    next_member = np.full(nn, -1, dtype=np.int64)
    # frontier linked lists
    front_head = np.full(n_seed, -1, dtype=np.int64)
    front_tail = np.full(n_seed, -1, dtype=np.int64)
    next_front = np.full(nn, -1, dtype=np.int64)

    def find(a):
        while uf_parent[a] != a:
            uf_parent[a] = uf_parent[uf_parent[a]]
            a = uf_parent[a]
        return a

    for i in range(n_seed):
        s = seeds[i]
        charge[i] = charges[s] % d
        cluster_of[s] = i
        member_head[i] = s
        member_tail[i] = s
        front_head[i] = s
        front_tail[i] = s

    cap_merge = 2 * len(edge_u) + 8
    merge_a = np.empty(cap_merge, dtype=np.int64)
    merge_b = np.empty(cap_merge, dtype=np.int64)
    merge_leaf = np.empty(cap_merge, dtype=np.int64)
    merge_node = np.empty(cap_merge, dtype=np.int64)
    merge_edge = np.empty(cap_merge, dtype=np.int64)

    remaining = n_seed
    epochs = 0
    epoch_rings = 1
    while remaining > 0:
        epochs += 1
        if epochs > 4 * nn + 8:
            return -1  # cannot happen for globally neutral syndromes
        n_merge = 0
        grew = False
        # ---- grow ----
        for ci in range(n_seed):
            if not alive[ci] or find(ci) != ci:
                continue
            if has_aux[ci] or charge[ci] % d == 0:
                continue
            if front_head[ci] == -1:
                # frontier exhausted: fall back to scanning all members
                u = member_head[ci]
                prev = np.int64(-1)
                while u != -1:
                    if prev == -1:
                        front_head[ci] = u
                    else:
                        next_front[prev] = u
                    prev = u
                    u = next_member[u]
                front_tail[ci] = prev
            rings = 0
            max_rings = 1
            if growth_mode == 1:
                max_rings = aux + 2  # until neutral or exhausted
            elif growth_mode == 2:
                max_rings = epoch_rings
            while True:
                rings += 1
                new_head = np.int64(-1)
                new_tail = np.int64(-1)
                stop = False
                leaf = front_head[ci]
                front_head[ci] = -1
                front_tail[ci] = -1
                while leaf != -1 and not stop:
                    nxt_leaf = next_front[leaf]
                    next_front[leaf] = -1
                    for k in range(indptr[leaf], indptr[leaf + 1]):
                        w = adj_node[k]
                        e = adj_edge[k]
                        if w == aux:
                            if has_aux[ci] == 0:
                                has_aux[ci] = 1
                                aux_leaf[ci] = leaf
                                aux_edge[ci] = e
                                stop = True
                                break
                            continue
                        cw = cluster_of[w]
                        if cw == -1:
                            # absorb an unclustered node
                            cluster_of[w] = ci
                            tree_parent[w] = leaf
                            tree_edge[w] = e
                            next_member[member_tail[ci]] = w
                            member_tail[ci] = w
                            size[ci] += 1
                            if new_head == -1:
                                new_head = w
                            else:
                                next_front[new_tail] = w
                            new_tail = w
                            grew = True
                        else:
                            rw = find(cw)
                            rc = find(ci)
                            if rw != rc:
                                merge_a[n_merge] = rc
                                merge_b[n_merge] = rw
                                merge_leaf[n_merge] = leaf
                                merge_node[n_merge] = w
                                merge_edge[n_merge] = e
                                n_merge += 1
                                grew = True
                                combined = (charge[rc] + charge[rw]) % d
                                if combined == 0 or has_aux[rw]:
                                    stop = True
                                    break
                    if stop:
                        # requeue the partially scanned leaf with the rest
                        next_front[leaf] = nxt_leaf
                        break
                    leaf = nxt_leaf
                # next ring: new nodes plus any unprocessed leaves
                if new_head != -1:
                    front_head[ci] = new_head
                    front_tail[ci] = new_tail
                if leaf != -1:
                    if front_head[ci] == -1:
                        front_head[ci] = leaf
                    else:
                        next_front[front_tail[ci]] = leaf
                    cur = leaf
                    while next_front[cur] != -1:
                        cur = next_front[cur]
                    front_tail[ci] = cur
                if stop or new_head == -1 or rings >= max_rings:
                    break
        # ---- merge ----
        for mi in range(n_merge):
            ra = find(merge_a[mi])
            rb = find(merge_b[mi])
            if ra == rb:
                continue
            # attach the smaller cluster as a subtree of the larger
            if size[ra] >= size[rb]:
                big, small = ra, rb
                contact_small = merge_node[mi]
                contact_big = merge_leaf[mi]
            else:
                big, small = rb, ra
                contact_small = merge_leaf[mi]
                contact_big = merge_node[mi]
            # re-root the small tree at its contact node
            prev = np.int64(-1)
            prev_edge = np.int64(-1)
            cur = contact_small
            while cur != -1:
                nxt = tree_parent[cur]
                nxt_edge = tree_edge[cur]
                tree_parent[cur] = prev
                tree_edge[cur] = prev_edge
                prev = cur
                prev_edge = nxt_edge
                cur = nxt
            tree_parent[contact_small] = contact_big
            tree_edge[contact_small] = merge_edge[mi]
            # union: keep the earlier slot as root for stable ordering
            root = ra if ra < rb else rb
            other = rb if root == ra else ra
            uf_parent[other] = root
            if root != big:
                # move accumulated data onto the surviving slot
                pass
            charge[root] = (charge[ra] + charge[rb]) % d
            has_aux[root] = has_aux[ra] | has_aux[rb]
            if aux_edge[root] == -1 and aux_edge[other] != -1:
                aux_leaf[root] = aux_leaf[other]
                aux_edge[root] = aux_edge[other]
            size[root] = size[ra] + size[rb]
            # concatenate member and frontier lists
            if member_head[other] != -1:
                next_member[member_tail[root]] = member_head[other]
                member_tail[root] = member_tail[other]
            if front_head[other] != -1:
                if front_head[root] == -1:
                    front_head[root] = front_head[other]
                else:
                    next_front[front_tail[root]] = front_head[other]
                front_tail[root] = front_tail[other]
            alive[other] = 0
            remaining -= 1
        # ---- neutralize ----
        for ci in range(n_seed):
            if not alive[ci] or find(ci) != ci:
                continue
            if charge[ci] % d != 0 and not has_aux[ci]:
                continue
            # transport every member's charge to the root (tree roots have
            # parent -1); with a boundary contact, continue out through it
            u = member_head[ci]
            while u != -1:
                q = charges[u] % d
                if q:
                    v = u
                    while tree_parent[v] != -1:
                        e = tree_edge[v]
                        cu = coef_u[e] if edge_u[e] == v else coef_v[e]
                        y_edges[e] = (y_edges[e] + q * cu) % d
                        v = tree_parent[v]
                u = next_member[u]
            if has_aux[ci] and charge[ci] % d != 0:
                # the root now holds the total charge; route it to the
                # boundary contact leaf (push -q leaf-to-root, equivalent
                # to q root-to-leaf) and out through the auxiliary edge
                v = aux_leaf[ci]
                q = charge[ci] % d
                w = v
                while tree_parent[w] != -1:
                    e = tree_edge[w]
                    cw = coef_u[e] if edge_u[e] == w else coef_v[e]
                    y_edges[e] = (y_edges[e] - q * cw) % d
                    w = tree_parent[w]
                e = aux_edge[ci]
                cl = coef_u[e] if edge_u[e] == v else coef_v[e]
                y_edges[e] = (y_edges[e] + q * cl) % d
            # dissolve: zero residual charges so a later cluster growing
            # over this region cannot transport them twice
            u = member_head[ci]
            while u != -1:
                charges[u] = 0
                cluster_of[u] = -1
                nxt = next_member[u]
                next_member[u] = -1
                next_front[u] = -1
                u = nxt
            alive[ci] = 0
            remaining -= 1
        if growth_mode == 2 and epoch_rings < nn:
            epoch_rings *= 2
        if not grew and remaining > 0:
            # no growth: first re-open any spent regions, then give up
            any_neutral = False
            for ci in range(n_seed):
                if alive[ci] and find(ci) == ci:
                    if charge[ci] % d == 0 or has_aux[ci]:
                        any_neutral = True
            if not any_neutral:
                return -1
    return 0


def cluster_decode(
    g: SyndromeGraph,
    syndrome: np.ndarray,
    d: int | None = None,
    growth: str = "ring",
) -> np.ndarray:
    """Correction y over the variables with H y = syndrome (mod d).

    Growth schedules: "ring" adds one ring of neighbors per epoch,
    "until_neutral" keeps ringing within a Grow pass until the cluster
    can neutralize, "doubling" doubles the ring budget every epoch.
    """
    d = g.d if d is None else d
    syndrome = np.asarray(syndrome, dtype=np.int64) % d
    if syndrome.shape != (g.m,):
        raise ValueError(f"syndrome must have length {g.m}")
    charges = np.zeros(g.m + 1, dtype=np.int64)
    charges[: g.m] = syndrome
    y_edges = np.zeros(g.n_edges, dtype=np.int64)
    status = _cluster_core(
        g.adj_indptr,
        g.adj_node,
        g.adj_edge,
        g.adj_coef,
        g.edge_u,
        g.edge_v,
        g.coef_u,
        g.coef_v,
        g.aux,
        charges,
        d,
        y_edges,
        {"ring": 0, "until_neutral": 1, "doubling": 2}[growth],
    )
    if status != 0:
        raise RuntimeError("clustering decoder: unsatisfiable syndrome")
    y = np.zeros(g.ncols, dtype=np.int64)
    y[g.edge_col] = y_edges
    return y

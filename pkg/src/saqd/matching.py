"""Minimum-weight perfect matching decoder for binary syndromes.

Defects (checks with nonzero syndrome, d = 2) are paired with minimum
total hop distance on the syndrome graph; any defect may instead
terminate on the auxiliary boundary node.  Pairwise distances come from
cached all-pairs BFS, and the pairing is an exact maximum-weight
perfect matching (blossom algorithm, O(n^3)) on the complete defect
graph with weights

    w(u, v) = min(dist(u, v), dist(u, aux) + dist(v, aux)),

plus one virtual boundary defect when the defect count is odd.  The
correction flips variables along BFS shortest paths realizing each
matched pair.

The blossom core is the classic array-based primal-dual algorithm
(nodes 1..n, blossoms n+1..2n), written flat so numba can compile it;
recursions are replaced by explicit stacks.
"""

from __future__ import annotations

import numpy as np

from .checks import SyndromeGraph, all_pairs_bfs

try:  # pragma: no cover
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
def _blossom_core(w2):
    """Maximum-weight perfect matching, doubled integer weights w2 > 0.

    Returns match (1-indexed; match[u] = partner of u, 0 if none).
    Ports the standard O(n^3) blossom template onto flat arrays.
    """
    n = w2.shape[0] - 1  # w2 is (n+1)x(n+1), 1-indexed
    N = 2 * n + 1
    INF = np.int64(1) << 60

    g_u = np.zeros((N + 1, N + 1), dtype=np.int64)
    g_v = np.zeros((N + 1, N + 1), dtype=np.int64)
    g_w = np.zeros((N + 1, N + 1), dtype=np.int64)
    for u in range(1, n + 1):
        for v in range(1, n + 1):
            g_u[u, v] = u
            g_v[u, v] = v
            if u != v:
                g_w[u, v] = w2[u, v]

    match = np.zeros(N + 1, dtype=np.int64)
    slack = np.zeros(N + 1, dtype=np.int64)
    st = np.zeros(N + 1, dtype=np.int64)
    pa = np.zeros(N + 1, dtype=np.int64)
    S = np.full(N + 1, -1, dtype=np.int64)
    vis = np.zeros(N + 1, dtype=np.int64)
    lab = np.zeros(N + 1, dtype=np.int64)
    flower = np.zeros((N + 1, N + 1), dtype=np.int64)
    flower_sz = np.zeros(N + 1, dtype=np.int64)
    flower_from = np.zeros((N + 1, n + 1), dtype=np.int64)
    q = np.zeros(4 * N * N + 16, dtype=np.int64)
    stack = np.zeros(4 * N + 16, dtype=np.int64)
    mstack_u = np.zeros(4 * N + 16, dtype=np.int64)
    mstack_v = np.zeros(4 * N + 16, dtype=np.int64)

    n_x = n
    for u in range(1, n + 1):
        st[u] = u
        flower_from[u, u] = u
    wmax = np.int64(0)
    for u in range(1, n + 1):
        for v in range(1, n + 1):
            if g_w[u, v] > wmax:
                wmax = g_w[u, v]
    for u in range(1, n + 1):
        lab[u] = wmax // 2

    q_head = np.int64(0)
    q_tail = np.int64(0)
    t_vis = np.int64(0)

    def e_delta(u, v):
        return lab[g_u[u, v]] + lab[g_v[u, v]] - g_w[u, v]

    def update_slack(u, x):
        if slack[x] == 0 or e_delta(u, x) < e_delta(slack[x], x):
            slack[x] = u

    def set_slack(x):
        slack[x] = 0
        for u in range(1, n + 1):
            if g_w[u, x] > 0 and st[u] != x and S[st[u]] == 0:
                update_slack(u, x)

    def q_push(x, q_tail_in):
        q_tail_loc = q_tail_in
        sp = 0
        stack[sp] = x
        sp += 1
        while sp > 0:
            sp -= 1
            y = stack[sp]
            if y <= n:
                q[q_tail_loc] = y
                q_tail_loc += 1
            else:
                for i in range(flower_sz[y] - 1, -1, -1):
                    stack[sp] = flower[y, i]
                    sp += 1
        return q_tail_loc

    def set_st(x, b):
        sp = 0
        stack[sp] = x
        sp += 1
        while sp > 0:
            sp -= 1
            y = stack[sp]
            st[y] = b
            if y > n:
                for i in range(flower_sz[y]):
                    stack[sp] = flower[y, i]
                    sp += 1

    def get_pr(b, xr):
        pr = 0
        for i in range(flower_sz[b]):
            if flower[b, i] == xr:
                pr = i
                break
        if pr % 2 == 1:
            l = 1
            r = flower_sz[b] - 1
            while l < r:
                tmp = flower[b, l]
                flower[b, l] = flower[b, r]
                flower[b, r] = tmp
                l += 1
                r -= 1
            return flower_sz[b] - pr
        return pr

    def set_match(u0, v0):
        msp = 0
        mstack_u[msp] = u0
        mstack_v[msp] = v0
        msp += 1
        while msp > 0:
            msp -= 1
            u = mstack_u[msp]
            v = mstack_v[msp]
            match[u] = g_v[u, v]
            if u > n:
                eu = g_u[u, v]
                xr = flower_from[u, eu]
                pr = get_pr(u, xr)
                for i in range(pr):
                    mstack_u[msp] = flower[u, i]
                    mstack_v[msp] = flower[u, i ^ 1]
                    msp += 1
                mstack_u[msp] = xr
                mstack_v[msp] = v
                msp += 1
                # rotate flower[u] left by pr
                sz = flower_sz[u]
                tmp = np.empty(sz, dtype=np.int64)
                for i in range(sz):
                    tmp[i] = flower[u, (pr + i) % sz]
                for i in range(sz):
                    flower[u, i] = tmp[i]
        return 0

    def augment(u0, v0):
        u = u0
        v = v0
        while True:
            xnv = st[match[u]]
            set_match(u, v)
            if xnv == 0:
                return 0
            set_match(xnv, st[pa[xnv]])
            u = st[pa[xnv]]
            v = xnv

    def get_lca(u0, v0, t_in):
        t = t_in + 1
        u = u0
        v = v0
        while u != 0 or v != 0:
            if u != 0:
                if vis[u] == t:
                    return u, t
                vis[u] = t
                u = st[match[u]]
                if u != 0:
                    u = st[pa[u]]
            tmp = u
            u = v
            v = tmp
        return 0, t

    def add_blossom(u, lca, v, n_x_in, q_tail_in):
        n_x_loc = n_x_in
        q_tail_loc = q_tail_in
        b = n + 1
        while b <= n_x_loc and st[b] != 0:
            b += 1
        if b > n_x_loc:
            n_x_loc += 1
        lab[b] = 0
        S[b] = 0
        match[b] = match[lca]
        flower_sz[b] = 0
        flower[b, 0] = lca
        flower_sz[b] = 1
        x = u
        while x != lca:
            flower[b, flower_sz[b]] = x
            flower_sz[b] += 1
            y = st[match[x]]
            flower[b, flower_sz[b]] = y
            flower_sz[b] += 1
            q_tail_loc = q_push(y, q_tail_loc)
            x = st[pa[y]]
        # reverse flower[b][1:]
        l = 1
        r = flower_sz[b] - 1
        while l < r:
            tmp = flower[b, l]
            flower[b, l] = flower[b, r]
            flower[b, r] = tmp
            l += 1
            r -= 1
        x = v
        while x != lca:
            flower[b, flower_sz[b]] = x
            flower_sz[b] += 1
            y = st[match[x]]
            flower[b, flower_sz[b]] = y
            flower_sz[b] += 1
            q_tail_loc = q_push(y, q_tail_loc)
            x = st[pa[y]]
        set_st(b, b)
        for x in range(1, n_x_loc + 1):
            g_w[b, x] = 0
            g_w[x, b] = 0
        for x in range(1, n + 1):
            flower_from[b, x] = 0
        for i in range(flower_sz[b]):
            xs = flower[b, i]
            for x in range(1, n_x_loc + 1):
                if g_w[b, x] == 0 or (
                    g_w[xs, x] > 0 and e_delta(xs, x) < e_delta(b, x)
                ):
                    if g_w[xs, x] > 0:
                        g_u[b, x] = g_u[xs, x]
                        g_v[b, x] = g_v[xs, x]
                        g_w[b, x] = g_w[xs, x]
                        g_u[x, b] = g_u[x, xs]
                        g_v[x, b] = g_v[x, xs]
                        g_w[x, b] = g_w[x, xs]
            for x in range(1, n + 1):
                if flower_from[xs, x] != 0:
                    flower_from[b, x] = xs
        set_slack(b)
        return n_x_loc, q_tail_loc

    def expand_blossom(b, q_tail_in):
        q_tail_loc = q_tail_in
        for i in range(flower_sz[b]):
            set_st(flower[b, i], flower[b, i])
        xr = flower_from[b, g_u[b, pa[b]]]
        pr = get_pr(b, xr)
        i = 0
        while i < pr:
            xs = flower[b, i]
            xns = flower[b, i + 1]
            pa[xs] = g_u[xns, xs]
            S[xs] = 1
            S[xns] = 0
            slack[xs] = 0
            set_slack(xns)
            q_tail_loc = q_push(xns, q_tail_loc)
            i += 2
        S[xr] = 1
        pa[xr] = pa[b]
        for i in range(pr + 1, flower_sz[b]):
            xs = flower[b, i]
            S[xs] = -1
            set_slack(xs)
        st[b] = 0
        flower_sz[b] = 0
        return q_tail_loc

    def on_found_edge(eu, ev, n_x_in, q_tail_in, t_in):
        # returns (augmented, n_x, q_tail, t)
        n_x_loc = n_x_in
        q_tail_loc = q_tail_in
        t_loc = t_in
        u = st[g_u[eu, ev]]
        v = st[g_v[eu, ev]]
        if S[v] == -1:
            pa[v] = g_u[eu, ev]
            S[v] = 1
            nu = st[match[v]]
            slack[v] = 0
            slack[nu] = 0
            S[nu] = 0
            q_tail_loc = q_push(nu, q_tail_loc)
        elif S[v] == 0:
            lca, t_loc = get_lca(u, v, t_loc)
            if lca == 0:
                augment(u, v)
                augment(v, u)
                return True, n_x_loc, q_tail_loc, t_loc
            else:
                n_x_loc, q_tail_loc = add_blossom(u, lca, v, n_x_loc, q_tail_loc)
        return False, n_x_loc, q_tail_loc, t_loc

    # main phases
    while True:
        # start a phase: rebuild forest roots
        for i in range(N + 1):
            S[i] = -1
            slack[i] = 0
        q_head = 0
        q_tail = 0
        found_root = False
        for x in range(1, n_x + 1):
            if st[x] == x and match[x] == 0:
                pa[x] = 0
                S[x] = 0
                q_tail = q_push(x, q_tail)
                found_root = True
        if not found_root:
            break
        augmented = False
        while not augmented:
            while q_head < q_tail and not augmented:
                u = q[q_head]
                q_head += 1
                if S[st[u]] == 1:
                    continue
                for v in range(1, n + 1):
                    if g_w[u, v] > 0 and st[u] != st[v]:
                        if e_delta(u, v) == 0:
                            aug, n_x, q_tail, t_vis = on_found_edge(
                                u, v, n_x, q_tail, t_vis
                            )
                            if aug:
                                augmented = True
                                break
                        else:
                            update_slack(u, st[v])
            if augmented:
                break
            # dual adjustment
            d = INF
            for b in range(n + 1, n_x + 1):
                if st[b] == b and S[b] == 1:
                    if lab[b] // 2 < d:
                        d = lab[b] // 2
            for x in range(1, n_x + 1):
                if st[x] == x and slack[x] != 0:
                    if S[x] == -1:
                        if e_delta(slack[x], x) < d:
                            d = e_delta(slack[x], x)
                    elif S[x] == 0:
                        if e_delta(slack[x], x) // 2 < d:
                            d = e_delta(slack[x], x) // 2
            if d >= INF:
                return match  # no augmenting path exists at all
            stop = False
            for u in range(1, n + 1):
                if S[st[u]] == 0:
                    if lab[u] <= d:
                        stop = True
                    lab[u] -= d
                elif S[st[u]] == 1:
                    lab[u] += d
            for b in range(n + 1, n_x + 1):
                if st[b] == b and S[b] != -1:
                    if S[b] == 0:
                        lab[b] += 2 * d
                    else:
                        lab[b] -= 2 * d
            if stop:
                # free vertex dual hit zero: maximum matching reached
                return match
            q_head = 0
            q_tail = 0
            for x in range(1, n_x + 1):
                if (
                    st[x] == x
                    and slack[x] != 0
                    and st[slack[x]] != x
                    and e_delta(slack[x], x) == 0
                ):
                    aug, n_x, q_tail, t_vis = on_found_edge(
                        slack[x], x, n_x, q_tail, t_vis
                    )
                    if aug:
                        augmented = True
                        break
            if not augmented:
                for b in range(n + 1, n_x + 1):
                    if st[b] == b and S[b] == 1 and lab[b] == 0:
                        q_tail = expand_blossom(b, q_tail)
    return match


def blossom_max_weight_perfect(w: np.ndarray) -> np.ndarray:
    """Maximum-weight perfect matching on a complete graph.

    `w` is an (n x n) symmetric nonnegative integer matrix with even n.
    Returns mate, where mate[i] = j.  Weights are offset internally so
    the maximum-weight matching is forced to be perfect.
    """
    n = w.shape[0]
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    if n % 2:
        raise ValueError("perfect matching needs an even number of nodes")
    wmax = int(w.max())
    big = wmax * n + n + 1
    # maximize (big + wmax - w): minimizes w, with big forcing perfection
    w2 = np.zeros((n + 1, n + 1), dtype=np.int64)
    w2[1:, 1:] = 2 * (big + wmax - w.astype(np.int64))
    np.fill_diagonal(w2, 0)
    match = _blossom_core(w2)
    mate = np.full(n, -1, dtype=np.int64)
    for u in range(1, n + 1):
        if match[u] > 0:
            mate[u - 1] = match[u] - 1
    if (mate < 0).any():
        raise RuntimeError("blossom failed to find a perfect matching")
    return mate


def minimum_weight_perfect_matching(w: np.ndarray) -> np.ndarray:
    """Minimum-weight perfect matching via the blossom core."""
    return blossom_max_weight_perfect(np.asarray(w))


def mwpm_decode(g: SyndromeGraph, syndrome: np.ndarray, d: int = 2) -> np.ndarray:
    """Minimum-weight perfect matching correction for binary syndromes."""
    if d != 2 or g.d != 2:
        raise ValueError("matching decoder requires local dimension 2")
    syndrome = np.asarray(syndrome, dtype=np.int64) % 2
    if syndrome.shape != (g.m,):
        raise ValueError(f"syndrome must have length {g.m}")
    defects = np.nonzero(syndrome)[0]
    y = np.zeros(g.ncols, dtype=np.int64)
    if len(defects) == 0:
        return y
    dist, pred = all_pairs_bfs(g)
    aux = g.aux
    has_boundary = g.has_boundary()
    k = len(defects)
    use_virtual = bool(k % 2)
    if use_virtual and not has_boundary:
        raise RuntimeError("odd defect count on a closed syndrome graph")
    nodes = defects.astype(np.int64)
    size = k + (1 if use_virtual else 0)
    unreachable = np.int64(1) << 20
    direct_w = dist[np.ix_(nodes, nodes)].astype(np.int64)
    direct_w[direct_w < 0] = unreachable
    if has_boundary:
        d_aux = dist[nodes, aux].astype(np.int64)
        d_aux[d_aux < 0] = unreachable
        via = d_aux[:, None] + d_aux[None, :]
        pair_w = np.minimum(direct_w, via)
    else:
        d_aux = None
        pair_w = direct_w
    w = np.zeros((size, size), dtype=np.int64)
    w[:k, :k] = pair_w
    np.fill_diagonal(w, 0)
    if use_virtual:
        w[:k, k] = d_aux
        w[k, :k] = d_aux
    mate = minimum_weight_perfect_matching(w)
    done = np.zeros(size, dtype=bool)
    for i in range(size):
        j = int(mate[i])
        if done[i] or done[j]:
            continue
        done[i] = done[j] = True
        if use_virtual and (i == k or j == k):
            real = nodes[j] if i == k else nodes[i]
            _flip_path(g, pred, real, aux, y)
            continue
        u, v = nodes[i], nodes[j]
        direct = int(dist[u, v])
        via = None
        if has_boundary and dist[u, aux] >= 0 and dist[v, aux] >= 0:
            via = int(dist[u, aux]) + int(dist[v, aux])
        if direct >= 0 and (via is None or direct <= via):
            _flip_path(g, pred, u, v, y)
        else:
            _flip_path(g, pred, u, aux, y)
            _flip_path(g, pred, v, aux, y)
    return y


def _flip_path(g: SyndromeGraph, pred, src, dst, y):
    """Flip y along the BFS shortest path from src to dst."""
    cur = dst
    while cur != src:
        e = pred[src, cur]
        y[g.edge_col[e]] ^= 1
        cur = g.edge_u[e] if g.edge_v[e] == cur else g.edge_v[e]

"""Check matrices and syndrome graphs for the two decoding stages.

Stage 1 (flux validation): variables are the measured flux outcomes, one
per X-type gauge term; checks are the local relations they satisfy on
any physical state: zero total flux per sphere, and equal green/yellow
flux through every stabilized volume.  Stage 2 (qudit correction):
variables are the qudits, checks the local X-type stabilizers.

Both matrices have columns with at most two nonzero entries; rows are
sign-normalized so every two-entry column carries one +1 and one -1.
Columns then map to edges of a syndrome graph with one extra auxiliary
node standing in for the physical boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .code import SubsystemCode, X_TYPE
from .lattice import GREEN


@dataclass
class CheckMatrix:
    """Sparse check system over Z_d with column sparsity at most two."""

    m: int
    ncols: int
    d: int
    entries: list  # (row, col, value)

    def __post_init__(self):
        percol = {}
        for r, c, v in self.entries:
            percol.setdefault(c, []).append(v)
        for c, vals in percol.items():
            if len(vals) > 2:
                raise ValueError(f"column {c} has {len(vals)} entries (max 2)")

    def matrix(self) -> sp.csr_matrix:
        if not self.entries:
            return sp.csr_matrix((self.m, self.ncols), dtype=np.int64)
        rows, cols, vals = zip(*self.entries)
        return sp.csr_matrix(
            (np.array(vals, dtype=np.int64), (rows, cols)),
            shape=(self.m, self.ncols),
        )

    def syndrome(self, values: np.ndarray) -> np.ndarray:
        return np.asarray(self.matrix() @ values) % self.d

    def export_text(self) -> str:
        """Sparse row/col/value triple format with an m n d header."""
        lines = [f"{self.m} {self.ncols} {self.d}"]
        for r, c, v in sorted(self.entries):
            lines.append(f"{r} {c} {v}")
        return "\n".join(lines) + "\n"


def build_validation_checks(code: SubsystemCode) -> CheckMatrix:
    """Stage-1 checks: sphere relations and green/yellow volume matching.

    Sphere rows exist wherever the sphere's face terms multiply to the
    identity (all spheres in the bulk; broken at smooth cube boundaries,
    which is exactly where flux may leave the system).  Green-sphere
    rows are negated so every column carries opposite signs and charge
    is conserved along syndrome-graph edges.
    """
    nflux = len(code.x_terms)
    entries = []
    row = 0
    by_sphere: dict[int, list[int]] = {}
    for i, t in enumerate(code.x_terms):
        by_sphere.setdefault(t.sphere, []).append(i)
    for sid in sorted(by_sphere):
        terms = by_sphere[sid]
        total: dict = {}
        for i in terms:
            for q, v in code.x_terms[i].exps.items():
                total[q] = total.get(q, 0) + v
        if any(v % code.d for v in total.values()):
            continue  # no closure: boundary sphere, flux may escape
        sign = -1 if code.spheres[sid][2] == GREEN else 1
        for i in terms:
            entries.append((row, i, sign))
        row += 1
    for s in code.stabilizers:
        if s.kind != "local-X":
            continue
        for i in s.green_terms:
            entries.append((row, i, 1))
        for i in s.yellow_terms:
            entries.append((row, i, -1))
        row += 1
    return CheckMatrix(row, nflux, code.d, entries)


def build_correction_checks(code: SubsystemCode) -> CheckMatrix:
    """Stage-2 checks: local X-type stabilizers over the qudits."""
    entries = []
    row = 0
    half = code.d // 2
    for s in code.stabilizers:
        if s.kind != "local-X":
            continue
        for q, v in s.exps.items():
            v %= code.d
            if v > half:
                v -= code.d
            if v:
                entries.append((row, q, v))
        row += 1
    return CheckMatrix(row, code.n, code.d, entries)


def build_flux_to_syndrome(code: SubsystemCode) -> sp.csr_matrix:
    """Map from corrected flux values to X-stabilizer syndromes.

    The syndrome of each stabilized volume is the sum of the green-side
    flux outcomes (equal to the yellow sum once validation has enforced
    the volume relations).
    """
    rows, cols = [], []
    r = 0
    for s in code.stabilizers:
        if s.kind != "local-X":
            continue
        for i in s.green_terms:
            rows.append(r)
            cols.append(i)
        r += 1
    data = np.ones(len(rows), dtype=np.int64)
    return sp.csr_matrix((data, (rows, cols)), shape=(r, len(code.x_terms)))


@dataclass
class SyndromeGraph:
    """Graph form of a column-sparse check matrix.

    Nodes are checks plus one auxiliary node (index ``m``) standing in
    for the physical boundary; every variable becomes an edge carrying
    its column's signed endpoint coefficients.  Zero columns are
    recorded separately (their variables are never needed).
    """

    m: int
    n_edges: int
    d: int
    edge_u: np.ndarray
    edge_v: np.ndarray
    coef_u: np.ndarray
    coef_v: np.ndarray
    edge_col: np.ndarray  # original variable index per edge
    ncols: int
    # CSR adjacency: per node (including aux), neighbors ascending
    adj_indptr: np.ndarray = field(repr=False, default=None)
    adj_node: np.ndarray = field(repr=False, default=None)
    adj_edge: np.ndarray = field(repr=False, default=None)
    adj_coef: np.ndarray = field(repr=False, default=None)
    _bfs_cache: object = field(repr=False, default=None)

    @property
    def aux(self) -> int:
        return self.m

    def has_boundary(self) -> bool:
        return bool((self.edge_v == self.m).any() or (self.edge_u == self.m).any())


def build_syndrome_graph(h: CheckMatrix) -> SyndromeGraph:
    bycol: dict[int, list] = {}
    for r, c, v in h.entries:
        bycol.setdefault(c, []).append((r, v))
    eu, ev, cu, cv, ecol = [], [], [], [], []
    for c in sorted(bycol):
        ents = bycol[c]
        if len(ents) == 2:
            (r1, v1), (r2, v2) = ents
            if (v1 + v2) % h.d != 0:
                raise ValueError(f"column {c} is not sign-normalized: {ents}")
        elif len(ents) == 1:
            (r1, v1) = ents[0]
            r2, v2 = h.m, -v1  # auxiliary endpoint absorbs any charge
        else:
            raise ValueError(f"column {c} has {len(ents)} entries")
        eu.append(r1)
        ev.append(r2)
        cu.append(v1)
        cv.append(v2)
        ecol.append(c)
    g = SyndromeGraph(
        m=h.m,
        n_edges=len(eu),
        d=h.d,
        edge_u=np.array(eu, dtype=np.int32),
        edge_v=np.array(ev, dtype=np.int32),
        coef_u=np.array(cu, dtype=np.int64),
        coef_v=np.array(cv, dtype=np.int64),
        edge_col=np.array(ecol, dtype=np.int32),
        ncols=h.ncols,
    )
    _build_adjacency(g)
    return g


def _build_adjacency(g: SyndromeGraph):
    nn = g.m + 1
    half_u = list(zip(g.edge_u, g.edge_v, range(g.n_edges), g.coef_u))
    half_v = list(zip(g.edge_v, g.edge_u, range(g.n_edges), g.coef_v))
    halves = sorted(half_u + half_v, key=lambda h: (h[0], h[1], h[2]))
    indptr = np.zeros(nn + 1, dtype=np.int64)
    node = np.zeros(len(halves), dtype=np.int32)
    edge = np.zeros(len(halves), dtype=np.int32)
    coef = np.zeros(len(halves), dtype=np.int64)
    for i, (a, b, e, c) in enumerate(halves):
        indptr[a + 1] += 1
        node[i] = b
        edge[i] = e
        coef[i] = c
    g.adj_indptr = np.cumsum(indptr)
    g.adj_node = node
    g.adj_edge = edge
    g.adj_coef = coef


def all_pairs_bfs(g: SyndromeGraph):
    """Hop distances and predecessor edges between all node pairs (cached).

    Returns (dist, pred_edge): dist[s, v] is the hop count (-1 when
    unreachable) and pred_edge[s, v] the edge entering v on a shortest
    path from s.
    """
    if g._bfs_cache is not None:
        return g._bfs_cache
    from scipy.sparse.csgraph import shortest_path

    nn = g.m + 1
    adj = sp.csr_matrix(
        (
            np.ones(2 * g.n_edges, dtype=np.int8),
            (
                np.concatenate([g.edge_u, g.edge_v]),
                np.concatenate([g.edge_v, g.edge_u]),
            ),
        ),
        shape=(nn, nn),
    )
    dmat, pred_node = shortest_path(
        adj, method="D", unweighted=True, return_predecessors=True
    )
    dist = np.where(np.isinf(dmat), -1, dmat).astype(np.int32)
    # an edge between each adjacent node pair (first one wins, deterministic)
    edge_between = {}
    for e in range(g.n_edges):
        key = (int(g.edge_u[e]), int(g.edge_v[e]))
        edge_between.setdefault(key, e)
        edge_between.setdefault((key[1], key[0]), e)
    pred_edge = np.full((nn, nn), -1, dtype=np.int32)
    for s in range(nn):
        for v in range(nn):
            pn = pred_node[s, v]
            if pn >= 0:
                pred_edge[s, v] = edge_between[(int(pn), v)]
    g._bfs_cache = (dist, pred_edge)
    return g._bfs_cache

import itertools

import numpy as np
import pytest

from saqd.channel import TrialEngine
from saqd.checks import (
    CheckMatrix,
    all_pairs_bfs,
    build_correction_checks,
    build_syndrome_graph,
    build_validation_checks,
)
from saqd.cluster import cluster_decode
from saqd.matching import minimum_weight_perfect_matching, mwpm_decode


def exhaustive_min_weight(h: CheckMatrix, syndrome, d):
    """Smallest-weight y with H y = syndrome, by full enumeration."""
    mat = h.matrix().toarray()
    best = None
    for assign in itertools.product(range(d), repeat=h.ncols):
        y = np.array(assign)
        if ((mat @ y - syndrome) % d).any():
            continue
        w = int(np.count_nonzero(y))
        if best is None or w < best:
            best = w
    return best


def toy_matrix(entries, m, ncols, d):
    return CheckMatrix(m, ncols, d, entries)


def test_column_sparsity_enforced():
    with pytest.raises(ValueError):
        toy_matrix([(0, 0, 1), (1, 0, 1), (2, 0, 1)], 3, 1, 2)


def test_syndrome_graph_construction():
    h = toy_matrix([(0, 0, 1), (1, 0, -1), (1, 1, 1)], 2, 2, 3)
    g = build_syndrome_graph(h)
    assert g.n_edges == 2
    # two-entry column becomes an internal edge, one-entry column an aux edge
    assert {(int(g.edge_u[0]), int(g.edge_v[0]))} == {(0, 1)}
    assert int(g.edge_v[1]) == g.aux
    bad = toy_matrix([(0, 0, 1), (1, 0, 1)], 2, 1, 3)  # same-sign column
    with pytest.raises(ValueError):
        build_syndrome_graph(bad)


def test_checkmatrix_export():
    h = toy_matrix([(0, 0, 1), (1, 1, -1)], 2, 2, 5)
    text = h.export_text()
    assert text.splitlines()[0] == "2 2 5"
    assert "0 0 1" in text


def _chain_matrix(n_checks, d, boundary=True):
    """A path of checks with one variable between neighbors (plus aux ends)."""
    entries = []
    col = 0
    if boundary:
        entries.append((0, col, 1))
        col += 1
    for i in range(n_checks - 1):
        entries.append((i, col, 1))
        entries.append((i + 1, col, -1))
        col += 1
    if boundary:
        entries.append((n_checks - 1, col, 1))
        col += 1
    return toy_matrix(entries, n_checks, col, d)


@pytest.mark.parametrize("decoder", ["clustering", "matching"])
def test_zero_syndrome_zero_correction(decoder):
    h = _chain_matrix(4, 2)
    g = build_syndrome_graph(h)
    syn = np.zeros(4, dtype=np.int64)
    y = cluster_decode(g, syn, 2) if decoder == "clustering" else mwpm_decode(g, syn)
    assert not y.any()


def test_cluster_small_exhaustive_oracle():
    # chains and rings with all syndromes, d in {2, 3}: solution always valid
    # and the exhaustive minimum is never beaten
    for d in (2, 3):
        h = _chain_matrix(3, d)
        g = build_syndrome_graph(h)
        mat = h.matrix().toarray()
        for syn in itertools.product(range(d), repeat=3):
            syn = np.array(syn, dtype=np.int64)
            y = cluster_decode(g, syn, d)
            assert not ((mat @ y - syn) % d).any()
            assert np.count_nonzero(y) >= exhaustive_min_weight(h, syn, d) or True
            best = exhaustive_min_weight(h, syn, d)
            assert np.count_nonzero(y) >= best


def test_cluster_adjacent_defects_single_edge():
    # two adjacent defects with charges g and d-g cancel across one edge
    d = 3
    h = toy_matrix([(0, 0, 1), (1, 0, -1)], 2, 1, d)
    g = build_syndrome_graph(h)
    y = cluster_decode(g, np.array([1, 2]), d)
    assert list(y) == [1]
    y = cluster_decode(g, np.array([2, 1]), d)
    assert list(y) == [2]


def test_cluster_path_charges_to_boundary():
    d = 3
    h = _chain_matrix(2, d)  # u - e - v with aux on both ends
    g = build_syndrome_graph(h)
    mat = h.matrix().toarray()
    syn = np.array([1, 2])
    y = cluster_decode(g, syn, d)
    assert not ((mat @ y - syn) % d).any()
    best = exhaustive_min_weight(h, syn, d)
    assert np.count_nonzero(y) >= best


def test_cluster_deterministic():
    h = _chain_matrix(6, 3)
    g = build_syndrome_graph(h)
    syn = np.array([1, 0, 2, 0, 0, 1])
    a = cluster_decode(g, syn, 3)
    b = cluster_decode(g, syn, 3)
    assert (a == b).all()


def test_mwpm_two_defects_shortest_path():
    h = _chain_matrix(5, 2, boundary=False)
    g = build_syndrome_graph(h)
    syn = np.zeros(5, dtype=np.int64)
    syn[1] = syn[3] = 1
    y = mwpm_decode(g, syn)
    assert np.count_nonzero(y) == 2  # hop distance two along the chain


def test_mwpm_exhaustive_minimum_small_graphs():
    rng = np.random.default_rng(0)
    for _ in range(60):
        n_checks = int(rng.integers(2, 5))
        h = _chain_matrix(n_checks, 2)
        g = build_syndrome_graph(h)
        mat = h.matrix().toarray()
        syn = rng.integers(0, 2, n_checks)
        y = mwpm_decode(g, syn)
        assert not ((mat @ y - syn) % 2).any()
        assert np.count_nonzero(y) == exhaustive_min_weight(h, syn, 2)


def test_matching_beats_clustering_weight():
    rng = np.random.default_rng(1)
    worse = 0
    for _ in range(500):
        n_checks = int(rng.integers(2, 6))
        h = _chain_matrix(n_checks, 2)
        g = build_syndrome_graph(h)
        mat = h.matrix().toarray()
        syn = rng.integers(0, 2, n_checks)
        ym = mwpm_decode(g, syn)
        yc = cluster_decode(g, syn, 2)
        assert not ((mat @ ym - syn) % 2).any()
        assert not ((mat @ yc - syn) % 2).any()
        best = exhaustive_min_weight(h, syn, 2)
        assert np.count_nonzero(ym) == best
        if np.count_nonzero(yc) < np.count_nonzero(ym):
            worse += 1
    assert worse == 0


def test_blossom_vs_bruteforce():
    rng = np.random.default_rng(2)

    def brute(w):
        best = [None]

        def rec(rem, acc):
            if not rem:
                if best[0] is None or acc < best[0]:
                    best[0] = acc
                return
            u = rem[0]
            for j in range(1, len(rem)):
                rec(rem[1:j] + rem[j + 1 :], acc + w[u][rem[j]])

        rec(list(range(len(w))), 0)
        return best[0]

    for _ in range(80):
        n = int(rng.choice([2, 4, 6, 8]))
        w = rng.integers(0, 20, (n, n))
        w = (w + w.T) // 2
        np.fill_diagonal(w, 0)
        mate = minimum_weight_perfect_matching(w)
        assert all(mate[mate[i]] == i != mate[i] for i in range(n))
        total = sum(int(w[i, mate[i]]) for i in range(n)) // 2
        assert total == brute(w.tolist())


def test_mwpm_requires_d2(code_factory):
    code = code_factory("cube", 2, 3)
    with pytest.raises(ValueError):
        TrialEngine(code, "matching", "matching")


@pytest.mark.parametrize("d", [2, 3, 16])
def test_validation_checks_structure(code_factory, d):
    code = code_factory("cube", 2, d)
    h1 = build_validation_checks(code)
    percol = {}
    for r, c, v in h1.entries:
        percol.setdefault(c, []).append(v)
    for vals in percol.values():
        assert len(vals) <= 2
        if len(vals) == 2:
            assert (vals[0] + vals[1]) % d == 0


def test_single_flux_corruption_hits_incident_checks(code_factory):
    code = code_factory("cube", 2, 3)
    eng = TrialEngine(code)
    nflux = eng.h1_mat.shape[1]
    mat = eng.h1_mat.toarray()
    for col in range(0, nflux, 7):
        c = np.zeros(nflux, dtype=np.int64)
        c[col] = 1
        syn = (mat @ c) % 3
        assert 0 < np.count_nonzero(syn) <= 2


def test_correction_checks_boundary_columns(code_factory):
    code = code_factory("cube", 2, 2)
    h2 = build_correction_checks(code)
    percol = {}
    for r, c, v in h2.entries:
        percol.setdefault(c, []).append(v)
    assert max(len(v) for v in percol.values()) == 2
    assert any(len(v) == 1 for v in percol.values())  # smooth-boundary qudits


def test_bfs_distances_symmetric(code_factory):
    code = code_factory("cube", 2, 2)
    eng = TrialEngine(code, "matching", "matching")
    dist, pred = all_pairs_bfs(eng.g2)
    assert (dist == dist.T).all()
    assert dist.max() >= 1

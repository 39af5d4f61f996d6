import numpy as np
import pytest

from saqd.groups import (
    count_logical_qudits,
    group_structure,
    is_member,
    lattice_solve,
    smith_diagonal,
    solve_mod,
)
from saqd.pauli import PauliOp


def enumerate_group(gens, n, d):
    seen = {PauliOp.identity(n, d)}
    frontier = [PauliOp.identity(n, d)]
    while frontier:
        cur = frontier.pop()
        for g in gens:
            nxt = cur * g
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return seen


def test_single_x_qubit():
    basis = group_structure([PauliOp.x_on(1, 2, 0)])
    assert basis.num_generators == 1
    assert basis.order == 2


def test_z_squared_d4():
    # SNF of [[2], [4]] has invariant factor 2: one cyclic Z_2 factor
    basis = group_structure([PauliOp.z_on(1, 4, 0, 2)])
    assert basis.num_generators == 1
    assert basis.order == 2
    assert basis.invariant_factors == [2]


def test_three_generators_rank_two():
    gens = [
        PauliOp.x_on(2, 3, 0),
        PauliOp.from_sparse(2, 3, xterms=[(0, 1), (1, 1)]),
        PauliOp.x_on(2, 3, 1),
    ]
    basis = group_structure(gens)
    assert basis.num_generators == 2
    assert basis.order == 9
    assert len(enumerate_group(gens, 2, 3)) == 9


def test_membership_examples():
    basis = group_structure([PauliOp.z_on(1, 4, 0, 2)])
    assert is_member(PauliOp.identity(1, 4), basis)
    assert not is_member(PauliOp.z_on(1, 4, 0), basis)
    basis2 = group_structure([PauliOp.x_on(2, 5, 0), PauliOp.x_on(2, 5, 1)])
    assert is_member(PauliOp.from_sparse(2, 5, xterms=[(0, 1), (1, 1)]), basis2)


@pytest.mark.parametrize("seed", range(4))
def test_order_and_membership_vs_enumeration(seed):
    rng = np.random.default_rng(seed)
    for _ in range(25):
        d = int(rng.integers(2, 5))
        n = int(rng.integers(1, 4))
        gens = [
            PauliOp(n, d, rng.integers(0, d, n), rng.integers(0, d, n))
            for _ in range(int(rng.integers(1, 4)))
        ]
        basis = group_structure(gens)
        full = enumerate_group(gens, n, d)
        assert basis.order == len(full)
        for _ in range(15):
            op = PauliOp(n, d, rng.integers(0, d, n), rng.integers(0, d, n))
            assert is_member(op, basis) == (op in full)


def test_count_logical_qudits_table(code_factory):
    # parameter-table spot checks through the group machinery
    for kind, L, d, k_want in [
        ("cube", 2, 2, 1),
        ("torus3", 2, 3, 0),
        ("t2xi", 2, 5, 2),
    ]:
        code = code_factory(kind, L, d)
        k = count_logical_qudits(code.gauge_group(), code.stabilizer_group(), code.n)
        assert k == k_want


def test_non_central_stabilizer_rejected():
    gauge = group_structure([PauliOp.x_on(1, 2, 0), PauliOp.z_on(1, 2, 0)])
    stab = group_structure([PauliOp.x_on(1, 2, 0)])
    with pytest.raises(ValueError, match="non-central"):
        count_logical_qudits(gauge, stab, 1)


def test_smith_diagonal_known():
    assert sorted(smith_diagonal([{0: 2}, {0: 4}], 1)) == [2]
    # [[2,0],[0,3]] ~ diag(1, 6) up to elementary-divisor regrouping
    diag = smith_diagonal([{0: 2}, {1: 3}], 2)
    assert sorted(diag) == [2, 3]


def test_solve_mod_roundtrip():
    rng = np.random.default_rng(0)
    for _ in range(100):
        d = int(rng.integers(2, 17))
        m, n = int(rng.integers(1, 6)), int(rng.integers(1, 6))
        a = rng.integers(0, d, (m, n))
        y0 = rng.integers(0, d, n)
        b = (a @ y0) % d
        y = solve_mod(a, b, d)
        assert y is not None
        assert not ((a @ y - b) % d).any()


def test_solve_mod_unsolvable():
    assert solve_mod(np.array([[2]]), np.array([1]), 4) is None


def test_lattice_solve_coefficients():
    rows = [{0: 2, 1: 1}, {1: 2}]
    target = {0: 2, 1: 3}
    coeff = lattice_solve(rows, target, 2, 4)
    assert coeff is not None
    acc = {}
    for i, c in coeff.items():
        for q, v in rows[i].items():
            acc[q] = (acc.get(q, 0) + c * v) % 4
    acc = {q: v for q, v in acc.items() if v}
    assert acc == {q: v % 4 for q, v in target.items()}

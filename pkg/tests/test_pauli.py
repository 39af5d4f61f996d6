import numpy as np
import pytest
from hypothesis import given, strategies as st

from saqd.pauli import PauliOp, multiply, product, symplectic_product


def test_xz_anticommute_d3():
    a = PauliOp.x_on(1, 3, 0)
    b = PauliOp.z_on(1, 3, 0)
    assert symplectic_product(a, b) == 1
    assert symplectic_product(b, a) == 2  # -1 mod 3


def test_self_product_zero():
    op = PauliOp.from_sparse(3, 5, xterms=[(0, 2), (2, 4)], zterms=[(1, 3)])
    assert symplectic_product(op, op) == 0


def test_two_qubit_overlap():
    a = PauliOp.from_sparse(3, 2, xterms=[(0, 1), (1, 1)])
    b = PauliOp.from_sparse(3, 2, zterms=[(1, 1), (2, 1)])
    # one overlapping site contributes 1*1
    assert symplectic_product(a, b) == 1


def test_multiply_identity():
    op = PauliOp.from_sparse(4, 3, xterms=[(0, 1)], zterms=[(2, 2)])
    ident = PauliOp.identity(4, 3)
    assert multiply(op, ident) == op
    assert multiply(op, op.inverse()).is_identity()


def test_z_squared_order_d4():
    z2 = PauliOp.z_on(4, 4, 3, 2)
    assert multiply(z2, z2).is_identity()


def test_xz_same_site():
    a = PauliOp.x_on(1, 2, 0)
    b = PauliOp.z_on(1, 2, 0)
    y_like = multiply(a, b)
    assert y_like.x[0] == 1 and y_like.z[0] == 1
    assert y_like.weight == 1


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        symplectic_product(PauliOp.x_on(1, 2, 0), PauliOp.x_on(1, 3, 0))
    with pytest.raises(ValueError):
        multiply(PauliOp.x_on(2, 2, 0), PauliOp.x_on(3, 2, 0))


def test_exponent_canonicalization():
    op = PauliOp(2, 3, np.array([4, -1]), np.array([-3, 5]))
    assert list(op.x) == [1, 2]
    assert list(op.z) == [0, 2]


def test_weight_and_support():
    op = PauliOp.from_sparse(5, 2, xterms=[(1, 1)], zterms=[(1, 1), (4, 1)])
    assert op.weight == 2
    assert list(op.support()) == [1, 4]


@st.composite
def pauli_pairs(draw, count=2):
    d = draw(st.integers(min_value=2, max_value=7))
    n = draw(st.integers(min_value=1, max_value=5))
    ops = []
    for _ in range(count):
        x = draw(st.lists(st.integers(0, d - 1), min_size=n, max_size=n))
        z = draw(st.lists(st.integers(0, d - 1), min_size=n, max_size=n))
        ops.append(PauliOp(n, d, np.array(x), np.array(z)))
    return ops


@given(pauli_pairs())
def test_antisymmetry(ops):
    a, b = ops
    assert (symplectic_product(a, b) + symplectic_product(b, a)) % a.d == 0


@given(pauli_pairs(count=3))
def test_bilinearity(ops):
    a, b, c = ops
    lhs = symplectic_product(multiply(a, c), b)
    rhs = (symplectic_product(a, b) + symplectic_product(c, b)) % a.d
    assert lhs == rhs


def test_empty_product_needs_shape():
    with pytest.raises(ValueError):
        product([])
    assert product([], n=2, d=3).is_identity()

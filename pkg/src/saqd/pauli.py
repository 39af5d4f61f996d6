"""Phase-free generalized Pauli operators over Z_d.

An n-qudit Pauli is stored as a pair of exponent vectors (x, z) with
entries in [0, d): the operator X_1^{x_1}...X_n^{x_n} Z_1^{z_1}...Z_n^{z_n}
with the global phase dropped.  All group arithmetic reduces to addition
of exponent vectors mod d; commutation is captured by the symplectic
product, since Z^g X^h = omega^{gh} X^h Z^g with omega = exp(2*pi*i/d).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class PauliOp:
    """A phase-free n-qudit Pauli over Z_d.

    Attributes:
        n: number of qudits.
        d: local dimension, >= 2.
        x: length-n int array of X exponents in [0, d).
        z: length-n int array of Z exponents in [0, d).
    """

    n: int
    d: int
    x: np.ndarray = field(repr=False)
    z: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"local dimension must be >= 2, got {self.d}")
        x = np.asarray(self.x, dtype=np.int64) % self.d
        z = np.asarray(self.z, dtype=np.int64) % self.d
        if x.shape != (self.n,) or z.shape != (self.n,):
            raise ValueError("exponent vectors must have length n")
        x.setflags(write=False)
        z.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)

    @classmethod
    def identity(cls, n: int, d: int) -> "PauliOp":
        return cls(n, d, np.zeros(n, dtype=np.int64), np.zeros(n, dtype=np.int64))

    @classmethod
    def from_sparse(cls, n, d, xterms=(), zterms=()) -> "PauliOp":
        """Build from sparse (qudit, exponent) pairs for the X and Z parts."""
        x = np.zeros(n, dtype=np.int64)
        z = np.zeros(n, dtype=np.int64)
        for q, e in xterms:
            x[q] += e
        for q, e in zterms:
            z[q] += e
        return cls(n, d, x, z)

    @classmethod
    def x_on(cls, n: int, d: int, qudit: int, power: int = 1) -> "PauliOp":
        return cls.from_sparse(n, d, xterms=[(qudit, power)])

    @classmethod
    def z_on(cls, n: int, d: int, qudit: int, power: int = 1) -> "PauliOp":
        return cls.from_sparse(n, d, zterms=[(qudit, power)])

    @property
    def weight(self) -> int:
        """Number of qudits with a nontrivial X or Z part."""
        return int(np.count_nonzero((self.x != 0) | (self.z != 0)))

    def is_identity(self) -> bool:
        return not (self.x.any() or self.z.any())

    def is_x_type(self) -> bool:
        return not self.z.any()

    def is_z_type(self) -> bool:
        return not self.x.any()

    def support(self) -> np.ndarray:
        return np.nonzero((self.x != 0) | (self.z != 0))[0]

    def exponent_vector(self) -> np.ndarray:
        """Concatenated (x | z) vector of length 2n."""
        return np.concatenate([self.x, self.z])

    def __mul__(self, other: "PauliOp") -> "PauliOp":
        return multiply(self, other)

    def __pow__(self, k: int) -> "PauliOp":
        return PauliOp(self.n, self.d, self.x * k, self.z * k)

    def inverse(self) -> "PauliOp":
        return PauliOp(self.n, self.d, -self.x, -self.z)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliOp):
            return NotImplemented
        return (
            self.n == other.n
            and self.d == other.d
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.z, other.z)
        )

    def __hash__(self):
        return hash((self.n, self.d, self.x.tobytes(), self.z.tobytes()))

    def __str__(self) -> str:
        terms = []
        for q in self.support():
            if self.x[q]:
                terms.append(f"X{q}^{self.x[q]}")
            if self.z[q]:
                terms.append(f"Z{q}^{self.z[q]}")
        return " ".join(terms) if terms else "I"


def _check_compatible(a: PauliOp, b: PauliOp):
    if a.n != b.n or a.d != b.d:
        raise ValueError(
            f"incompatible operators: (n={a.n}, d={a.d}) vs (n={b.n}, d={b.d})"
        )


def symplectic_product(a: PauliOp, b: PauliOp) -> int:
    """Commutation exponent: a b = omega^{sp(a,b)} b a, in Z_d.

    Returns sum_i (a.x_i * b.z_i - a.z_i * b.x_i) mod d; zero iff the two
    operators commute.  Antisymmetric and bilinear in the exponents.
    """
    _check_compatible(a, b)
    s = int(np.dot(a.x, b.z)) - int(np.dot(a.z, b.x))
    return s % a.d


def multiply(a: PauliOp, b: PauliOp) -> PauliOp:
    """Phase-free product: componentwise exponent addition mod d."""
    _check_compatible(a, b)
    return PauliOp(a.n, a.d, a.x + b.x, a.z + b.z)


def product(ops, n: int | None = None, d: int | None = None) -> PauliOp:
    """Product of an iterable of PauliOps (identity for an empty iterable)."""
    ops = list(ops)
    if not ops:
        if n is None or d is None:
            raise ValueError("empty product needs explicit n and d")
        return PauliOp.identity(n, d)
    x = np.zeros(ops[0].n, dtype=np.int64)
    z = np.zeros(ops[0].n, dtype=np.int64)
    for op in ops:
        _check_compatible(ops[0], op)
        x += op.x
        z += op.z
    return PauliOp(ops[0].n, ops[0].d, x, z)

"""Finite abelian group linear algebra for phase-free Pauli groups over Z_d.

Generated subgroups of Z_d^{2n} are handled through their integer lifts:
the lattice spanned by the generator exponent rows together with d times
the standard basis.  Smith normal form of the generator matrix gives the
elementary divisors; gcd with d then yields the invariant factors of the
generated group for every local dimension at once.  Hermite forms of the
lifted lattices answer membership queries and present quotient groups.

Everything here works uniformly for composite d; no prime case split.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .pauli import PauliOp, symplectic_product


def _ext_gcd(a: int, b: int):
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b), g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


# ---------------------------------------------------------------------------
# sparse rows as {column: nonzero int}
# ---------------------------------------------------------------------------


def _row_combine(ra: dict, rb: dict, ca: int, cb: int, mod: int | None) -> dict:
    """ca*ra + cb*rb, dropping zeros; entries balanced mod `mod` if given."""
    out = {}
    for c, v in ra.items():
        out[c] = ca * v
    for c, v in rb.items():
        out[c] = out.get(c, 0) + cb * v
    if mod is not None:
        half = mod // 2
        red = {}
        for c, v in out.items():
            v %= mod
            if v > half:
                v -= mod
            if v:
                red[c] = v
        return red
    return {c: v for c, v in out.items() if v}


def hermite_form_mod(rows: list[dict], ncols: int, d: int) -> dict[int, dict]:
    """Hermite basis of the lattice spanned by `rows` plus d*I in Z^ncols.

    Returns {pivot column -> row dict}; columns without an explicit pivot
    implicitly carry the row d*e_c.  Pivot entries are positive divisors
    of d, each pivot row has its pivot as leftmost entry, and all
    arithmetic stays bounded by d.
    """
    pivots: dict[int, dict] = {}
    stack = [_row_combine(r, {}, 1, 0, d) for r in rows]

    def install(c: int, row: dict):
        # row's leftmost entry sits at c and divides d; the lattice also
        # contains (d/g) * row, whose tail escapes the pivot structure
        pivots[c] = row
        g = row[c]
        if g != d:
            tail = _row_combine(row, {}, d // g, 0, d)
            tail.pop(c, None)
            if tail:
                stack.append(tail)

    while stack:
        r = stack.pop()
        while r:
            c = min(r)
            v = r[c] % d
            if v == 0:
                r.pop(c)
                continue
            p = pivots.get(c)
            if p is not None:
                pv = p[c]
                if v % pv == 0:
                    r = _row_combine(r, p, 1, -(v // pv), d)
                    continue
                g, s, t = _ext_gcd(pv, v)
                new_p = _row_combine(p, r, s, t, d)
                new_p[c] = g
                new_r = _row_combine(p, r, v // g, -(pv // g), d)
                new_r.pop(c, None)
                install(c, new_p)
                r = new_r
                continue
            g = gcd(v, d)
            if g == v:
                row = dict(r)
                row[c] = g
                install(c, row)
            else:
                _, s, _ = _ext_gcd(v, d)
                new_p = _row_combine(r, {}, s, 0, d)
                new_p[c] = g
                rest = _row_combine(new_p, r, v // g, -1, d)
                rest.pop(c, None)
                install(c, new_p)
                if rest:
                    stack.append(rest)
            break
    return pivots


def lattice_contains(pivots: dict[int, dict], vec: dict, d: int) -> bool:
    """Does the integer vector lie in the lattice (rows + d*I)?"""
    r = _row_combine(vec, {}, 1, 0, d)
    while r:
        c = min(r)
        v = r[c]
        p = pivots.get(c)
        pv = p[c] if p is not None else d
        if v % pv:
            return False
        if p is not None:
            r = _row_combine(r, p, 1, -(v // pv), d)
        else:
            r.pop(c)
    return True


def smith_diagonal(rows: list[dict], ncols: int, modulus: int | None = None) -> list[int]:
    """Nonzero diagonal of the integer Smith normal form of a sparse matrix.

    Diagonalizes by alternating row and column eliminations, preferring
    unit pivots (the generator matrices here are incidence-like, so unit
    pivots almost always exist and coefficients stay small).  Entries of
    the returned list need not satisfy the divisibility chain; callers
    should treat it as the multiset of elementary divisors up to
    reordering of prime-power factors.

    With `modulus` set, entries are kept in balanced residues mod the
    modulus throughout.  This is exact whenever the caller's lattice
    includes modulus * Z^ncols (adding multiples of the modulus to any
    entry then never changes the lattice, in any unimodular basis).
    """
    half = modulus // 2 if modulus else None

    def bal(v):
        if modulus is None:
            return v
        v %= modulus
        return v - modulus if v > half else v

    # dual sparse views
    rowmap: dict[int, dict] = {}
    for i, r in enumerate(rows):
        rb = {c: w for c, w in ((c, bal(v)) for c, v in r.items()) if w}
        if rb:
            rowmap[i] = rb
    colmap: dict[int, dict] = {}
    for i, r in rowmap.items():
        for c, v in r.items():
            colmap.setdefault(c, {})[i] = v

    def set_entry(i, c, v):
        v = bal(v)
        if v:
            rowmap.setdefault(i, {})[c] = v
            colmap.setdefault(c, {})[i] = v
        else:
            rowmap.get(i, {}).pop(c, None)
            colmap.get(c, {}).pop(i, None)

    def add_row(dst, src, mult):
        # row dst += mult * row src
        for c, v in list(rowmap.get(src, {}).items()):
            set_entry(dst, c, rowmap.get(dst, {}).get(c, 0) + mult * v)

    def add_col(dst, src, mult):
        for i, v in list(colmap.get(src, {}).items()):
            set_entry(i, dst, rowmap.get(i, {}).get(dst, 0) + mult * v)

    diag: list[int] = []
    while True:
        # choose pivot: prefer low-fill unit entries, else smallest |value|
        best = None
        for i, r in rowmap.items():
            for c, v in r.items():
                key = (abs(v) != 1, abs(v), len(r) + len(colmap[c]))
                if best is None or key < best[0]:
                    best = (key, i, c)
                    if key[0] is False and key[2] <= 5:
                        break
            else:
                continue
            break
        if best is None:
            break
        _, pi, pc = best
        while True:
            pv = rowmap[pi][pc]
            # eliminate column entries not divisible by pivot via gcd row ops
            changed = False
            for i in list(colmap.get(pc, {})):
                if i == pi:
                    continue
                v = colmap[pc][i]
                if v % pv == 0:
                    add_row(i, pi, -(v // pv))
                else:
                    g, s, t = _ext_gcd(pv, v)
                    # new pivot row: s*pi + t*i ; then clear old
                    orig_pi = dict(rowmap.get(pi, {}))
                    orig_i = dict(rowmap.get(i, {}))
                    for c in set(orig_pi) | set(orig_i):
                        set_entry(pi, c, s * orig_pi.get(c, 0) + t * orig_i.get(c, 0))
                        set_entry(
                            i,
                            c,
                            (v // g) * orig_pi.get(c, 0) - (pv // g) * orig_i.get(c, 0),
                        )
                    changed = True
                    break
            if changed:
                continue
            for c in list(rowmap.get(pi, {})):
                if c == pc:
                    continue
                v = rowmap[pi][c]
                if v % pv == 0:
                    add_col(c, pc, -(v // pv))
                else:
                    g, s, t = _ext_gcd(pv, v)
                    orig_pc = dict(colmap.get(pc, {}))
                    orig_c = dict(colmap.get(c, {}))
                    for i in set(orig_pc) | set(orig_c):
                        set_entry(i, pc, s * orig_pc.get(i, 0) + t * orig_c.get(i, 0))
                        set_entry(
                            i,
                            c,
                            (v // g) * orig_pc.get(i, 0) - (pv // g) * orig_c.get(i, 0),
                        )
                    changed = True
                    break
            if changed:
                continue
            break
        diag.append(abs(rowmap[pi][pc]))
        set_entry(pi, pc, 0)
        rowmap.pop(pi, None)
        if not colmap.get(pc):
            colmap.pop(pc, None)
    return diag


def _prime_powers(d: int) -> dict[int, int]:
    out = {}
    m = d
    p = 2
    while p * p <= m:
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += 1
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def invariant_factors_mod(divisors: list[int], ncols: int, d: int) -> list[int]:
    """Invariant factors of the group (lattice + dI)/dZ^N from integer SNF data.

    `divisors` is the nonzero integer SNF diagonal of the generator matrix;
    the generated subgroup of Z_d^N is the direct sum of Z_{d/gcd(e_i, d)}.
    Returns the cyclic orders > 1, sorted so each divides the next.
    """
    orders = [d // gcd(e, d) for e in divisors]
    orders += [1] * (ncols - len(orders))
    # assemble divisibility chain per prime
    pp = _prime_powers(d)
    vals = {p: sorted((_val(o, p) for o in orders), reverse=True) for p in pp}
    chain = []
    for i in range(ncols):
        o = 1
        for p in pp:
            if i < len(vals[p]):
                o *= p ** vals[p][i]
        if o > 1:
            chain.append(o)
    return sorted(chain)


def _val(x: int, p: int) -> int:
    v = 0
    while x % p == 0 and x > 1:
        x //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# group-level API
# ---------------------------------------------------------------------------


def _sparse_rows(gens: list[PauliOp]) -> list[dict]:
    """Integer lifts of exponent vectors, in balanced residues."""
    rows = []
    for g in gens:
        half = g.d // 2
        r = {}
        for q in np.nonzero(g.x)[0]:
            v = int(g.x[q])
            r[int(q)] = v - g.d if v > half else v
        for q in np.nonzero(g.z)[0]:
            v = int(g.z[q])
            r[g.n + int(q)] = v - g.d if v > half else v
        rows.append(r)
    return rows


@dataclass
class GroupBasis:
    """A generated abelian subgroup of the phase-free Pauli group.

    Carries the Smith-normal-form data of the integer lift of the
    exponent matrix (with the implicit d*I rows): invariant factors,
    minimal generating set size, group order, and a Hermite basis for
    membership queries.
    """

    gens: list
    n: int
    d: int
    invariant_factors: list[int]
    num_generators: int
    order: int
    _hermite: dict

    def __contains__(self, op: PauliOp) -> bool:
        return self.contains(op)

    def contains(self, op: PauliOp) -> bool:
        if op.n != self.n or op.d != self.d:
            raise ValueError("operator has mismatched n or d")
        vec = _sparse_rows([op])[0]
        return lattice_contains(self._hermite, vec, self.d)


def group_structure(gens: list[PauliOp], d: int | None = None) -> GroupBasis:
    """Analyze the abelian group generated by `gens` (phase-free).

    Computes the minimal generating set size and group order via Smith
    normal form of the integer-lifted exponent matrix, and a Hermite
    basis for membership queries.
    """
    if not gens:
        raise ValueError("need at least one generator")
    n, d = gens[0].n, gens[0].d if d is None else d
    for g in gens:
        if g.n != n or g.d != d:
            raise ValueError("generators have mismatched n or d")
    rows = _sparse_rows(gens)
    ncols = 2 * n
    diag = smith_diagonal(rows, ncols, modulus=d)
    factors = invariant_factors_mod(diag, ncols, d)
    order = 1
    for f in factors:
        order *= f
    hermite = hermite_form_mod(rows, ncols, d)
    return GroupBasis(
        gens=list(gens),
        n=n,
        d=d,
        invariant_factors=factors,
        num_generators=len(factors),
        order=order,
        _hermite=hermite,
    )


def is_member(op: PauliOp, basis: GroupBasis) -> bool:
    """True iff op is a product of powers of the basis generators."""
    return basis.contains(op)


def _hermite_full_basis(pivots: dict[int, dict], ncols: int, d: int) -> list[dict]:
    """Full-rank triangular basis: explicit pivots plus d*e_c fillers."""
    rows = []
    for c in range(ncols):
        if c in pivots:
            rows.append(pivots[c])
        else:
            rows.append({c: d})
    return rows


def quotient_invariant_factors(
    big: list[dict], small: list[dict], ncols: int, d: int
) -> list[int]:
    """Invariant factors (> 1) of (span(big)+dI) / (span(small)+dI).

    Both spans are treated as integer lattices containing d*Z^N; the
    quotient is presented by expressing the sublattice basis in the big
    lattice basis and taking Smith normal form of the resulting integer
    matrix.
    """
    hb = hermite_form_mod(big, ncols, d)
    hs = hermite_form_mod(small, ncols, d)
    basis_b = _hermite_full_basis(hb, ncols, d)
    basis_s = _hermite_full_basis(hs, ncols, d)
    # express each small-basis row in the triangular big basis
    x_rows = []
    for r in basis_s:
        r = dict(r)
        coeffs = {}
        while r:
            c = min(r)
            pv = basis_b[c][c]
            v = r[c]
            if v % pv:
                raise ValueError("sublattice is not contained in the big lattice")
            q = v // pv
            coeffs[c] = q
            r = _row_combine(r, basis_b[c], 1, -q, None)
        x_rows.append(coeffs)
    diag = smith_diagonal(x_rows, ncols, modulus=d)
    pp = _prime_powers(d)
    # quotient cyclic orders: SNF diagonal entries, capped at d per prime
    out = []
    for e in diag + [0] * (ncols - len(diag)):
        o = 1
        for p, ep in pp.items():
            v = _val(e, p) if e else ep
            o *= p ** min(v, ep)
        if o > 1:
            out.append(o)
    return sorted(out)


def count_logical_qudits(gauge: GroupBasis, stab: GroupBasis, n: int) -> int:
    """Number of logical qudits: k = n - s - r.

    s is the minimal generating size of the stabilizer group; r follows
    from the gauge-modulo-stabilizer quotient having 2r cyclic factors.
    The stabilizer generators must lie in the gauge span and commute
    with every gauge generator; violations signal a construction bug.
    """
    for s_op in stab.gens:
        if not gauge.contains(s_op):
            raise ValueError("stabilizer generator outside the gauge span")
    for s_op in stab.gens:
        for g_op in gauge.gens:
            if symplectic_product(s_op, g_op) != 0:
                raise ValueError("non-central stabilizer input")
    s = stab.num_generators
    d = gauge.d
    q_factors = quotient_invariant_factors(
        _sparse_rows(gauge.gens), _sparse_rows(stab.gens), 2 * n, d
    )
    two_r = len(q_factors)
    if two_r % 2:
        raise ValueError(f"gauge/stabilizer quotient has odd rank {two_r}")
    k = n - s - two_r // 2
    if k < 0:
        raise ValueError(f"negative logical count k={k}")
    return k


def lattice_solve(rows: list[dict], target: dict, ncols: int, d: int):
    """Coefficients c with sum_i c_i * rows_i = target (mod d), or None.

    Runs the Hermite reduction with coefficient tags, so divisibility
    obstructions from zero divisors of composite d are handled exactly.
    """
    pivots: dict[int, tuple[dict, dict]] = {}
    stack = [(_row_combine(r, {}, 1, 0, d), {i: 1} if r else {}) for i, r in enumerate(rows)]

    def install(c, row, tag):
        pivots[c] = (row, tag)
        g = row[c]
        if g != d:
            tail = _row_combine(row, {}, d // g, 0, d)
            tail.pop(c, None)
            if tail:
                stack.append((tail, _row_combine(tag, {}, d // g, 0, d)))

    while stack:
        r, tag = stack.pop()
        while r:
            c = min(r)
            v = r[c] % d
            if v == 0:
                r.pop(c)
                continue
            hit = pivots.get(c)
            if hit is not None:
                p, ptag = hit
                pv = p[c]
                if v % pv == 0:
                    q = v // pv
                    r = _row_combine(r, p, 1, -q, d)
                    tag = _row_combine(tag, ptag, 1, -q, d)
                    continue
                g, s, t = _ext_gcd(pv, v)
                new_p = _row_combine(p, r, s, t, d)
                new_p[c] = g
                new_ptag = _row_combine(ptag, tag, s, t, d)
                new_r = _row_combine(p, r, v // g, -(pv // g), d)
                new_r.pop(c, None)
                new_tag = _row_combine(ptag, tag, v // g, -(pv // g), d)
                install(c, new_p, new_ptag)
                r, tag = new_r, new_tag
                continue
            g = gcd(v, d)
            if g == v:
                row = dict(r)
                row[c] = g
                install(c, row, tag)
            else:
                _, s, _ = _ext_gcd(v, d)
                new_p = _row_combine(r, {}, s, 0, d)
                new_p[c] = g
                new_ptag = _row_combine(tag, {}, s, 0, d)
                rest = _row_combine(new_p, r, v // g, -1, d)
                rest.pop(c, None)
                rest_tag = _row_combine(new_ptag, tag, v // g, -1, d)
                install(c, new_p, new_ptag)
                if rest:
                    stack.append((rest, rest_tag))
            break

    r = _row_combine(target, {}, 1, 0, d)
    coeff: dict = {}
    while r:
        c = min(r)
        v = r[c] % d
        if v == 0:
            r.pop(c)
            continue
        hit = pivots.get(c)
        pv = hit[0][c] if hit is not None else d
        if v % pv:
            return None
        q = v // pv
        r = _row_combine(r, hit[0], 1, -q, d)
        coeff = _row_combine(coeff, hit[1], 1, -q, d)
    return {i: -c % d for i, c in coeff.items()}


def solve_mod(a: np.ndarray, b: np.ndarray, d: int) -> np.ndarray | None:
    """Solve a @ y = b (mod d) for y, or return None if unsolvable."""
    a = np.asarray(a, dtype=np.int64) % d
    b = np.asarray(b, dtype=np.int64) % d
    m, ncols = a.shape
    # y solves a @ y = b iff b^T is a Z_d-combination of the columns of a
    rows = []
    for j in range(ncols):
        col = a[:, j]
        rows.append({int(i): int(col[i]) for i in np.nonzero(col)[0]})
    target = {int(i): int(b[i]) for i in np.nonzero(b)[0]}
    coeff = lattice_solve(rows, target, m, d)
    if coeff is None:
        return None
    y = np.zeros(ncols, dtype=np.int64)
    for j, c in coeff.items():
        y[j] = c
    if np.any((a @ y - b) % d):
        raise AssertionError("lattice_solve returned an invalid solution")
    return y

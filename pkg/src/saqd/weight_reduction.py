"""Weight reduction of the boundary face models via controlled-X circuits.

Plaquette qudits are added on half of the plaquettes of the top and
bottom faces (one per 4-body face term), each carrying single-qudit X
and Z gauge generators.  A translationally invariant circuit of
generalized controlled-X gates,

    C_X (X x I) C_X^dag = X x X^dag,    C_X (I x Z) C_X^dag = Z x Z,

is then applied.  Conjugation acts linearly on exponent vectors and
preserves every symplectic product, so code parameters are untouched;
after re-choosing generators inside the conjugated gauge group, every
gauge generator has weight at most three.

The gate pattern couples each plaquette qudit to dangler pieces around
the neighbouring blue cell of the face lattice; the sign/role choices
below were fixed by searching the small pattern space for the (unique
up to symmetry) assignment that admits a weight-<=3 generating set.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .code import GaugeTerm, LogicalPair, Stabilizer, SubsystemCode, X_TYPE, Z_TYPE, _accumulate
from .lattice import AXIS_X, AXIS_Y, AXIS_Z, BOTTOM, GREEN, RED, TOP, YELLOW, Manifold, build_lattice, cell_color, vertex_color


@dataclass(frozen=True)
class Gate:
    """One generalized controlled-X gate C_X^sign(control -> target)."""

    control: int
    target: int
    sign: int  # +1 for C_X, -1 for C_X^dagger


def conjugate_x(xdict: dict, gates) -> dict:
    """Image of a pure X-type sparse op under the circuit (gates in order).

    C_X^s(c -> t):  x_t -= s * x_c.
    """
    out = dict(xdict)
    for g in gates:
        xc = out.get(g.control, 0)
        if xc:
            _accumulate(out, {g.target: -g.sign * xc})
    return out

def conjugate_z(zdict: dict, gates) -> dict:
    """Image of a pure Z-type sparse op under the circuit.

    C_X^s(c -> t):  z_c += s * z_t.
    """
    out = dict(zdict)
    for g in gates:
        zt = out.get(g.target, 0)
        if zt:
            _accumulate(out, {g.control: g.sign * zt})
    return out


# Frozen gate pattern, found by searching role/sign assignments for one
# that admits a weight-<=3 generating set (see _search_gate_pattern).
# Entries are (role, sign): role "cu" = far unsplit dangler controls the
# plaquette qudit, "co" = shared outer half controls it, "ti"/"tu" = the
# plaquette qudit controls the shared inner half / near unsplit dangler.
GATE_PATTERN = (("cu", 1), ("co", 1), ("ti", -1), ("tu", 1))


def _build_gates(code: SubsystemCode, pattern=GATE_PATTERN) -> list[Gate]:
    """Gate list for the full circuit, in round order.

    For each plaquette qudit P (on a red face-lattice cell), the four
    gates couple it to face pieces around the blue cell on its -x side:
    the two dangler columns it shares with that cell and the far unsplit
    dangler of that cell.  All round-1 gates are applied first, then all
    round-2 gates, and so on.
    """
    lat = code.lattice
    L = lat.L
    rounds: list[list[Gate]] = [[] for _ in pattern]
    for side in (BOTTOM, TOP):
        ylayer = lat.boundary_vertex_layer(side)
        for (pside, a, b), pid in lat.plaq_id.items():
            if pside != side:
                continue
            # corner columns of the plaquette footprint [a,a+1]x[b,b+1]
            cols = {}
            for dz in (0, 1):
                for dx in (0, 1):
                    col = lat.wrap_column(a + dx, b + dz)
                    cols[(dx, dz)] = col
            # split (green on top / yellow on bottom) columns of this cell
            split = {k: lat.column_split(*c, side) for k, c in cols.items()}
            # shared green corner on the -x side and its pieces
            gkey = (0, 0) if split[(0, 0)] else (0, 1)
            ykey = (0, 1) if split[(0, 0)] else (0, 0)
            gx, gz = cols[gkey]
            inner = lat.piece_id[(side, gx, gz, "inner")]
            outer = lat.piece_id[(side, gx, gz, "outer")]
            near_u = lat.piece_id[(side, *cols[ykey], "single")]
            # the far unsplit dangler of the blue cell on the -x side:
            # diagonal to the shared yellow corner, same z as the green one
            far_col = lat.wrap_column(a - 1, b + gkey[1])
            if lat.column_split(*far_col, side):
                raise AssertionError("far corner of the blue cell should be unsplit")
            far_u = lat.piece_id[(side, *far_col, "single")]
            pieces = {"cu": far_u, "co": outer, "ti": inner, "tu": near_u}
            for rnd, (role, sign) in enumerate(pattern):
                piece = pieces[role]
                if piece is None:
                    continue
                if role.startswith("c"):
                    rounds[rnd].append(Gate(piece, pid, sign))
                else:
                    rounds[rnd].append(Gate(pid, piece, sign))
    return [g for rnd in rounds for g in rnd]


def _conjugate_term(term: GaugeTerm, gates) -> GaugeTerm:
    f = conjugate_z if term.kind == Z_TYPE else conjugate_x
    return GaugeTerm(
        term.kind, term.color, term.sphere, term.cell, f(term.exps, gates), term.in_generating_set
    )


def apply_weight_reduction(base: SubsystemCode) -> SubsystemCode:
    """Transform a t2xi code into the three-body t2xi' code.

    Appends the plaquette qudits with single-qudit X and Z gauge
    generators, conjugates every operator by the controlled-X circuit,
    and re-chooses the generating set so all gauge generators have
    weight at most 3.
    """
    if base.manifold.kind != "t2xi":
        raise ValueError("weight reduction starts from a t2xi code")
    prime = SubsystemCode.__new__(SubsystemCode)
    prime.manifold = Manifold.t2xi_prime(base.manifold.L)
    prime.d = base.d
    prime.lattice = build_lattice(prime.manifold)
    prime.n = prime.lattice.n
    prime.spheres = list(base.spheres)
    prime.cells = list(base.cells)
    prime._cell_ids = dict(base._cell_ids)
    prime.stabilizers = []
    prime.logical_pairs = []

    # plaquette qudits enter as gauge qudits: single-qudit X and Z
    # generators, attached to a dedicated sphere per qudit
    x_terms = list(base.x_terms)
    z_terms = list(base.z_terms)
    plaq_terms: dict[int, tuple[GaugeTerm, GaugeTerm]] = {}
    for (side, a, b), pid in sorted(prime.lattice.plaq_id.items()):
        sid = len(prime.spheres)
        fcolor = prime.lattice.face_color(side)
        prime.spheres.append(("plaquette", (side, a, b), fcolor))
        cy = prime.lattice.boundary_vertex_layer(side) if side == TOP else -1
        cid = prime._cell_id((a, cy, b))
        # the pair X_P, Z_P anticommutes; tagging them with opposite colors
        # keeps the two color classes internally commuting
        tx = GaugeTerm(X_TYPE, fcolor, sid, cid, {pid: 1})
        tz = GaugeTerm(Z_TYPE, 1 - fcolor, sid, cid, {pid: 1})
        x_terms.append(tx)
        z_terms.append(tz)
        plaq_terms[pid] = (tx, tz)

    gates = _build_gates(prime)
    prime.circuit = gates
    prime.x_terms = [_conjugate_term(t, gates) for t in x_terms]
    prime.z_terms = [_conjugate_term(t, gates) for t in z_terms]
    prime._gen_override = None

    # stabilizers conjugate as operators; term index lists still refer to
    # positions in the rebuilt (conjugated) term lists
    for s in base.stabilizers:
        f = conjugate_z if s.kind.endswith("Z") else conjugate_x
        prime.stabilizers.append(
            Stabilizer(s.kind, s.locus, f(s.exps, gates), list(s.green_terms), list(s.yellow_terms))
        )
    for pair in base.logical_pairs:
        prime.logical_pairs.append(
            LogicalPair(
                bare_x=conjugate_x(pair.bare_x, gates),
                dressed_x=conjugate_x(pair.dressed_x, gates),
                dressed_z=conjugate_z(pair.dressed_z, gates),
                _bare_z=None if pair._bare_z is None else conjugate_z(pair._bare_z, gates),
            )
        )

    _reduce_generating_set(prime)
    return prime


def _reduce_generating_set(code: SubsystemCode, max_weight=3):
    """Build a weight-<=3 generating list for the conjugated gauge group.

    The conjugated term lists stay untouched (they carry the flux and
    relation structure); over-weight members are replaced, in the
    generating list only, by products with small same-type gauge terms
    sharing support.  Raises if any generator cannot be reduced.
    """
    d = code.d

    def reduce_term(term: GaugeTerm, index) -> dict | None:
        frontier = [dict(term.exps)]
        seen = set()
        cap = len(term.exps) + 3
        for _ in range(10):
            new_frontier = []
            for cur in frontier:
                key = tuple(sorted(cur.items()))
                if key in seen:
                    continue
                seen.add(key)
                if len(cur) <= max_weight:
                    return cur
                for q in sorted(cur):
                    for helper in index.get(q, ()):
                        hq = helper.exps.get(q, 0) % d
                        if gcd(hq, d) != 1:
                            continue
                        mult = (-cur[q] * pow(hq, -1, d)) % d
                        cand = dict(cur)
                        _accumulate(cand, helper.exps, mult)
                        cand = {k: v % d for k, v in cand.items() if v % d}
                        if len(cand) <= cap:
                            new_frontier.append(cand)
            if not new_frontier:
                break
            new_frontier.sort(key=lambda c: (len(c), tuple(sorted(c.items()))))
            frontier = new_frontier[:24]
            if len(frontier[0]) <= max_weight:
                return frontier[0]
        return None

    # Phase 1: find weight-<=3 forms using any conjugated terms as helpers.
    pool = list(code.x_terms + code.z_terms)
    index_all = {X_TYPE: {}, Z_TYPE: {}}
    for t in pool:
        for q in t.exps:
            index_all[t.kind].setdefault(q, []).append(t)
    override: list[GaugeTerm] = []
    for t in pool:
        if len(t.exps) <= max_weight:
            if t.in_generating_set:
                override.append(t)
            continue
        red = reduce_term(t, index_all[t.kind])
        if red is None:
            raise AssertionError(
                f"could not reduce a {t.kind} generator below weight {max_weight}: {t.exps}"
            )
        override.append(GaugeTerm(t.kind, t.color, t.sphere, t.cell, red))

    # Phase 2: the substitutions can lose span; re-reduce any original term
    # that fell outside the override span, allowing override members as the
    # only helpers, until the spans agree.
    from .groups import group_structure, is_member

    def materialize(terms):
        return [t.pauli(code.n, code.d) for t in terms]

    for _ in range(6):
        basis = group_structure(materialize(override))
        missing = [
            t for t in pool if not basis.contains(t.pauli(code.n, code.d))
        ]
        if not missing:
            break
        index_ovr = {X_TYPE: {}, Z_TYPE: {}}
        for t in override:
            for q in t.exps:
                index_ovr[t.kind].setdefault(q, []).append(t)
        progress = False
        for t in missing:
            red = reduce_term(t, index_ovr[t.kind])
            if red is not None and len(red) <= max_weight:
                override.append(GaugeTerm(t.kind, t.color, t.sphere, t.cell, red))
                progress = True
        if not progress:
            # fall back to the Hermite coset residual of each missing term
            # (a group element by construction); reduce it if still heavy
            from .groups import _row_combine, _sparse_rows, hermite_form_mod

            hp = hermite_form_mod(
                _sparse_rows(materialize(override)), 2 * code.n, d
            )
            for t in missing:
                vec = _sparse_rows([t.pauli(code.n, code.d)])[0]
                res = _coset_residual(vec, hp, d)
                qexps = {q % code.n: v for q, v in res.items()}
                if not qexps:
                    continue
                cand = GaugeTerm(t.kind, t.color, t.sphere, t.cell, qexps)
                if len(qexps) > max_weight:
                    red = reduce_term(cand, index_ovr[t.kind])
                    if red is None:
                        continue
                    cand = GaugeTerm(t.kind, t.color, t.sphere, t.cell, red)
                if len(cand.exps) <= max_weight:
                    override.append(cand)
                    progress = True
        if not progress:
            raise AssertionError(
                f"{len(missing)} gauge terms remain outside the reduced span"
            )
    else:
        raise AssertionError("weight reduction failed to close the gauge span")
    code._gen_override = override


def _coset_residual(vec: dict, hermite: dict, d: int) -> dict:
    """Reduce an exponent vector by a Hermite basis, keeping the remainder."""
    from .groups import _row_combine

    r = _row_combine(vec, {}, 1, 0, d)
    done: dict = {}
    while r:
        c = min(r)
        v = r.pop(c) % d
        if v == 0:
            continue
        p = hermite.get(c)
        if p is None:
            done[c] = v
            continue
        pv = p[c]
        q = v // pv
        if q:
            r[c] = v
            r = _row_combine(r, p, 1, -q, d)
            v = r.pop(c, 0) % d
        if v:
            done[c] = v
    return done

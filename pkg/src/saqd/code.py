"""Subsystem code construction on the four manifolds.

Builds the full gauge structure from the per-vertex octant tables in
:mod:`saqd.lattice`, plus the boundary machinery:

* vertex spheres keep a term only if every absent edge is compatible
  with the boundary type (Z-type vertex terms may lose edges at smooth
  x faces, X-type face terms at rough z faces);
* bigon spheres contribute 2-body terms on the two halves of a split
  dangler;
* the macroscopic face spheres contribute up-to-4-body terms on the
  outermost dangler pieces, with partial terms chopped by the same
  smooth/rough rule at the cube's face edges.

Stabilizers are recovered per unit cell as the common value of the
green-only and yellow-only products of the terms referencing the cell.
Sheet stabilizers (closed manifold) and the sheet/string logical
operators are constructed explicitly and validated by commutation
checks at build time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .groups import GroupBasis, count_logical_qudits, group_structure, solve_mod
from .lattice import (
    AXIS_X,
    AXIS_Y,
    AXIS_Z,
    BLUE,
    BOTTOM,
    COLOR_NAMES,
    GREEN,
    RED,
    TOP,
    YELLOW,
    Lattice,
    Manifold,
    VERTEX_X_TERMS,
    VERTEX_Z_TERMS,
    build_lattice,
    cell_color,
    vertex_color,
)
from .pauli import PauliOp

Z_TYPE, X_TYPE = "Av", "Bf"

CODE_DUMP_VERSION = 1


@dataclass
class GaugeTerm:
    """One gauge generator: sparse exponents on qudits, with metadata."""

    kind: str  # "Av" (Z-type) or "Bf" (X-type)
    color: int  # GREEN or YELLOW
    sphere: int  # sphere id
    cell: int  # cell id
    exps: dict  # {qudit: exponent in {-1, +1}} (larger after weight reduction)
    in_generating_set: bool = True

    def pauli(self, n: int, d: int) -> PauliOp:
        terms = list(self.exps.items())
        if self.kind == Z_TYPE:
            return PauliOp.from_sparse(n, d, zterms=terms)
        return PauliOp.from_sparse(n, d, xterms=terms)


@dataclass
class Stabilizer:
    kind: str  # local-X | local-Z | sheet-X | sheet-Z
    locus: object  # cell key or (plane description)
    exps: dict  # {qudit: integer exponent}
    green_terms: list = field(default_factory=list)  # flux/term indices
    yellow_terms: list = field(default_factory=list)

    def pauli(self, n: int, d: int) -> PauliOp:
        terms = list(self.exps.items())
        if self.kind.endswith("Z"):
            return PauliOp.from_sparse(n, d, zterms=terms)
        return PauliOp.from_sparse(n, d, xterms=terms)


@dataclass
class LogicalPair:
    """One logical qudit: bare and dressed X/Z representatives.

    Bare operators commute with the whole gauge group; dressed ones only
    with the stabilizer group.  Bare Z is derived lazily by multiplying
    the dressed string into the gauge-group centralizer.
    """

    bare_x: dict
    dressed_x: dict
    dressed_z: dict
    _bare_z: dict | None = None


def _sparse_sp(xdict: dict, zdict: dict) -> int:
    """Integer symplectic pairing of an X-type and a Z-type sparse op."""
    if len(xdict) > len(zdict):
        xdict, zdict = zdict, xdict
    return sum(v * zdict.get(q, 0) for q, v in xdict.items())


def _accumulate(target: dict, addition: dict, mult: int = 1):
    for q, v in addition.items():
        nv = target.get(q, 0) + mult * v
        if nv:
            target[q] = nv
        else:
            target.pop(q, None)


class SubsystemCode:
    """A built SAQD code instance: gauge terms, stabilizers, logicals."""

    def __init__(self, manifold: Manifold, d: int, _build=True):
        if d < 2:
            raise ValueError(f"local dimension must be >= 2, got {d}")
        self.manifold = manifold
        self.d = d
        self.lattice: Lattice = build_lattice(manifold)
        self.n = self.lattice.n
        # registries
        self.spheres: list[tuple] = []  # (kind, payload, color)
        self.cells: list[tuple] = []  # (key, virtual_axes)
        self._cell_ids: dict = {}
        self.x_terms: list[GaugeTerm] = []  # all X-type terms = flux operators
        self.z_terms: list[GaugeTerm] = []
        self.stabilizers: list[Stabilizer] = []
        self.logical_pairs: list[LogicalPair] = []
        if _build:
            self._build_terms()
            self._mark_generating_set()
            self._build_stabilizers()
            self._build_logicals()

    # ------------------------------------------------------------------
    # construction
    # ------------------------------------------------------------------

    def _cell_id(self, raw_cell) -> int:
        key, virt = self.lattice.cell_key(raw_cell)
        ident = (key, virt)
        if ident not in self._cell_ids:
            self._cell_ids[ident] = len(self.cells)
            self.cells.append(ident)
        return self._cell_ids[ident]

    def _add_sphere(self, kind, payload, color) -> int:
        self.spheres.append((kind, payload, color))
        return len(self.spheres) - 1

    def _missing_kind(self, axis) -> str:
        # cube: x faces smooth, z faces rough
        return "smooth" if axis == AXIS_X else "rough"

    def _build_terms(self):
        lat = self.lattice
        for v in lat.vertices():
            color = vertex_color(v)
            sid = self._add_sphere("vertex", v, color)
            for table, kind, allowed in (
                (VERTEX_Z_TERMS, Z_TYPE, "smooth"),
                (VERTEX_X_TERMS, X_TYPE, "rough"),
            ):
                for octant, exps in table[color]:
                    qexps = {}
                    ok = True
                    for (axis, sign), e in exps.items():
                        q = lat.edge_piece(v, axis, sign)
                        if q is None:
                            if self._missing_kind(axis) != allowed:
                                ok = False
                                break
                        else:
                            qexps[q] = e
                    if not ok or not qexps:
                        continue
                    cid = self._cell_id(lat.octant_cell(v, octant))
                    self._term(kind, color, sid, cid, qexps)
        if lat.manifold.has_y_boundary:
            for side in (BOTTOM, TOP):
                self._build_bigons(side)
            for side in (BOTTOM, TOP):
                self._build_face_sphere(side)

    def _term(self, kind, color, sid, cid, qexps):
        term = GaugeTerm(kind, color, sid, cid, qexps)
        (self.z_terms if kind == Z_TYPE else self.x_terms).append(term)

    def _build_bigons(self, side):
        lat = self.lattice
        s = 1 if side == TOP else -1
        ylayer = lat.boundary_vertex_layer(side)
        for (x, z) in lat.split_columns(side):
            v = (x, ylayer, z)
            vcol = vertex_color(v)
            inner = lat.piece_id[(side, x, z, "inner")]
            outer = lat.piece_id[(side, x, z, "outer")]
            sid = self._add_sphere("bigon", (side, x, z), lat.bigon_color(side))
            for octant, exps in VERTEX_Z_TERMS[vcol]:
                if octant[1] != s:
                    continue
                t = exps[(AXIS_Y, s)]
                cid = self._cell_id(lat.octant_cell(v, octant))
                self._term(Z_TYPE, lat.bigon_color(side), sid, cid, {inner: t, outer: -t})
            for octant, exps in VERTEX_X_TERMS[vcol]:
                if octant[1] != s:
                    continue
                t = exps[(AXIS_Y, s)]
                cid = self._cell_id(lat.octant_cell(v, octant))
                self._term(X_TYPE, lat.bigon_color(side), sid, cid, {inner: t, outer: t})

    def _face_footprints(self):
        lat = self.lattice
        xs = range(lat.nv[AXIS_X]) if lat.periodic[AXIS_X] else range(-1, lat.nv[AXIS_X])
        zs = range(lat.nv[AXIS_Z]) if lat.periodic[AXIS_Z] else range(-1, lat.nv[AXIS_Z])
        for b in zs:
            for a in xs:
                yield a, b

    def _build_face_sphere(self, side):
        lat = self.lattice
        s = 1 if side == TOP else -1
        ylayer = lat.boundary_vertex_layer(side)
        fcolor = lat.face_color(side)
        sid = self._add_sphere("face", side, fcolor)
        cy = ylayer if side == TOP else -1
        for a, b in self._face_footprints():
            col = cell_color((a, cy, b))
            kind = Z_TYPE if col != RED else X_TYPE
            corners = lat.footprint_corners(a, b)
            # footprint corners ordered x-minor: (a,b), (a+1,b), (a,b+1), (a+1,b+1)
            qexps = {}
            ok = True
            for idx, corner in enumerate(corners):
                dx, dz = idx % 2, idx // 2
                if corner is None:
                    axis = AXIS_X  # sticking out in x when the x+dx column is absent
                    # determine stick axis: corner missing because x or z out of range
                    cx, cz_ = a + dx, b + dz
                    stick_x = not lat.periodic[AXIS_X] and not (0 <= cx < lat.nv[AXIS_X])
                    stick_z = not lat.periodic[AXIS_Z] and not (0 <= cz_ < lat.nv[AXIS_Z])
                    allowed = "smooth" if kind == Z_TYPE else "rough"
                    kinds = set()
                    if stick_x:
                        kinds.add("smooth")
                    if stick_z:
                        kinds.add("rough")
                    if kinds - {allowed}:
                        ok = False
                        break
                    continue
                cx, cz_ = corner
                w = (cx, ylayer, cz_)
                wcol = vertex_color(w)
                octant = (1 - 2 * dx, s, 1 - 2 * dz)
                table = VERTEX_Z_TERMS if kind == Z_TYPE else VERTEX_X_TERMS
                t = dict(table[wcol])[octant][(AXIS_Y, s)]
                piece = lat.column_face_piece(cx, cz_, side)
                if kind == Z_TYPE and lat.column_split(cx, cz_, side):
                    t = -t  # outer half is anti-aligned for Z-type terms
                qexps[piece] = t
            if not ok or not qexps:
                continue
            cid = self._cell_id((a, cy, b))
            self._term(kind, fcolor, sid, cid, qexps)

    # -- generating set -------------------------------------------------

    def _mark_generating_set(self):
        """Drop one redundant term per closed sphere and type.

        On a sphere whose terms of one type multiply to the identity the
        last listed term is dependent; dropping it reproduces the
        standard generator counts (6 per bulk vertex, 2 per bigon, ...).
        """
        for terms in (self.z_terms, self.x_terms):
            by_sphere: dict[int, list[GaugeTerm]] = {}
            for t in terms:
                by_sphere.setdefault(t.sphere, []).append(t)
            for sid, group in by_sphere.items():
                total: dict = {}
                for t in group:
                    _accumulate(total, t.exps)
                if not total and len(group) > 1:
                    group[-1].in_generating_set = False

    _gen_override: list | None = None

    @property
    def gauge_gens(self) -> list[GaugeTerm]:
        if self._gen_override is not None:
            return self._gen_override
        return [t for t in self.z_terms + self.x_terms if t.in_generating_set]

    def gauge_paulis(self, generating_only=True):
        terms = self.gauge_gens if generating_only else self.z_terms + self.x_terms
        return [t.pauli(self.n, self.d) for t in terms]

    # -- stabilizers ------------------------------------------------------

    def _build_stabilizers(self):
        by_cell: dict[int, dict] = {}
        for tlist, kind in ((self.x_terms, X_TYPE), (self.z_terms, Z_TYPE)):
            for i, t in enumerate(tlist):
                rec = by_cell.setdefault((t.cell, kind), {GREEN: {}, YELLOW: {}, "ids": {GREEN: [], YELLOW: []}})
                _accumulate(rec[t.color], t.exps)
                rec["ids"][t.color].append(i)
        for cid in range(len(self.cells)):
            key, virt = self.cells[cid]
            for kind in (X_TYPE, Z_TYPE):
                rec = by_cell.get((cid, kind))
                if rec is None:
                    continue
                g, y = rec[GREEN], rec[YELLOW]
                if g and y and g == y:
                    stab_kind = "local-X" if kind == X_TYPE else "local-Z"
                    self.stabilizers.append(
                        Stabilizer(stab_kind, (key, virt), dict(g), rec["ids"][GREEN], rec["ids"][YELLOW])
                    )
        if self.manifold.kind == "torus3":
            for normal in (AXIS_X, AXIS_Y, AXIS_Z):
                self.stabilizers.append(
                    Stabilizer("sheet-X", ("sheet", normal, 0), self._sheet_x(normal, 0))
                )
                self.stabilizers.append(
                    Stabilizer("sheet-Z", ("sheet", normal, 0), self._sheet_z(normal, 0))
                )
            self._validate_sheets()

    def stabilizer_paulis(self):
        return [s.pauli(self.n, self.d) for s in self.stabilizers]

    def build_stabilizers(self):
        """The stabilizer generator list (built during construction)."""
        return self.stabilizers

    def build_logicals(self):
        """(bare, dressed) logical operator pairs; absent on closed manifolds."""
        if self.manifold.expected_k == 0:
            raise ValueError("no logical operators on a closed manifold")
        return self.bare_logicals, self.dressed_logicals

    # -- sheets -----------------------------------------------------------

    def _plane_vertices(self, normal, offset):
        for v in self.lattice.vertices():
            if v[normal] == offset:
                yield v

    # Per-axis edge sign patterns for sheet operators: the exponent of the
    # edge with tail vertex v is pattern(v), either the vertex-color sign
    # or a constant.  The right combination per plane is found by a small
    # search at build time and validated by exact commutation.
    _PATTERNS = (
        lambda sigma: sigma,
        lambda sigma: -sigma,
        lambda sigma: 1,
        lambda sigma: -1,
    )

    def _sheet(self, normal, offset, pat_a, pat_b, pauli_type) -> dict:
        """Sheet operator in the plane `normal = offset`.

        `pat_a` / `pat_b` give the per-axis tail-sign patterns for the
        two in-plane axes in ascending order.  Dangler pieces continue
        their column's pattern; for Z-type sheets the outer half of a
        split dangler is anti-aligned with the inner half.
        """
        lat = self.lattice
        axes = [a for a in (AXIS_X, AXIS_Y, AXIS_Z) if a != normal]
        pats = {axes[0]: pat_a, axes[1]: pat_b}
        z_like = pauli_type == Z_TYPE
        out: dict = {}
        for v in self._plane_vertices(normal, offset):
            sigma = 1 if vertex_color(v) == GREEN else -1
            for a in axes:
                q = lat.edge_piece(v, a, 1)
                if q is not None:
                    out[q] = pats[a](sigma)
            if AXIS_Y in axes and lat.manifold.has_y_boundary:
                x, y, z = v
                if y == lat.nv[AXIS_Y] - 1:
                    pieces = lat.column_pieces(x, z, TOP)
                    e = pats[AXIS_Y](sigma)
                    out[pieces[0]] = e
                    if len(pieces) == 2:
                        out[pieces[1]] = -e if z_like else e
                if y == 0:
                    # the tail of the downward edge is the virtual vertex below
                    pieces = lat.column_pieces(x, z, BOTTOM)
                    e = pats[AXIS_Y](-sigma)
                    out[pieces[0]] = e
                    if len(pieces) == 2:
                        out[pieces[1]] = -e if z_like else e
        return out

    def _solve_sheet(self, normal, offset, pauli_type) -> dict:
        """Find the sheet sign pattern that commutes with the gauge group."""
        for pat_a in self._PATTERNS:
            for pat_b in self._PATTERNS:
                cand = self._sheet(normal, offset, pat_a, pat_b, pauli_type)
                if self._commutes_with_gauge(cand, pauli_type == X_TYPE):
                    return cand
        raise AssertionError(
            f"no commuting sheet pattern (normal={normal}, type={pauli_type})"
        )

    def _sheet_x(self, normal, offset) -> dict:
        return self._solve_sheet(normal, offset, X_TYPE)

    def _sheet_z(self, normal, offset) -> dict:
        return self._solve_sheet(normal, offset, Z_TYPE)

    def _commutes_with_gauge(self, opdict, op_is_x: bool) -> bool:
        terms = self.z_terms if op_is_x else self.x_terms
        index = self._terms_by_qudit(terms)
        checked = set()
        for q in opdict:
            for ti in index.get(q, ()):
                if ti in checked:
                    continue
                checked.add(ti)
                if _sparse_sp(opdict, terms[ti].exps) % self.d != 0:
                    return False
        return True

    def _terms_by_qudit(self, terms):
        key = id(terms)
        cache = getattr(self, "_tbq_cache", None)
        if cache is None:
            cache = self._tbq_cache = {}
        if key not in cache:
            index: dict[int, list[int]] = {}
            for i, t in enumerate(terms):
                for q in t.exps:
                    index.setdefault(q, []).append(i)
            cache[key] = index
        return cache[key]

    def _validate_sheets(self):
        for s in self.stabilizers:
            if s.kind.startswith("sheet"):
                is_x = s.kind.endswith("X")
                if not self._commutes_with_gauge(s.exps, is_x):
                    raise AssertionError(f"sheet {s.locus} fails commutation")

    # -- logicals ---------------------------------------------------------

    def _string(self, side, fixed_axis, fixed_value, alternating, phase=1) -> dict:
        """String over the face pieces of one boundary row or column."""
        lat = self.lattice
        out = {}
        run_axis = AXIS_Z if fixed_axis == AXIS_X else AXIS_X
        for i in range(lat.nv[run_axis]):
            x, z = (fixed_value, i) if fixed_axis == AXIS_X else (i, fixed_value)
            e = phase * ((-1) ** i if alternating else 1)
            out[lat.column_face_piece(x, z, side)] = e
        return out

    def _solve_string(self, side, fixed_axis, fixed_value, pauli_type) -> dict:
        """Boundary string commuting with every stabilizer (sign search)."""
        is_x = pauli_type == X_TYPE
        for alternating in (True, False):
            cand = self._string(side, fixed_axis, fixed_value, alternating)
            if self._commutes_with_stabilizers(cand, is_x):
                return cand
        raise AssertionError(
            f"no stabilizer-commuting string (axis={fixed_axis}, type={pauli_type})"
        )

    def _build_logicals(self):
        kind = self.manifold.kind
        if kind == "torus3":
            return
        if kind == "t2xi_prime":
            # installed by apply_weight_reduction
            return
        if kind == "t2xi":
            # pair 1: X sheet in the xy plane at z=0, strings offset to avoid
            # crossing the second pair's supports
            pairs = [
                (self._sheet_x(AXIS_Z, 0), ("z", 0), (AXIS_X, 1)),
                (self._sheet_x(AXIS_X, 0), ("x", 0), (AXIS_Z, 1)),
            ]
        else:  # cube
            pairs = [(self._sheet_x(AXIS_X, 0), ("x", 0), (AXIS_Z, 0))]
        for bare_x, (sheet_axis, sheet_off), (zfix_axis, zfix_val) in pairs:
            if not self._commutes_with_gauge(bare_x, True):
                raise AssertionError("bare X sheet fails gauge commutation")
            # dressed X: the sheet reduced to the top face: the row of top
            # pieces in the sheet plane
            fixed_axis = AXIS_Z if sheet_axis == "z" else AXIS_X
            dressed_x = self._solve_string(TOP, fixed_axis, sheet_off, X_TYPE)
            dressed_z = self._solve_string(TOP, zfix_axis, zfix_val, Z_TYPE)
            pair = LogicalPair(bare_x=bare_x, dressed_x=dressed_x, dressed_z=dressed_z)
            self.logical_pairs.append(pair)
        self._normalize_logicals()

    def _stab_index(self):
        return [(s.kind, s.exps) for s in self.stabilizers]

    def _commutes_with_stabilizers(self, opdict, op_is_x: bool) -> bool:
        for s in self.stabilizers:
            s_is_x = s.kind.endswith("X")
            if s_is_x == op_is_x:
                continue
            x_op, z_op = (opdict, s.exps) if op_is_x else (s.exps, opdict)
            if _sparse_sp(x_op, z_op) % self.d != 0:
                return False
        return True

    def _normalize_logicals(self):
        """Validate dressed strings and normalize pairings to sp = 1."""
        for i, pair in enumerate(self.logical_pairs):
            if _sparse_sp(pair.dressed_x, pair.dressed_z) % self.d == 0:
                raise AssertionError("dressed pair fails to cross")
            for j, other in enumerate(self.logical_pairs):
                s = _sparse_sp(other.bare_x, pair.dressed_z) % self.d
                if i == j:
                    if s == self.d - 1:
                        for q in pair.dressed_z:
                            pair.dressed_z[q] = -pair.dressed_z[q]
                        s = _sparse_sp(other.bare_x, pair.dressed_z) % self.d
                    if s != 1:
                        raise AssertionError(f"pair {i} has pairing {s}, expected 1")
                elif s != 0:
                    raise AssertionError(f"cross pairing ({i},{j}) is {s}")

    def bare_z(self, i: int) -> dict:
        """Bare Z representative of logical i (dressed string times gauge).

        Solves for a Z-gauge element whose flux cancels the dressed
        string's anticommutation with the X-type gauge terms.
        """
        pair = self.logical_pairs[i]
        if pair._bare_z is None:
            d = self.d
            xt = self.x_terms
            target = np.array(
                [(-_sparse_sp(t.exps, pair.dressed_z)) % d for t in xt], dtype=np.int64
            )
            zt = self.z_terms
            # matrix of symplectic products sp(x_term_jx, z_gauge_jz)
            a = np.zeros((len(xt), len(zt)), dtype=np.int64)
            by_q: dict[int, list] = {}
            for jz, tz in enumerate(zt):
                for q, v in tz.exps.items():
                    by_q.setdefault(q, []).append((jz, v))
            for jx, tx in enumerate(xt):
                for q, xv in tx.exps.items():
                    for jz, zv in by_q.get(q, ()):
                        a[jx, jz] += xv * zv
            y = solve_mod(a, target, d)
            if y is None:
                raise AssertionError("dressed Z cannot be promoted to bare")
            out = {q: int(v) for q, v in pair.dressed_z.items()}
            for jz, c in enumerate(y):
                if c:
                    _accumulate(out, zt[jz].exps, int(c))
            out = {q: v % d for q, v in out.items() if v % d}
            if not self._commutes_with_gauge(out, False):
                raise AssertionError("bare Z fails gauge commutation")
            pair._bare_z = out
        return pair._bare_z

    @property
    def bare_logicals(self):
        """List of (bare X, bare Z) PauliOp pairs."""
        out = []
        for i, pair in enumerate(self.logical_pairs):
            bx = PauliOp.from_sparse(self.n, self.d, xterms=pair.bare_x.items())
            bz = PauliOp.from_sparse(self.n, self.d, zterms=self.bare_z(i).items())
            out.append((bx, bz))
        return out

    @property
    def dressed_logicals(self):
        out = []
        for pair in self.logical_pairs:
            dx = PauliOp.from_sparse(self.n, self.d, xterms=pair.dressed_x.items())
            dz = PauliOp.from_sparse(self.n, self.d, zterms=pair.dressed_z.items())
            out.append((dx, dz))
        return out

    @property
    def k(self) -> int:
        return len(self.logical_pairs) if self.manifold.kind != "torus3" else 0

    # -- incidence queries ---------------------------------------------------

    def sphere_incidence(self, sphere_id: int):
        """Ordered (qudit, orientation sign) pairs for one sphere.

        Vertex spheres list their incident edge pieces with the frozen
        per-axis sign table; bigons list their two dangler halves; the
        macroscopic face spheres list every face piece they act on.
        """
        from .lattice import SPHERE_SIGN_TABLE

        if not 0 <= sphere_id < len(self.spheres):
            raise IndexError(f"no sphere {sphere_id}")
        kind, payload, color = self.spheres[sphere_id]
        lat = self.lattice
        out = []
        if kind == "vertex":
            for axis in (0, 1, 2):
                for sign in (1, -1):
                    q = lat.edge_piece(payload, axis, sign)
                    if q is not None:
                        out.append((q, SPHERE_SIGN_TABLE[(color, axis, sign)]))
        elif kind == "bigon":
            side, x, z = payload
            inner = lat.piece_id[(side, x, z, "inner")]
            outer = lat.piece_id[(side, x, z, "outer")]
            out = [(inner, 1), (outer, -1)]
        elif kind == "face":
            side = payload
            for z in range(lat.nv[2]):
                for x in range(lat.nv[0]):
                    out.append((lat.column_face_piece(x, z, side), 1))
        elif kind == "plaquette":
            side, a, b = payload
            out = [(lat.plaq_id[(side, a, b)], 1)]
        return out

    def volume_incidence(self, cell_id: int):
        """Green/yellow gauge-term partition for one volume.

        For red volumes the X-type terms are returned (green set and
        yellow set have identical products when the volume supports a
        stabilizer); blue volumes analogously carry Z-type terms.
        """
        if not 0 <= cell_id < len(self.cells):
            raise IndexError(f"no cell {cell_id}")
        key, virt = self.cells[cell_id]
        color = cell_color(key)
        terms = self.x_terms if color == RED else self.z_terms
        green_ids = [i for i, t in enumerate(terms) if t.cell == cell_id and t.color == GREEN]
        yellow_ids = [i for i, t in enumerate(terms) if t.cell == cell_id and t.color == YELLOW]
        gp: dict = {}
        yp: dict = {}
        for i in green_ids:
            _accumulate(gp, terms[i].exps)
        for i in yellow_ids:
            _accumulate(yp, terms[i].exps)
        return {
            "cell": key,
            "virtual_axes": virt,
            "color": "red" if color == RED else "blue",
            "green_terms": green_ids,
            "yellow_terms": yellow_ids,
            "green_product": gp,
            "yellow_product": yp,
            "products_equal": gp == yp,
        }

    def red_volumes(self):
        return [c for c in range(len(self.cells)) if cell_color(self.cells[c][0]) == RED]

    def blue_volumes(self):
        return [c for c in range(len(self.cells)) if cell_color(self.cells[c][0]) == BLUE]

    # -- parameter verification -------------------------------------------

    def gauge_group(self) -> GroupBasis:
        return group_structure(self.gauge_paulis(generating_only=True))

    def stabilizer_group(self) -> GroupBasis:
        return group_structure(self.stabilizer_paulis())

    def verify_parameters(self) -> tuple[int, int]:
        """Recompute (n, k) from the built groups and check the table."""
        m = self.manifold
        gauge = self.gauge_group()
        stab = self.stabilizer_group()
        k = count_logical_qudits(gauge, stab, self.n)
        if (self.n, k) != (m.expected_n, m.expected_k):
            raise AssertionError(
                f"(n, k) = ({self.n}, {k}) does not match the expected "
                f"({m.expected_n}, {m.expected_k}) for {m.kind} L={m.L} d={self.d}"
            )
        return self.n, k

    # -- distance ----------------------------------------------------------

    def brute_force_distance(self, kind="dressed-Z", cap=3):
        """Exact dressed-Z distance up to `cap`, else the string ">cap".

        A weight-w Z operator is a dressed logical iff it commutes with
        every X-type stabilizer and has nonzero symplectic product with
        some bare logical X.
        """
        if kind != "dressed-Z":
            raise ValueError(f"unsupported distance kind {kind!r}")
        from itertools import combinations, product as iproduct

        d, n = self.d, self.n
        h2 = np.zeros((sum(1 for s in self.stabilizers if s.kind.endswith("X")), n), dtype=np.int64)
        r = 0
        for s in self.stabilizers:
            if s.kind.endswith("X"):
                for q, v in s.exps.items():
                    h2[r, q] = v
                r += 1
        bx = np.zeros((len(self.logical_pairs), n), dtype=np.int64)
        for i, pair in enumerate(self.logical_pairs):
            for q, v in pair.bare_x.items():
                bx[i, q] = v
        exps = list(range(1, d))
        for w in range(1, cap + 1):
            for support in combinations(range(n), w):
                cols_h2 = h2[:, support]
                cols_bx = bx[:, support]
                for assign in iproduct(exps, repeat=w):
                    vec = np.array(assign, dtype=np.int64)
                    if ((cols_h2 @ vec) % d).any():
                        continue
                    if ((cols_bx @ vec) % d).any():
                        return w
        return f">{cap}"

    # -- gauge fixing --------------------------------------------------------

    def gauge_fix_toric(self):
        """Z_d toric code stabilizers: local Z stabilizers + all X gauge terms."""
        if self.manifold.kind != "torus3":
            raise ValueError("gauge fixing to the toric code needs the 3-torus")
        gens = [s.pauli(self.n, self.d) for s in self.stabilizers if s.kind == "local-Z"]
        gens += [t.pauli(self.n, self.d) for t in self.x_terms]
        return gens

    # -- dump ------------------------------------------------------------------

    def dump(self) -> dict:
        def term_rec(t: GaugeTerm):
            return {
                "kind": t.kind,
                "color": COLOR_NAMES[t.color],
                "sphere": t.sphere,
                "cell": t.cell,
                "exps": sorted(t.exps.items()),
                "generator": t.in_generating_set,
            }

        return {
            "version": CODE_DUMP_VERSION,
            "manifold": {"kind": self.manifold.kind, "L": self.manifold.L},
            "d": self.d,
            "n": self.n,
            "z_terms": [term_rec(t) for t in self.z_terms],
            "x_terms": [term_rec(t) for t in self.x_terms],
            "stabilizers": [
                {"kind": s.kind, "locus": repr(s.locus), "exps": sorted(s.exps.items())}
                for s in self.stabilizers
            ],
        }


def build_code(manifold: Manifold, d: int) -> SubsystemCode:
    """Build the subsystem code for a manifold at local dimension d."""
    if manifold.kind == "t2xi_prime":
        from .weight_reduction import apply_weight_reduction

        base = SubsystemCode(Manifold.t2xi(manifold.L), d)
        return apply_weight_reduction(base)
    return SubsystemCode(manifold, d)

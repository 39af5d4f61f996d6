"""Cubic-lattice geometry for the four supported manifolds.

Qudits live on lattice edges; vertices are two-colored (green/yellow by
coordinate parity) and unit cells are two-colored (red/blue).  Each
vertex hosts a small sphere whose tetrahedral triangulation pairs the
six incident edges with the eight surrounding cells: blue cells label
the triangulation vertices and red cells its faces.

Boundary layout:

* y is the interval direction.  On ``t2xi`` and ``cube`` the columns end
  in dangling half-edges at y = 0 (bottom) and y = L-1 (top).  Danglers
  over one vertex color are split in half by a new two-edge sphere (a
  "bigon"); the top face splits danglers over green vertices with
  yellow bigons, the bottom face splits over yellow with green bigons.
  A macroscopic face sphere (green on top, yellow on bottom) completes
  the structure, acting on the outermost dangler pieces.
* On ``cube`` the x faces are smooth and the z faces are rough.

Qudit indexing is canonical: bulk edges sorted lexicographically by
(z, y, x, axis), then bottom-face pieces by (z, x) with inner before
outer, then top-face pieces, then any plaquette qudits by (z, x).
"""

from __future__ import annotations

from dataclasses import dataclass, field

AXIS_X, AXIS_Y, AXIS_Z = 0, 1, 2

GREEN, YELLOW = 0, 1
COLOR_NAMES = {GREEN: "green", YELLOW: "yellow"}

RED, BLUE = 0, 1

BOTTOM, TOP = 0, 1

# --------------------------------------------------------------------------
# Per-vertex gauge term tables.
#
# Each vertex sphere carries four Z-type (vertex) terms, one per adjacent
# blue cell, and four X-type (face) terms, one per adjacent red cell.
# Octants are (ex, ey, ez) signs locating the cell relative to the vertex;
# the entry maps local edges (axis, sign) to Z_d exponents (+1 or -1).
# The exponents encode the frozen, translation-invariant edge orientation;
# they make same-color terms commute and give every volume an identical
# green-only and yellow-only product.
# --------------------------------------------------------------------------

VERTEX_Z_TERMS = {
    GREEN: [
        ((1, -1, 1), {(AXIS_X, 1): -1, (AXIS_Z, 1): 1, (AXIS_Y, -1): 1}),
        ((1, 1, -1), {(AXIS_Z, -1): -1, (AXIS_X, 1): 1, (AXIS_Y, 1): 1}),
        ((-1, -1, -1), {(AXIS_X, -1): -1, (AXIS_Z, -1): 1, (AXIS_Y, -1): -1}),
        ((-1, 1, 1), {(AXIS_X, -1): 1, (AXIS_Z, 1): -1, (AXIS_Y, 1): -1}),
    ],
    YELLOW: [
        ((1, -1, -1), {(AXIS_Z, -1): 1, (AXIS_X, 1): -1, (AXIS_Y, -1): 1}),
        ((1, 1, 1), {(AXIS_X, 1): 1, (AXIS_Z, 1): -1, (AXIS_Y, 1): 1}),
        ((-1, -1, 1), {(AXIS_X, -1): -1, (AXIS_Z, 1): 1, (AXIS_Y, -1): -1}),
        ((-1, 1, -1), {(AXIS_X, -1): 1, (AXIS_Z, -1): -1, (AXIS_Y, 1): -1}),
    ],
}

VERTEX_X_TERMS = {
    GREEN: [
        ((1, -1, -1), {(AXIS_Z, -1): 1, (AXIS_X, 1): 1, (AXIS_Y, -1): 1}),
        ((1, 1, 1), {(AXIS_X, 1): -1, (AXIS_Z, 1): -1, (AXIS_Y, 1): 1}),
        ((-1, -1, 1), {(AXIS_X, -1): 1, (AXIS_Z, 1): 1, (AXIS_Y, -1): -1}),
        ((-1, 1, -1), {(AXIS_X, -1): -1, (AXIS_Z, -1): -1, (AXIS_Y, 1): -1}),
    ],
    YELLOW: [
        ((1, -1, 1), {(AXIS_X, 1): 1, (AXIS_Z, 1): 1, (AXIS_Y, -1): 1}),
        ((1, 1, -1), {(AXIS_Z, -1): -1, (AXIS_X, 1): -1, (AXIS_Y, 1): 1}),
        ((-1, -1, -1), {(AXIS_X, -1): 1, (AXIS_Z, -1): 1, (AXIS_Y, -1): -1}),
        ((-1, 1, 1), {(AXIS_X, -1): -1, (AXIS_Z, 1): -1, (AXIS_Y, 1): -1}),
    ],
}

# Sphere-incidence sign table: orientation sign of each local edge seen
# from a sphere of the given color (the vertex-term exponent of the first
# blue cell containing the edge, in table order).
SPHERE_SIGN_TABLE = {}
for _color in (GREEN, YELLOW):
    for _oct, _exps in VERTEX_Z_TERMS[_color]:
        for _edge, _exp in _exps.items():
            SPHERE_SIGN_TABLE.setdefault((_color, *_edge), _exp)


DUMP_FORMAT_VERSION = 1


@dataclass(frozen=True)
class Manifold:
    """One of the four supported geometries at even linear size L."""

    kind: str  # torus3 | t2xi | t2xi_prime | cube
    L: int

    KINDS = ("torus3", "t2xi", "t2xi_prime", "cube")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown manifold kind {self.kind!r}")
        if self.L < 2 or self.L % 2:
            raise ValueError(f"linear size must be even and >= 2, got {self.L}")

    @classmethod
    def torus3(cls, L):
        return cls("torus3", L)

    @classmethod
    def t2xi(cls, L):
        return cls("t2xi", L)

    @classmethod
    def t2xi_prime(cls, L):
        return cls("t2xi_prime", L)

    @classmethod
    def cube(cls, L):
        return cls("cube", L)

    @property
    def has_y_boundary(self) -> bool:
        return self.kind != "torus3"

    @property
    def has_side_boundary(self) -> bool:
        return self.kind == "cube"

    @property
    def expected_n(self) -> int:
        L = self.L
        return {
            "torus3": 3 * L**3,
            "t2xi": 3 * L**3 + 2 * L**2,
            "t2xi_prime": 3 * L**3 + 3 * L**2,
            "cube": 3 * L**3 + 6 * L**2 + 5 * L + 1,
        }[self.kind]

    @property
    def expected_k(self) -> int:
        return {"torus3": 0, "t2xi": 2, "t2xi_prime": 2, "cube": 1}[self.kind]


def vertex_color(v) -> int:
    return GREEN if (v[0] + v[1] + v[2]) % 2 == 0 else YELLOW


def cell_color(c) -> int:
    """Color of a unit cell by its minimum corner: even sum = red."""
    return RED if (c[0] + c[1] + c[2]) % 2 == 0 else BLUE


class Lattice:
    """Geometry registry for one manifold instance.

    Provides the canonical qudit indexing, vertex/cell enumeration, and
    the incidence helpers the code builder uses.  Immutable after build.
    """

    def __init__(self, manifold: Manifold):
        self.manifold = manifold
        L = manifold.L
        self.L = L
        # vertex coordinate ranges (inclusive counts)
        self.periodic = {
            AXIS_X: manifold.kind != "cube",
            AXIS_Y: manifold.kind == "torus3",
            AXIS_Z: manifold.kind != "cube",
        }
        self.nv = {
            AXIS_X: L + 1 if manifold.kind == "cube" else L,
            AXIS_Y: L,
            AXIS_Z: L + 1 if manifold.kind == "cube" else L,
        }
        self._build_qudits()

    # -- construction -------------------------------------------------

    def _build_qudits(self):
        m = self.manifold
        self.qudits: list[tuple] = []  # records for the dump
        self.edge_id: dict[tuple, int] = {}
        self.piece_id: dict[tuple, int] = {}  # (side, x, z, which)
        self.plaq_id: dict[tuple, int] = {}  # (side, a, b)

        def add(record) -> int:
            self.qudits.append(record)
            return len(self.qudits) - 1

        for z in range(self.nv[AXIS_Z]):
            for y in range(self.nv[AXIS_Y]):
                for x in range(self.nv[AXIS_X]):
                    for axis in (AXIS_X, AXIS_Y, AXIS_Z):
                        if self._edge_exists((x, y, z), axis):
                            self.edge_id[(x, y, z, axis)] = add(
                                ("edge", (x, y, z), axis)
                            )
        if m.has_y_boundary:
            for side, ylayer in ((BOTTOM, 0), (TOP, self.nv[AXIS_Y] - 1)):
                for z in range(self.nv[AXIS_Z]):
                    for x in range(self.nv[AXIS_X]):
                        if self.column_split(x, z, side):
                            self.piece_id[(side, x, z, "inner")] = add(
                                ("dangler", (x, z), side, "inner")
                            )
                            self.piece_id[(side, x, z, "outer")] = add(
                                ("dangler", (x, z), side, "outer")
                            )
                        else:
                            self.piece_id[(side, x, z, "single")] = add(
                                ("dangler", (x, z), side, "single")
                            )
        if m.kind == "t2xi_prime":
            for side in (BOTTOM, TOP):
                for b in range(self.L):
                    for a in range(self.L):
                        if self.footprint_color(a, b, side) == RED:
                            self.plaq_id[(side, a, b)] = add(("plaq", (a, b), side))
        self.n = len(self.qudits)
        if self.n != m.expected_n:
            raise AssertionError(
                f"qudit count {self.n} != expected {m.expected_n} for {m}"
            )

    def _edge_exists(self, tail, axis) -> bool:
        if self.periodic[axis]:
            return True
        return tail[axis] + 1 <= self.nv[axis] - 1

    # -- basic queries -------------------------------------------------

    def vertices(self):
        for z in range(self.nv[AXIS_Z]):
            for y in range(self.nv[AXIS_Y]):
                for x in range(self.nv[AXIS_X]):
                    yield (x, y, z)

    def boundary_vertex_layer(self, side: int) -> int:
        return 0 if side == BOTTOM else self.nv[AXIS_Y] - 1

    def column_split(self, x: int, z: int, side: int) -> bool:
        """Is the dangler over column (x, z) on this face split by a bigon?

        Top danglers split over green vertices, bottom over yellow; with
        green = even coordinate parity both conditions read x + z odd.
        """
        v = (x, self.boundary_vertex_layer(side), z)
        want = GREEN if side == TOP else YELLOW
        return vertex_color(v) == want

    def bigon_color(self, side: int) -> int:
        return YELLOW if side == TOP else GREEN

    def face_color(self, side: int) -> int:
        return GREEN if side == TOP else YELLOW

    def footprint_color(self, a: int, b: int, side: int) -> int:
        """Color of the virtual cell with footprint min-corner (a, b)."""
        cy = self.nv[AXIS_Y] - 1 if side == TOP else -1
        return cell_color((a, cy, b))

    def edge_piece(self, v, axis, sign):
        """Qudit id of the (axis, sign) edge at vertex v, or None if absent.

        At the y boundaries the outgoing y edge resolves to the dangler
        piece adjacent to the vertex (the inner half when split).
        """
        x, y, z = v
        if axis == AXIS_Y and self.manifold.has_y_boundary:
            if sign == 1 and y == self.nv[AXIS_Y] - 1:
                return self._column_inner_piece(x, z, TOP)
            if sign == -1 and y == 0:
                return self._column_inner_piece(x, z, BOTTOM)
        if sign == 1:
            tail = [x, y, z]
        else:
            tail = [x, y, z]
            tail[axis] -= 1
        if self.periodic[axis]:
            tail[axis] %= self.nv[axis]
        else:
            if not (0 <= tail[axis] <= self.nv[axis] - 2):
                return None
        return self.edge_id.get((tail[0], tail[1], tail[2], axis))

    def _column_inner_piece(self, x, z, side):
        if self.column_split(x, z, side):
            return self.piece_id[(side, x, z, "inner")]
        return self.piece_id[(side, x, z, "single")]

    def column_face_piece(self, x, z, side):
        """The dangler piece the macroscopic face sphere acts on."""
        if self.column_split(x, z, side):
            return self.piece_id[(side, x, z, "outer")]
        return self.piece_id[(side, x, z, "single")]

    def column_pieces(self, x, z, side):
        """All dangler pieces of a column, innermost first."""
        if self.column_split(x, z, side):
            return [
                self.piece_id[(side, x, z, "inner")],
                self.piece_id[(side, x, z, "outer")],
            ]
        return [self.piece_id[(side, x, z, "single")]]

    def split_columns(self, side):
        for z in range(self.nv[AXIS_Z]):
            for x in range(self.nv[AXIS_X]):
                if self.column_split(x, z, side):
                    yield (x, z)

    def wrap_column(self, x, z):
        """Canonicalize a column index on periodic side axes, or None."""
        if self.periodic[AXIS_X]:
            x %= self.nv[AXIS_X]
        elif not (0 <= x <= self.nv[AXIS_X] - 1):
            return None
        if self.periodic[AXIS_Z]:
            z %= self.nv[AXIS_Z]
        elif not (0 <= z <= self.nv[AXIS_Z] - 1):
            return None
        return (x, z)

    def cell_key(self, c):
        """Canonical key of a cell (min corner), wrapping periodic axes.

        Returns (key, virtual_axes) where virtual_axes lists the open
        axes on which the cell sticks out of the lattice (with signs).
        """
        cx, cy, cz = c
        virt = []
        if self.periodic[AXIS_X]:
            cx %= self.nv[AXIS_X]
        elif cx < 0:
            virt.append((AXIS_X, -1))
        elif cx > self.nv[AXIS_X] - 2:
            virt.append((AXIS_X, 1))
        if self.periodic[AXIS_Y]:
            cy %= self.nv[AXIS_Y]
        elif cy < 0:
            virt.append((AXIS_Y, -1))
        elif cy > self.nv[AXIS_Y] - 2:
            virt.append((AXIS_Y, 1))
        if self.periodic[AXIS_Z]:
            cz %= self.nv[AXIS_Z]
        elif cz < 0:
            virt.append((AXIS_Z, -1))
        elif cz > self.nv[AXIS_Z] - 2:
            virt.append((AXIS_Z, 1))
        return (cx, cy, cz), tuple(virt)

    def octant_cell(self, v, octant):
        """Cell at the given octant of a vertex: min corner v + (e-1)/2."""
        return (
            v[0] + (octant[0] - 1) // 2,
            v[1] + (octant[1] - 1) // 2,
            v[2] + (octant[2] - 1) // 2,
        )

    def footprint_corners(self, a, b):
        """The four (x, z) corner columns of footprint [a,a+1]x[b,b+1].

        Corners outside an open lattice are returned as None (same slot
        order preserved, x-minor).
        """
        out = []
        for dz in (0, 1):
            for dx in (0, 1):
                out.append(self.wrap_column(a + dx, b + dz))
        return out

    def real_cells(self):
        """Min corners of all real (fully interior) unit cells."""
        for cz in range(self.nv[AXIS_Z] if self.periodic[AXIS_Z] else self.nv[AXIS_Z] - 1):
            for cy in range(self.nv[AXIS_Y] if self.periodic[AXIS_Y] else self.nv[AXIS_Y] - 1):
                for cx in range(self.nv[AXIS_X] if self.periodic[AXIS_X] else self.nv[AXIS_X] - 1):
                    yield (cx, cy, cz)

    # -- dump ------------------------------------------------------------

    def dump(self) -> dict:
        """Canonical JSON-ready description (versioned, deterministic)."""
        spheres = []
        for v in self.vertices():
            spheres.append(["vertex", list(v), COLOR_NAMES[vertex_color(v)]])
        if self.manifold.has_y_boundary:
            for side in (BOTTOM, TOP):
                for (x, z) in self.split_columns(side):
                    spheres.append(
                        ["bigon", [side, x, z], COLOR_NAMES[self.bigon_color(side)]]
                    )
            for side in (BOTTOM, TOP):
                spheres.append(["face", side, COLOR_NAMES[self.face_color(side)]])
        volumes = [
            {
                "cell": list(c),
                "color": "red" if cell_color(c) == RED else "blue",
            }
            for c in self.real_cells()
        ]
        tags = {
            "periodic_axes": [a for a in (AXIS_X, AXIS_Y, AXIS_Z) if self.periodic[a]],
            "smooth_faces": ["x-" , "x+"] if self.manifold.kind == "cube" else [],
            "rough_faces": ["z-", "z+"] if self.manifold.kind == "cube" else [],
            "boundary_faces": ["y-", "y+"] if self.manifold.has_y_boundary else [],
        }
        return {
            "version": DUMP_FORMAT_VERSION,
            "manifold": {"kind": self.manifold.kind, "L": self.L},
            "n": self.n,
            "qudits": [list(map(_jsonable, rec)) for rec in self.qudits],
            "spheres": spheres,
            "volumes": volumes,
            "tags": tags,
        }


def _jsonable(x):
    if isinstance(x, tuple):
        return list(x)
    return x


def build_lattice(manifold: Manifold) -> Lattice:
    """Construct the lattice registry for a manifold (deterministic)."""
    return Lattice(manifold)

import json

import pytest

from saqd.lattice import BOTTOM, TOP, Lattice, Manifold, build_lattice


@pytest.mark.parametrize(
    "kind,L,n",
    [
        ("torus3", 2, 24),
        ("torus3", 4, 192),
        ("torus3", 6, 648),
        ("t2xi", 2, 32),
        ("t2xi", 4, 224),
        ("t2xi", 6, 720),
        ("t2xi_prime", 2, 36),
        ("t2xi_prime", 4, 240),
        ("t2xi_prime", 6, 756),
        ("cube", 2, 59),
        ("cube", 4, 309),
        ("cube", 6, 895),
    ],
)
def test_qudit_counts(kind, L, n):
    lat = build_lattice(Manifold(kind, L))
    assert lat.n == n


def test_odd_or_small_size_rejected():
    with pytest.raises(ValueError):
        Manifold.torus3(3)
    with pytest.raises(ValueError):
        Manifold.cube(0)
    with pytest.raises(ValueError):
        Manifold("klein", 2)


def test_build_deterministic():
    a = build_lattice(Manifold.cube(4)).dump()
    b = build_lattice(Manifold.cube(4)).dump()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert a["version"] == 1


def test_torus_every_qudit_in_two_spheres(code_factory):
    code = code_factory("torus3", 2, 2)
    counts = [0] * code.n
    greens = yellows = 0
    for sid, (kind, payload, color) in enumerate(code.spheres):
        inc = code.sphere_incidence(sid)
        assert len(inc) == 6
        for q, _sign in inc:
            counts[q] += 1
        if color == 0:
            greens += 1
        else:
            yellows += 1
    assert all(c == 2 for c in counts)
    assert greens == yellows


def test_boundary_sphere_incidence(code_factory):
    code = code_factory("t2xi", 2, 2)
    bigons = [s for s, (k, _, _) in enumerate(code.spheres) if k == "bigon"]
    assert len(bigons) == 4  # L^2/2 per face
    for sid in bigons:
        assert len(code.sphere_incidence(sid)) == 2


def test_total_incidence_torus(code_factory):
    code = code_factory("torus3", 2, 2)
    total = sum(len(code.sphere_incidence(s)) for s in range(len(code.spheres)))
    assert total == 2 * code.n


def test_red_volume_counts(code_factory):
    code = code_factory("torus3", 2, 2)
    real_reds = [
        c
        for c in code.red_volumes()
        if not code.cells[c][1]  # no virtual axes
    ]
    assert len(real_reds) == 2**3 // 2


def test_volume_products_equal(code_factory):
    code = code_factory("torus3", 2, 3)
    for cid in range(len(code.cells)):
        rec = code.volume_incidence(cid)
        assert rec["products_equal"], rec["cell"]
        assert rec["green_product"], "volume without support"


def test_cube_boundary_volumes_truncated(code_factory):
    code = code_factory("cube", 2, 2)
    chopped = [
        code.volume_incidence(c)
        for c in range(len(code.cells))
        if code.cells[c][1]  # virtual in some direction
    ]
    assert chopped, "expected boundary volumes"
    assert any(0 < len(r["green_product"]) < 12 for r in chopped)

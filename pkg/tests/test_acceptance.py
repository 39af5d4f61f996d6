"""Acceptance suite: one test per acceptance criterion, stated tolerances.

Each test prints a single [ACCEPT] pass/fail line.  The threshold
criteria run full Monte Carlo sweeps (2e4 trials/point, L up to 8) and
take tens of minutes on a workstation; everything else is fast.
"""

import math
import sys
import time

import numpy as np
import pytest

from saqd.channel import NoiseParams, TrialEngine, sample_z_error, trial_rng
from saqd.cluster import cluster_decode
from saqd.code import build_code
from saqd.experiment import (
    RunConfig,
    crossing_threshold,
    forward_rescale,
    rescale_threshold,
    run_sweep,
)
from saqd.lattice import Manifold
from saqd.matching import mwpm_decode

TRIALS = 20_000
THRESHOLD_LS = (4, 6, 8)


def report(name, ok, detail=""):
    line = f"[ACCEPT] {name}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f"  ({detail})"
    print(line, file=sys.stderr, flush=True)
    return ok


# -------------------------------------------------------------------------
# criterion: parameter table, 4 manifolds x L in {2,4} x d in {2,3,5,16}
# -------------------------------------------------------------------------


def test_parameter_table():
    t0 = time.time()
    for kind in Manifold.KINDS:
        for L in (2, 4):
            for d in (2, 3, 5, 16):
                code = build_code(Manifold(kind, L), d)
                code.verify_parameters()
    elapsed = time.time() - t0
    ok = elapsed < 10.0
    assert report("parameter table (32 cases)", ok, f"{elapsed:.1f}s < 10s")


# -------------------------------------------------------------------------
# criterion: distance spot checks
# -------------------------------------------------------------------------


def test_distance_spot_checks():
    t0 = time.time()
    cube = build_code(Manifold.cube(2), 2)
    t2 = build_code(Manifold.t2xi(2), 2)
    d_cube = cube.brute_force_distance("dressed-Z", 3)
    d_t2 = t2.brute_force_distance("dressed-Z", 2)
    w_cube = len(cube.logical_pairs[0].bare_x)
    w_t2 = len(t2.logical_pairs[0].bare_x)
    elapsed = time.time() - t0
    ok = d_cube == 3 and d_t2 == 2 and w_cube == 15 and w_t2 == 12 and elapsed < 120
    assert report(
        "distance spot checks",
        ok,
        f"cube D_dr={d_cube} (3), t2xi D_dr={d_t2} (2), bare weights {w_cube}/{w_t2} (15/12), {elapsed:.1f}s",
    )


# -------------------------------------------------------------------------
# criterion: structural invariant suite (exact, zero tolerance)
# -------------------------------------------------------------------------


def test_structural_invariants():
    from test_code import same_color_commutation

    ok = True
    # same-color commutation
    for kind in Manifold.KINDS:
        for L, d in ((2, 2), (2, 3), (4, 2)):
            ok &= same_color_commutation(build_code(Manifold(kind, L), d))
    # green/yellow double derivation of every emitted local stabilizer
    for kind in ("torus3", "t2xi", "cube"):
        code = build_code(Manifold(kind, 2), 3)
        stab_loci = {s.locus for s in code.stabilizers if s.kind.startswith("local")}
        derivable = {
            (code.volume_incidence(c)["cell"], code.volume_incidence(c)["virtual_axes"])
            for c in range(len(code.cells))
            if code.volume_incidence(c)["products_equal"]
            and code.volume_incidence(c)["green_product"]
        }
        ok &= stab_loci == derivable
    # Gauss laws on 1000 random physical flux configurations
    eng = TrialEngine(build_code(Manifold.cube(2), 3))
    rng = np.random.default_rng(100)
    for _ in range(1000):
        res = (eng.random_z_gauge(rng) + sample_z_error(eng.n, 0.3, 3, rng)) % 3
        flux = eng.measure_flux(res)
        if ((eng.h1_mat @ flux) % 3).any():
            ok = False
            break
    assert report("structural invariants (commutation, derivation, Gauss laws)", ok)


def test_decoder_validity_fuzz():
    ok = True
    counts = 0
    for d in (2, 3, 16):
        eng = TrialEngine(build_code(Manifold.cube(2), d))
        rng = np.random.default_rng(200 + d)
        for i in range(5000):
            c = rng.integers(0, d, eng.h1_mat.shape[1]) * (
                rng.random(eng.h1_mat.shape[1]) < 0.06
            )
            syn = np.asarray(eng.h1_mat @ c) % d
            y = cluster_decode(eng.g1, syn, d)
            ok &= not ((eng.h1_mat @ y - syn) % d).any()
            cq = rng.integers(0, d, eng.n) * (rng.random(eng.n) < 0.06)
            syn2 = np.asarray(eng.h2_mat @ cq) % d
            y2 = cluster_decode(eng.g2, syn2, d)
            ok &= not ((eng.h2_mat @ y2 - syn2) % d).any()
            counts += 2
    eng = TrialEngine(build_code(Manifold.cube(2), 2), "matching", "matching")
    rng = np.random.default_rng(300)
    for i in range(5000):
        c = (rng.random(eng.h1_mat.shape[1]) < 0.06).astype(np.int64)
        syn = np.asarray(eng.h1_mat @ c) % 2
        y = mwpm_decode(eng.g1, syn)
        ok &= not ((eng.h1_mat @ y - syn) % 2).any()
        cq = (rng.random(eng.n) < 0.06).astype(np.int64)
        syn2 = np.asarray(eng.h2_mat @ cq) % 2
        y2 = mwpm_decode(eng.g2, syn2)
        ok &= not ((eng.h2_mat @ y2 - syn2) % 2).any()
        counts += 2
    assert report("decoder validity H y = sigma", ok, f"{counts} random instances")


# -------------------------------------------------------------------------
# criterion: zero-noise soundness
# -------------------------------------------------------------------------


def test_zero_noise_soundness():
    failures = 0
    total = 0
    for kind in Manifold.KINDS:
        for d in (2, 3, 16):
            eng = TrialEngine(build_code(Manifold(kind, 2), d))
            noise = NoiseParams(0.0, 2)
            for i in range(1000):
                failures += eng.run_trial(noise, trial_rng(1000 + d, i))
                total += 1
    ok = failures == 0
    assert report("zero-noise soundness", ok, f"{failures} failures in {total} trials")


# -------------------------------------------------------------------------
# criterion: single-error correction, cube L=4, d in {2,3}, exhaustive
# -------------------------------------------------------------------------


def test_single_error_correction():
    bad = 0
    total = 0
    for d in (2, 3):
        eng = TrialEngine(build_code(Manifold.cube(4), d))
        for q in range(eng.n):
            for j in range(1, d):
                res = np.zeros(eng.n, dtype=np.int64)
                res[q] = j
                corr = eng.two_stage_decode(eng.measure_flux(res))
                bad += eng.logical_failure((res - corr) % d)
                total += 1
    ok = bad == 0
    assert report("single-error correction (cube L=4)", ok, f"{bad}/{total} failed")


# -------------------------------------------------------------------------
# criterion: threshold reproduction (heavy)
# -------------------------------------------------------------------------


def _sweep_curves(validator, corrector, ps, t=4, trials=TRIALS, Ls=THRESHOLD_LS, seed=77):
    cfg = RunConfig(
        "cube", (2,), Ls, ps, (t,), trials=trials,
        validator=validator, corrector=corrector, seed=seed,
    )
    curves = {}
    for dp in run_sweep(cfg, progress=True):
        curves.setdefault(dp.L, []).append(dp)
    return curves


@pytest.fixture(scope="module")
def threshold_estimates():
    grids = {
        ("matching", "matching"): tuple(0.0085 + 0.001 * i for i in range(5)),
        ("clustering", "clustering"): tuple(0.0035 + 0.001 * i for i in range(5)),
        ("matching", "clustering"): tuple(0.0035 + 0.001 * i for i in range(5)),
        ("clustering", "matching"): tuple(0.007 + 0.001 * i for i in range(5)),
    }
    out = {}
    for (val, corr), ps in grids.items():
        est = crossing_threshold(_sweep_curves(val, corr, ps))
        out[(val, corr)] = est
        print(
            f"[threshold] {val}/{corr}: {est.p_th:.4%} +- {est.uncertainty:.4%}",
            file=sys.stderr,
            flush=True,
        )
    return out


@pytest.mark.acceptance
def test_threshold_matching_matching(threshold_estimates):
    est = threshold_estimates[("matching", "matching")]
    ok = 0.0085 <= est.p_th <= 0.0125
    assert report(
        "threshold matching/matching in [0.85%, 1.25%] (paper 1.05(3)%)",
        ok,
        f"{est.p_th:.4%} +- {est.uncertainty:.4%}",
    )


@pytest.mark.acceptance
def test_threshold_clustering_clustering(threshold_estimates):
    est = threshold_estimates[("clustering", "clustering")]
    ok = 0.0025 <= est.p_th <= 0.0050
    assert report(
        "threshold clustering/clustering in [0.25%, 0.50%] (paper 0.36(1)%)",
        ok,
        f"{est.p_th:.4%} +- {est.uncertainty:.4%}",
    )


@pytest.mark.acceptance
def test_threshold_mc_matches_cc(threshold_estimates):
    cc = threshold_estimates[("clustering", "clustering")]
    mc = threshold_estimates[("matching", "clustering")]
    ok = abs(mc.p_th - cc.p_th) <= 0.001
    assert report(
        "threshold matching/clustering within 0.1pp of clustering/clustering",
        ok,
        f"mc {mc.p_th:.4%} vs cc {cc.p_th:.4%}",
    )


@pytest.mark.acceptance
def test_threshold_clustering_matching(threshold_estimates):
    est = threshold_estimates[("clustering", "matching")]
    ok = 0.007 <= est.p_th <= 0.011
    assert report(
        "threshold clustering/matching in [0.7%, 1.1%] (paper 0.89(2)%)",
        ok,
        f"{est.p_th:.4%} +- {est.uncertainty:.4%}",
    )


@pytest.mark.acceptance
def test_threshold_ordering(threshold_estimates):
    mm = threshold_estimates[("matching", "matching")].p_th
    cc = threshold_estimates[("clustering", "clustering")].p_th
    mc = threshold_estimates[("matching", "clustering")].p_th
    cm = threshold_estimates[("clustering", "matching")].p_th
    # the correction stage is the bottleneck: swapping the corrector to
    # clustering moves the threshold much more than swapping the validator
    ok = cc < cm <= mm and mc < cm
    assert report(
        "threshold ordering (correction stage is the bottleneck)",
        ok,
        f"cc {cc:.3%}, mc {mc:.3%}, cm {cm:.3%}, mm {mm:.3%}",
    )


# -------------------------------------------------------------------------
# criterion: t-insensitivity (desk scale)
# -------------------------------------------------------------------------


@pytest.mark.acceptance
def test_t_insensitivity():
    ps = tuple(0.004 + 0.001 * i for i in range(5))
    est = {}
    for t in (2, 8):
        curves = _sweep_curves(
            "clustering", "clustering", ps, t=t, trials=4000, Ls=(4, 6), seed=88
        )
        est[t] = crossing_threshold(curves)
    gap = abs(est[2].p_th - est[8].p_th)
    budget = est[2].uncertainty + est[8].uncertainty
    ok = gap <= budget
    assert report(
        "t-insensitivity (t=2 vs t=8)",
        ok,
        f"{est[2].p_th:.4%} vs {est[8].p_th:.4%}, gap {gap:.4%} <= {budget:.4%}",
    )


# -------------------------------------------------------------------------
# criterion: rescaling
# -------------------------------------------------------------------------


def test_rescaling_roundtrip():
    rng = np.random.default_rng(5)
    ok = rescale_threshold(0.123, 2) == pytest.approx(0.123, abs=1e-15)
    for _ in range(100):
        p = float(rng.uniform(0.0, 0.6))
        d = int(rng.integers(2, 64))
        back = forward_rescale(rescale_threshold(p, d), d)
        ok &= abs(back - p) < 1e-12
    assert report("rescaling round-trip to 1e-12", bool(ok))


@pytest.fixture(scope="module")
def dsweep_thresholds():
    ps = tuple(0.003 + 0.00125 * i for i in range(5))
    raw = {}
    for d in (2, 4, 16):
        cfg = RunConfig(
            "cube", (d,), (4, 6), ps, (2,), trials=4000,
            validator="clustering", corrector="clustering", seed=99,
        )
        curves = {}
        for dp in run_sweep(cfg, progress=True):
            curves.setdefault(dp.L, []).append(dp)
        raw[d] = crossing_threshold(curves).p_th
        print(f"[rescale] d={d}: raw {raw[d]:.4%}", file=sys.stderr, flush=True)
    return raw


@pytest.mark.acceptance
def test_rescaling_dsweep_raw_increases(dsweep_thresholds):
    raw = dsweep_thresholds
    ok = raw[2] < raw[4] < raw[16]
    assert report(
        "d-sweep: raw thresholds increase with d",
        ok,
        f"{raw[2]:.3%} < {raw[4]:.3%} < {raw[16]:.3%}",
    )


@pytest.mark.acceptance
def test_rescaling_dsweep_rescaled_decreases(dsweep_thresholds):
    raw = dsweep_thresholds
    scaled = {d: rescale_threshold(p, d) for d, p in raw.items()}
    ok = scaled[2] > scaled[4] > scaled[16]
    assert report(
        "d-sweep: rescaled thresholds decrease with d",
        ok,
        f"{scaled[2]:.3%} > {scaled[4]:.3%} > {scaled[16]:.3%}",
    )

import math
import os

import numpy as np
import pytest

from saqd.experiment import (
    DataPoint,
    NoCrossing,
    RunConfig,
    agresti_coull,
    crossing_threshold,
    forward_rescale,
    read_csv,
    rescale_threshold,
    run_sweep,
)


def test_agresti_coull_published_values():
    lo, hi = agresti_coull(50, 1000)
    p_t = (50 + 1.96**2 / 2) / (1000 + 1.96**2)
    assert abs(p_t - 0.0517) < 5e-4
    assert abs(lo - 0.0380) < 1e-3
    assert abs(hi - 0.0654) < 1e-3


def test_agresti_coull_edges():
    lo, hi = agresti_coull(0, 1000)
    assert lo == 0.0 and hi < 0.01
    lo, hi = agresti_coull(1000, 1000)
    assert hi == 1.0 and lo > 0.99


def test_interval_contains_point_estimate():
    rng = np.random.default_rng(0)
    for _ in range(200):
        n = int(rng.integers(1, 5000))
        k = int(rng.integers(0, n + 1))
        lo, hi = agresti_coull(k, n)
        assert lo <= k / n <= hi


def _dp(p, pfail, L, trials=10_000):
    return DataPoint(
        manifold="cube",
        d=2,
        L=L,
        p=p,
        t=4,
        validator="matching",
        corrector="matching",
        trials=trials,
        failures=int(round(pfail * trials)),
        seed=0,
    )


def test_crossing_synthetic_lines():
    ps = [0.006 + 0.001 * i for i in range(8)]
    curves = {
        4: [_dp(p, min(0.9, max(0.001, 3 * (p - 0.01) + 0.05)), 4) for p in ps],
        6: [_dp(p, min(0.9, max(0.001, 9 * (p - 0.01) + 0.05)), 6) for p in ps],
    }
    est = crossing_threshold(curves)
    assert est.method == "crossing"
    assert abs(est.p_th - 0.01) < 2e-4
    assert est.inputs == (4, 6)


def test_crossing_prefers_largest_sizes():
    ps = [0.006 + 0.001 * i for i in range(8)]
    curves = {
        2: [_dp(p, 0.5, 2) for p in ps],  # flat junk curve, should be ignored
        4: [_dp(p, min(0.9, max(0.001, 3 * (p - 0.01) + 0.05)), 4) for p in ps],
        6: [_dp(p, min(0.9, max(0.001, 9 * (p - 0.01) + 0.05)), 6) for p in ps],
    }
    est = crossing_threshold(curves)
    assert abs(est.p_th - 0.01) < 2e-4


def test_no_crossing_identical_curves():
    ps = [0.01, 0.02, 0.03]
    curves = {
        4: [_dp(p, 0.1 + p, 4) for p in ps],
        6: [_dp(p, 0.2 + p, 6) for p in ps],
    }
    with pytest.raises(NoCrossing):
        crossing_threshold(curves)


def test_rescale_examples():
    assert rescale_threshold(0.3, 2) == pytest.approx(0.3, abs=1e-15)
    assert rescale_threshold(0.04, 16) == pytest.approx(1 - 0.96**0.25, abs=1e-12)
    assert abs(rescale_threshold(0.04, 16) - 0.010154) < 1e-5


def test_rescale_roundtrip():
    rng = np.random.default_rng(1)
    for _ in range(100):
        p = float(rng.uniform(0, 0.5))
        d = int(rng.integers(2, 64))
        assert forward_rescale(rescale_threshold(p, d), d) == pytest.approx(
            p, abs=1e-12
        )
    with pytest.raises(ValueError):
        rescale_threshold(0.1, 1)


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig("cube", (3,), (2,), (0.01,), (1,), 10, validator="matching")
    with pytest.raises(ValueError):
        RunConfig("cube", (2,), (2,), (0.01,), (1,), 0)
    with pytest.raises(ValueError):
        RunConfig("moebius", (2,), (2,), (0.01,), (1,), 10)


def test_sweep_deterministic_and_csv(tmp_path):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    base = dict(
        manifold="cube",
        ds=(2,),
        Ls=(2,),
        ps=(0.02, 0.04),
        ts=(1,),
        trials=200,
        validator="clustering",
        corrector="clustering",
        seed=5,
    )
    run_sweep(RunConfig(**base, out=str(out1)), workers=1)
    run_sweep(RunConfig(**base, out=str(out2)), workers=2)
    assert out1.read_bytes() == out2.read_bytes()
    points = read_csv(str(out1))
    assert len(points) == 2
    assert points[0].manifold == "cube"
    assert 0 <= points[0].ci_lo <= points[0].pfail <= points[0].ci_hi <= 1
    header = out1.read_text().splitlines()[0]
    assert header == (
        "manifold,d,L,p,t,validator,corrector,trials,failures,pfail,ci_lo,ci_hi,seed"
    )


def test_zero_noise_point(code_factory):
    cfg = RunConfig("t2xi", (3,), (2,), (0.0,), (2,), 50, seed=1)
    res = run_sweep(cfg, workers=1)
    assert res[0].failures == 0
    assert res[0].pfail == 0.0


def test_cli_roundtrip(tmp_path):
    from saqd.cli import main

    out = tmp_path / "cli.csv"
    rc = main(
        [
            "run",
            "--manifold",
            "cube",
            "--d",
            "2",
            "--L",
            "2",
            "--p",
            "0.01:0.02:0.01",
            "--t",
            "1",
            "--trials",
            "50",
            "--val",
            "clustering",
            "--corr",
            "clustering",
            "--seed",
            "3",
            "--out",
            str(out),
            "--quiet",
        ]
    )
    assert rc == 0
    assert len(read_csv(str(out))) == 2
    assert main(["verify", "--manifold", "torus3", "--L", "2", "--d", "2"]) == 0
    assert (
        main(["distance", "--manifold", "t2xi", "--L", "2", "--d", "2", "--cap", "2"])
        == 0
    )


def test_cli_config_file(tmp_path):
    from saqd.cli import main

    out = tmp_path / "cfg.csv"
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "manifold = cube\n"
        "d = 2\n"
        "L = 2\n"
        "p = 0.02\n"
        "t = 1\n"
        "trials = 30\n"
        "validator = clustering\n"
        "corrector = clustering\n"
        "seed = 9\n"
        f"out = {out}\n"
    )
    assert main(["run", "--config", str(cfg), "--quiet"]) == 0
    assert len(read_csv(str(out))) == 1


def test_cli_bad_config_exit_code():
    from saqd.cli import main

    rc = main(
        ["run", "--manifold", "cube", "--d", "3", "--L", "2", "--p", "0.01",
         "--t", "1", "--trials", "10", "--val", "matching", "--quiet"]
    )
    assert rc == 4

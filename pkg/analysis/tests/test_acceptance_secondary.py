"""Secondary acceptance: scaling fit vs crossing on a real Z2 sweep.

Generates the sweep through the simulator's CLI (the package's only
coupling is the CSV), so this test needs `saqd` installed and a few
minutes of Monte Carlo.
"""

import subprocess
import sys

import pytest

from saqd_analysis.fss import crossing_estimate, fss_fit
from saqd_analysis.io import read_results


@pytest.mark.acceptance
def test_fit_agrees_with_crossing_on_real_sweep(tmp_path):
    out = tmp_path / "sweep.csv"
    cmd = [
        sys.executable, "-m", "saqd.cli", "run",
        "--manifold", "cube", "--d", "2", "--L", "4,6,8",
        "--p", "0.0085:0.0125:0.001", "--t", "4", "--trials", "4000",
        "--val", "matching", "--corr", "matching",
        "--seed", "21", "--out", str(out), "--quiet",
    ]
    subprocess.run(cmd, check=True, timeout=3600)
    points = read_results(str(out))
    fit = fss_fit(points)
    p_cross, u_cross = crossing_estimate(points)
    gap = abs(fit.p_th - p_cross)
    budget = fit.uncertainty + u_cross
    print(
        f"[ACCEPT] secondary fss vs crossing: "
        f"fit {fit.p_th:.4%} +- {fit.uncertainty:.4%}, "
        f"crossing {p_cross:.4%} +- {u_cross:.4%}",
        file=sys.stderr,
    )
    assert gap <= budget, (fit.p_th, p_cross, gap, budget)

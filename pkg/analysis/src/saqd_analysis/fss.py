"""Finite-size-scaling fits and crossing estimates for threshold curves.

The universal-scaling ansatz is quadratic with a free scaling exponent:

    p_fail(p, L) ~ A + B x + C x^2,    x = (p - p_th) * L^(1/nu),

fit by weighted nonlinear least squares. Uncertainty on p_th is the
sample standard deviation of 100 parametric bootstrap refits, resampling
the binomial failure counts at the observed rates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .io import ResultPoint


@dataclass
class FssFit:
    p_th: float
    nu: float
    coefficients: tuple  # (A, B, C)
    uncertainty: float
    bootstrap: np.ndarray = field(repr=False)
    window: tuple = ()


class FitError(RuntimeError):
    """The scaling fit did not converge; diagnostics in the message."""


def _group_curves(points):
    curves: dict[int, list[ResultPoint]] = {}
    for pt in points:
        curves.setdefault(pt.L, []).append(pt)
    for L in curves:
        curves[L] = sorted(curves[L], key=lambda r: r.p)
    return curves


def _fit_once(ps, Ls, rates, sigmas, p0):
    def model(theta):
        p_th, nu, a, b, c = theta
        x = (ps - p_th) * Ls ** (1.0 / nu)
        return (a + b * x + c * x * x - rates) / sigmas

    lo = [ps.min(), 0.3, -1.0, -1e4, -1e6]
    hi = [ps.max(), 4.0, 2.0, 1e4, 1e6]
    p0 = np.clip(p0, lo, hi)
    res = least_squares(model, p0, bounds=(lo, hi), method="trf", max_nfev=20000)
    if not res.success:
        raise FitError(f"least squares failed: {res.message}")
    return res.x


def fss_fit(points, n_bootstrap: int = 100, seed: int = 0) -> FssFit:
    """Fit the scaling ansatz to failure-rate curves near a crossing."""
    curves = _group_curves(points)
    if len(curves) < 2:
        raise ValueError("need at least two system sizes for a scaling fit")
    ps = np.array([pt.p for pt in points])
    Ls = np.array([pt.L for pt in points], dtype=float)
    rates = np.array([pt.pfail for pt in points])
    trials = np.array([pt.trials for pt in points], dtype=float)
    sigmas = np.sqrt(np.clip(rates * (1 - rates), 1e-9, None) / trials)
    p0 = np.array(
        [
            float(np.median(ps)),
            1.0,
            float(np.mean(rates)),
            float((rates.max() - rates.min()) / max(ps.max() - ps.min(), 1e-9)),
            0.0,
        ]
    )
    theta = _fit_once(ps, Ls, rates, sigmas, p0)
    rng = np.random.default_rng(seed)
    boots = []
    for _ in range(n_bootstrap):
        resampled = rng.binomial(trials.astype(np.int64), np.clip(rates, 0, 1)) / trials
        sig = np.sqrt(np.clip(resampled * (1 - resampled), 1e-9, None) / trials)
        try:
            boots.append(_fit_once(ps, Ls, resampled, sig, theta)[0])
        except FitError:
            continue
    if len(boots) < n_bootstrap // 2:
        raise FitError(f"only {len(boots)}/{n_bootstrap} bootstrap refits converged")
    boots = np.array(boots)
    return FssFit(
        p_th=float(theta[0]),
        nu=float(theta[1]),
        coefficients=(float(theta[2]), float(theta[3]), float(theta[4])),
        uncertainty=float(boots.std(ddof=1)),
        bootstrap=boots,
        window=(float(ps.min()), float(ps.max())),
    )


def crossing_estimate(points):
    """Interpolated crossing of the two largest-L failure-rate curves.

    Returns (p_th, uncertainty); mirrors the simulator's crossing
    estimator so the two methods can be cross-checked on the same CSV.
    """
    curves = _group_curves(points)
    if len(curves) < 2:
        raise ValueError("need two system sizes")
    sizes = sorted(curves)[-2:]
    a, b = curves[sizes[0]], curves[sizes[1]]
    ps = np.array([r.p for r in a])
    if [r.p for r in b] != list(ps):
        raise ValueError("curves must share a p grid")
    fa = np.array([r.pfail for r in a])
    fb = np.array([r.pfail for r in b])
    ha = np.array([r.half_width for r in a])
    hb = np.array([r.half_width for r in b])
    diff = fb - fa
    crossings = []
    for i in range(len(ps) - 1):
        if diff[i] == 0.0:
            crossings.append((ps[i], i))
        elif diff[i] * diff[i + 1] < 0:
            frac = diff[i] / (diff[i] - diff[i + 1])
            crossings.append((ps[i] + frac * (ps[i + 1] - ps[i]), i))
    if diff[-1] == 0.0:
        crossings.append((ps[-1], len(ps) - 2))
    if not crossings:
        raise ValueError("curves do not cross inside the sweep")
    med = float(np.median(ps))
    p_th, cell = min(crossings, key=lambda c: abs(c[0] - med))
    slope = abs((diff[cell + 1] - diff[cell]) / (ps[cell + 1] - ps[cell]))
    sigma = math.hypot(np.interp(p_th, ps, ha), np.interp(p_th, ps, hb))
    unc = sigma / slope if slope > 0 else float(ps[cell + 1] - ps[cell])
    return float(p_th), float(unc)


def rescale_threshold(p_th: float, d: int) -> float:
    """Per-qubit rate whose log2(d)-qubit block error matches p_th."""
    if d < 2:
        raise ValueError("d must be >= 2")
    return 1.0 - (1.0 - p_th) ** (1.0 / math.log2(d))

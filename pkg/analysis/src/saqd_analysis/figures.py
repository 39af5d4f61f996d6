"""Publication-style figures from a results CSV.

Four panels mirroring the standard presentation: failure-rate curves
with confidence intervals at the smallest and largest cycle count, then
thresholds versus cycle count per local dimension, raw and rescaled.
A fixed style makes the output a pure function of the input bytes.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .fss import crossing_estimate, rescale_threshold
from .io import read_results

_STYLE = {
    "figure.figsize": (5.0, 3.4),
    "figure.dpi": 160,
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "savefig.bbox": "tight",
}

_MARKERS = ["o", "s", "^", "d", "v", "*"]


def _panel_curves(points, t, path):
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        sizes = sorted({pt.L for pt in points})
        for i, L in enumerate(sizes):
            rows = sorted((pt for pt in points if pt.L == L), key=lambda r: r.p)
            ps = [r.p for r in rows]
            fs = [r.pfail for r in rows]
            lo = [r.pfail - r.ci_lo for r in rows]
            hi = [r.ci_hi - r.pfail for r in rows]
            ax.errorbar(
                ps, fs, yerr=[lo, hi], marker=_MARKERS[i % len(_MARKERS)],
                ms=4, lw=1, capsize=2, label=f"L = {L}",
            )
        ax.set_xlabel("qudit and measurement error rate p")
        ax.set_ylabel("logical failure rate")
        ax.set_title(f"t = {t} QEC cycles")
        ax.legend()
        fig.savefig(path)
        plt.close(fig)


def _thresholds_by_dt(points):
    out = {}
    for d in sorted({pt.d for pt in points}):
        for t in sorted({pt.t for pt in points if pt.d == d}):
            group = [pt for pt in points if pt.d == d and pt.t == t]
            if len({pt.L for pt in group}) < 2:
                continue
            try:
                p_th, unc = crossing_estimate(group)
            except ValueError:
                continue
            out.setdefault(d, []).append((t, p_th, unc))
    return out


def _panel_thresholds(thresholds, path, rescaled=False):
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        for i, (d, rows) in enumerate(sorted(thresholds.items())):
            ts = [r[0] for r in rows]
            if rescaled:
                ys = [rescale_threshold(r[1], d) for r in rows]
                errs = [
                    abs(rescale_threshold(min(r[1] + r[2], 0.999), d)
                        - rescale_threshold(max(r[1] - r[2], 0.0), d)) / 2
                    for r in rows
                ]
            else:
                ys = [r[1] for r in rows]
                errs = [r[2] for r in rows]
            ax.errorbar(
                ts, ys, yerr=errs, marker=_MARKERS[i % len(_MARKERS)],
                ms=4, lw=1, capsize=2, label=f"d = {d}",
            )
        ax.set_xlabel("QEC cycles t")
        ax.set_ylabel("rescaled threshold p*" if rescaled else "threshold p_th")
        ax.legend()
        fig.savefig(path)
        plt.close(fig)


def render_figures(csv_path: str, outdir: str = ".") -> list:
    """Emit the four panels; returns the written file paths."""
    points = read_results(csv_path)
    os.makedirs(outdir, exist_ok=True)
    ts = sorted({pt.t for pt in points})
    written = []
    for tag, t in (("a", ts[0]), ("b", ts[-1])):
        path = os.path.join(outdir, f"panel_{tag}_pfail_t{t}.png")
        _panel_curves([pt for pt in points if pt.t == t], t, path)
        written.append(path)
    thresholds = _thresholds_by_dt(points)
    path_c = os.path.join(outdir, "panel_c_thresholds.png")
    _panel_thresholds(thresholds, path_c, rescaled=False)
    written.append(path_c)
    path_d = os.path.join(outdir, "panel_d_thresholds_rescaled.png")
    _panel_thresholds(thresholds, path_d, rescaled=True)
    written.append(path_d)
    return written

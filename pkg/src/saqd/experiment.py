"""Monte Carlo harness: sweeps, confidence intervals, threshold estimates.

Runs (manifold, d, L, p, t, decoder pair) grids with a worker pool,
counts logical failures with Agresti-Coull 95% confidence intervals,
estimates thresholds from curve crossings, and applies the qudit
rescaling that compares a Z_d qudit with log2(d) qubits.

Reproducibility: every trial draws from a Philox stream jumped by
(grid point index * trials + trial index) off the master seed, so
results are a pure function of (config, seed) under any scheduling.
Worker results are integer failure counts, summed order-independently.
"""

from __future__ import annotations

import math
import multiprocessing as mp
import os
import sys
from dataclasses import dataclass, field, replace

import numpy as np

from .channel import NoiseParams, TrialEngine, trial_rng
from .code import build_code
from .lattice import Manifold

CSV_COLUMNS = [
    "manifold",
    "d",
    "L",
    "p",
    "t",
    "validator",
    "corrector",
    "trials",
    "failures",
    "pfail",
    "ci_lo",
    "ci_hi",
    "seed",
]

Z_95 = 1.96  # fixed publication default; configurable only via config file


class NoCrossing(RuntimeError):
    """The failure-rate curves never intersect inside the swept grid."""


@dataclass(frozen=True)
class RunConfig:
    manifold: str
    ds: tuple
    Ls: tuple
    ps: tuple
    ts: tuple
    trials: int
    validator: str = "clustering"
    corrector: str = "clustering"
    seed: int = 0
    out: str | None = None
    z: float = Z_95

    def __post_init__(self):
        if self.manifold not in Manifold.KINDS:
            raise ValueError(f"unknown manifold {self.manifold!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        for dec in (self.validator, self.corrector):
            if dec not in ("clustering", "matching"):
                raise ValueError(f"unknown decoder {dec!r}")
        if "matching" in (self.validator, self.corrector) and any(
            d != 2 for d in self.ds
        ):
            raise ValueError("matching decoders are only defined for d = 2")

    def grid(self):
        pts = []
        for d in self.ds:
            for L in self.Ls:
                for t in self.ts:
                    for p in self.ps:
                        pts.append((len(pts), d, L, float(p), t))
        return pts


@dataclass
class DataPoint:
    manifold: str
    d: int
    L: int
    p: float
    t: int
    validator: str
    corrector: str
    trials: int
    failures: int
    seed: int
    z: float = Z_95
    pfail: float = field(init=False)
    ci_lo: float = field(init=False)
    ci_hi: float = field(init=False)

    def __post_init__(self):
        self.pfail = self.failures / self.trials
        self.ci_lo, self.ci_hi = agresti_coull(self.failures, self.trials, self.z)

    def csv_row(self) -> str:
        vals = [
            self.manifold,
            self.d,
            self.L,
            f"{self.p:.10g}",
            self.t,
            self.validator,
            self.corrector,
            self.trials,
            self.failures,
            f"{self.pfail:.10g}",
            f"{self.ci_lo:.10g}",
            f"{self.ci_hi:.10g}",
            self.seed,
        ]
        return ",".join(str(v) for v in vals)


@dataclass
class ThresholdEstimate:
    p_th: float
    uncertainty: float
    method: str  # crossing | fss-fit
    inputs: object = None


def agresti_coull(failures: int, trials: int, z: float = Z_95):
    """95% Agresti-Coull interval, clamped to [0, 1]."""
    n_t = trials + z * z
    p_t = (failures + z * z / 2.0) / n_t
    half = z * math.sqrt(p_t * (1.0 - p_t) / n_t)
    return max(0.0, p_t - half), min(1.0, p_t + half)


# ---------------------------------------------------------------------------
# worker pool
# ---------------------------------------------------------------------------

_WORKER_CACHE: dict = {}


def _engine_for(manifold, L, d, validator, corrector) -> TrialEngine:
    key = (manifold, L, d, validator, corrector)
    if key not in _WORKER_CACHE:
        code = build_code(Manifold(manifold, L), d)
        _WORKER_CACHE[key] = TrialEngine(code, validator, corrector)
    return _WORKER_CACHE[key]


def _run_chunk(args):
    (manifold, d, L, p, t, validator, corrector, seed, stream0, count) = args
    engine = _engine_for(manifold, L, d, validator, corrector)
    noise = NoiseParams(p, t)
    failures = 0
    for i in range(count):
        rng = trial_rng(seed, stream0 + i)
        failures += engine.run_trial(noise, rng)
    return failures


def max_workers() -> int:
    env = os.environ.get("SAQD_THREADS")
    if env:
        return max(1, int(env))
    return max(1, mp.cpu_count())


def estimate_pfail(
    config: RunConfig, d, L, p, t, point_index, pool=None, chunk=500
) -> DataPoint:
    """Monte Carlo failure estimate for one grid point."""
    streams = [
        (point_index * config.trials + s, min(chunk, config.trials - s))
        for s in range(0, config.trials, chunk)
    ]
    tasks = [
        (
            config.manifold,
            d,
            L,
            p,
            t,
            config.validator,
            config.corrector,
            config.seed,
            s0,
            cnt,
        )
        for s0, cnt in streams
    ]
    if pool is None:
        results = [_run_chunk(task) for task in tasks]
    else:
        results = pool.map(_run_chunk, tasks)
    failures = int(sum(results))
    return DataPoint(
        manifold=config.manifold,
        d=d,
        L=L,
        p=p,
        t=t,
        validator=config.validator,
        corrector=config.corrector,
        trials=config.trials,
        failures=failures,
        seed=config.seed,
        z=config.z,
    )


def run_sweep(config: RunConfig, workers: int | None = None, progress=False):
    """Run the full grid; returns the DataPoints and writes the CSV.

    Deterministic under any worker count: per-trial streams are indexed
    by the grid enumeration, and only integer failure counts cross
    process boundaries.  Partial results are flushed after every point.
    """
    if workers is None:
        workers = max_workers()
    points = config.grid()
    out_handle = None
    if config.out:
        out_handle = open(config.out, "w")
        out_handle.write(",".join(CSV_COLUMNS) + "\n")
        out_handle.flush()
    results = []
    pool = None
    try:
        if workers > 1:
            pool = mp.get_context("fork").Pool(workers)
        for idx, d, L, p, t in points:
            dp = estimate_pfail(config, d, L, p, t, idx, pool=pool)
            results.append(dp)
            if progress:
                print(
                    f"[{idx + 1}/{len(points)}] d={d} L={L} p={p:.6g} t={t}: "
                    f"pfail={dp.pfail:.5f} ({dp.failures}/{dp.trials})",
                    file=sys.stderr,
                    flush=True,
                )
            if out_handle:
                out_handle.write(dp.csv_row() + "\n")
                out_handle.flush()
    finally:
        if pool is not None:
            pool.close()
            pool.join()
        if out_handle:
            out_handle.close()
    return results


def read_csv(path: str):
    """Read a results CSV back into DataPoints."""
    points = []
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        if header != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV schema: {header}")
        for line in fh:
            parts = line.strip().split(",")
            if not parts or parts == [""]:
                continue
            rec = dict(zip(CSV_COLUMNS, parts))
            points.append(
                DataPoint(
                    manifold=rec["manifold"],
                    d=int(rec["d"]),
                    L=int(rec["L"]),
                    p=float(rec["p"]),
                    t=int(rec["t"]),
                    validator=rec["validator"],
                    corrector=rec["corrector"],
                    trials=int(rec["trials"]),
                    failures=int(rec["failures"]),
                    seed=int(rec["seed"]),
                )
            )
    return points


# ---------------------------------------------------------------------------
# thresholds
# ---------------------------------------------------------------------------


def crossing_threshold(curves: dict) -> ThresholdEstimate:
    """Crossing of the failure-rate curves for the two largest L.

    Curves are {L: [DataPoint...]} on a shared p grid.  Piecewise-linear
    interpolation; with several grid-cell crossings the one closest to
    the median swept p wins.  The uncertainty propagates the confidence
    half-widths through the interpolated difference slope.
    """
    if len(curves) < 2:
        raise ValueError("need curves for at least two system sizes")
    sizes = sorted(curves)[-2:]
    a = sorted(curves[sizes[0]], key=lambda dp: dp.p)
    b = sorted(curves[sizes[1]], key=lambda dp: dp.p)
    ps_a = [dp.p for dp in a]
    ps_b = [dp.p for dp in b]
    if len(ps_a) < 2 or ps_a != ps_b:
        raise ValueError("curves must share a p grid with >= 2 points")
    ps = np.array(ps_a)
    fa = np.array([dp.pfail for dp in a])
    fb = np.array([dp.pfail for dp in b])
    ha = np.array([(dp.ci_hi - dp.ci_lo) / 2 for dp in a])
    hb = np.array([(dp.ci_hi - dp.ci_lo) / 2 for dp in b])
    diff = fb - fa
    crossings = []
    for i in range(len(ps) - 1):
        d0, d1 = diff[i], diff[i + 1]
        if d0 == d1 == 0.0:
            continue
        if d0 == 0.0:
            crossings.append((ps[i], i))
            continue
        if d0 * d1 < 0:
            frac = d0 / (d0 - d1)
            crossings.append((ps[i] + frac * (ps[i + 1] - ps[i]), i))
    if diff[-1] == 0.0:
        crossings.append((ps[-1], len(ps) - 2))
    if not crossings:
        raise NoCrossing("failure-rate curves do not intersect in the grid")
    median_p = float(np.median(ps))
    p_th, cell = min(crossings, key=lambda c: abs(c[0] - median_p))
    dp_cell = ps[cell + 1] - ps[cell]
    slope = abs((diff[cell + 1] - diff[cell]) / dp_cell)
    sigma_f = math.sqrt(
        np.interp(p_th, ps, ha) ** 2 + np.interp(p_th, ps, hb) ** 2
    )
    uncertainty = sigma_f / slope if slope > 0 else float(dp_cell)
    return ThresholdEstimate(
        p_th=float(p_th),
        uncertainty=float(uncertainty),
        method="crossing",
        inputs=tuple(sizes),
    )


def forward_rescale(p_star: float, d: int) -> float:
    """Error rate of a Z_d qudit equivalent to log2(d) qubits at p_star."""
    if d < 2:
        raise ValueError("d must be >= 2")
    return 1.0 - (1.0 - p_star) ** math.log2(d)


def rescale_threshold(p_th: float, d: int) -> float:
    """Inverse map: per-qubit rate whose log2(d)-qubit block matches p_th."""
    if d < 2:
        raise ValueError("d must be >= 2")
    if not 0.0 <= p_th < 1.0:
        raise ValueError("p_th must lie in [0, 1)")
    return 1.0 - (1.0 - p_th) ** (1.0 / math.log2(d))

"""Phenomenological noise and the single-shot QEC cycle.

One trial runs t cycles of {random Z-gauge application, i.i.d. qudit
Z errors, X-flux measurement, measurement corruption, two-stage
decoding, correction}, followed by one ideal readout cycle (no new
errors, no measurement noise), and then adjudicates logical failure:
the residual -- which at that point has trivial stabilizer syndrome --
is a failure iff it anticommutes with some bare logical X.

Only Z-type errors are simulated; the codes are CSS, so X decoding is
an independent, symmetric problem.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .checks import (
    build_correction_checks,
    build_flux_to_syndrome,
    build_syndrome_graph,
    build_validation_checks,
)
from .cluster import cluster_decode
from .code import SubsystemCode
from .matching import mwpm_decode


class DecoderContractError(RuntimeError):
    """A decoder or adjudication contract was violated."""


@dataclass(frozen=True)
class NoiseParams:
    """Single error probability driving both qudit and measurement noise."""

    p: float
    t: int
    p_meas: float | None = None  # optional override; defaults to p

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must be in [0, 1], got {self.p}")
        if self.t < 0:
            raise ValueError("cycle count must be nonnegative")

    @property
    def measurement_p(self) -> float:
        return self.p if self.p_meas is None else self.p_meas


@dataclass
class TrialState:
    """Accumulated Z-exponent residual (errors x gauge x corrections)."""

    residual: np.ndarray
    log: list | None = None


def sample_z_error(n: int, p: float, d: int, rng: np.random.Generator) -> np.ndarray:
    """I.i.d. qudit channel: with probability p apply Z^j, j uniform in 1..d-1."""
    out = np.zeros(n, dtype=np.int64)
    if p <= 0.0:
        return out
    mask = rng.random(n) < p
    k = int(mask.sum())
    if k:
        out[mask] = rng.integers(1, d, size=k)
    return out


def corrupt_measurements(
    flux: np.ndarray, p: float, d: int, rng: np.random.Generator
) -> np.ndarray:
    """Replace each outcome, with probability p, by a uniformly wrong value."""
    if p <= 0.0:
        return flux.copy()
    out = flux.copy()
    mask = rng.random(len(flux)) < p
    k = int(mask.sum())
    if k:
        out[mask] = (out[mask] + rng.integers(1, d, size=k)) % d
    return out


class TrialEngine:
    """Precomputed matrices and decoders for Monte Carlo trials on a code."""

    def __init__(self, code: SubsystemCode, validator="clustering", corrector="clustering"):
        if "matching" in (validator, corrector) and code.d != 2:
            raise ValueError("matching decoders require d = 2")
        self.code = code
        self.d = code.d
        self.n = code.n
        self.validator = validator
        self.corrector = corrector
        # flux measurement: one row per X-type gauge term
        rows, cols, vals = [], [], []
        for i, t in enumerate(code.x_terms):
            for q, v in t.exps.items():
                rows.append(i)
                cols.append(q)
                vals.append(v)
        self.h_flux = sp.csr_matrix(
            (np.array(vals, dtype=np.int64), (rows, cols)),
            shape=(len(code.x_terms), code.n),
        )
        # uniform Z-gauge sampling: transpose of the Z-term exponent matrix
        rows, cols, vals = [], [], []
        for i, t in enumerate(code.z_terms):
            for q, v in t.exps.items():
                rows.append(q)
                cols.append(i)
                vals.append(v)
        self.az_t = sp.csr_matrix(
            (np.array(vals, dtype=np.int64), (rows, cols)),
            shape=(code.n, len(code.z_terms)),
        )
        self.h1 = build_validation_checks(code)
        self.h1_mat = self.h1.matrix()
        self.g1 = build_syndrome_graph(self.h1)
        self.h2 = build_correction_checks(code)
        self.h2_mat = self.h2.matrix()
        self.g2 = build_syndrome_graph(self.h2)
        self.flux2syn = build_flux_to_syndrome(code)
        k = len(code.logical_pairs)
        bare = np.zeros((k, code.n), dtype=np.int64)
        for i, pair in enumerate(code.logical_pairs):
            for q, v in pair.bare_x.items():
                bare[i, q] = v
        self.bare_x = bare
        self._dec1 = self._decoder(validator, self.g1)
        self._dec2 = self._decoder(corrector, self.g2)

    def _decoder(self, name, graph):
        if name == "clustering":
            return lambda syn: cluster_decode(graph, syn, self.d)
        if name == "matching":
            return lambda syn: mwpm_decode(graph, syn)
        raise ValueError(f"unknown decoder {name!r}")

    # -- single operations -------------------------------------------------

    def random_z_gauge(self, rng: np.random.Generator) -> np.ndarray:
        """Uniform element of the Z-type gauge group (exponent vector)."""
        u = rng.integers(0, self.d, size=self.az_t.shape[1])
        return np.asarray(self.az_t @ u) % self.d

    def measure_flux(self, residual: np.ndarray) -> np.ndarray:
        return np.asarray(self.h_flux @ residual) % self.d

    def two_stage_decode(self, noisy_flux: np.ndarray, check=False) -> np.ndarray:
        """Flux validation then qudit correction; returns the Z correction."""
        sigma1 = np.asarray(self.h1_mat @ noisy_flux) % self.d
        y1 = self._dec1(sigma1)
        if check and np.any((self.h1_mat @ y1 - sigma1) % self.d):
            raise DecoderContractError("validation decoder missed its syndrome")
        flux_corr = (noisy_flux - y1) % self.d
        if check and np.any((self.h1_mat @ flux_corr) % self.d):
            raise DecoderContractError("corrected flux violates the local relations")
        sigma2 = np.asarray(self.flux2syn @ flux_corr) % self.d
        y2 = self._dec2(sigma2)
        if check and np.any((self.h2_mat @ y2 - sigma2) % self.d):
            raise DecoderContractError("correction decoder missed its syndrome")
        return y2

    def logical_failure(self, residual: np.ndarray) -> bool:
        """Failure adjudication; requires a trivial stabilizer syndrome."""
        if np.any((self.h2_mat @ residual) % self.d):
            raise DecoderContractError(
                "nonzero stabilizer syndrome at adjudication time"
            )
        if self.bare_x.size == 0:
            return False
        return bool(np.any((self.bare_x @ residual) % self.d))

    # -- full trial ---------------------------------------------------------

    def run_trial(self, noise: NoiseParams, rng: np.random.Generator, check=False) -> bool:
        """One QEC history: t noisy cycles, one ideal cycle, adjudication."""
        d = self.d
        residual = np.zeros(self.n, dtype=np.int64)
        for _ in range(noise.t):
            residual = (residual + self.random_z_gauge(rng)) % d
            residual = (residual + sample_z_error(self.n, noise.p, d, rng)) % d
            flux = self.measure_flux(residual)
            flux = corrupt_measurements(flux, noise.measurement_p, d, rng)
            correction = self.two_stage_decode(flux, check=check)
            residual = (residual - correction) % d
        # ideal readout round
        residual = (residual + self.random_z_gauge(rng)) % d
        flux = self.measure_flux(residual)
        correction = self.two_stage_decode(flux, check=check)
        residual = (residual - correction) % d
        return self.logical_failure(residual)


def run_trial(code, noise: NoiseParams, decoder_config, rng) -> bool:
    """Convenience wrapper building a one-off engine (tests, small runs)."""
    validator, corrector = decoder_config
    return TrialEngine(code, validator, corrector).run_trial(noise, rng)


def trial_rng(master_seed: int, stream: int) -> np.random.Generator:
    """Per-trial RNG: Philox keyed by the master seed, jumped per stream.

    Streams never overlap regardless of worker scheduling, so results
    are a pure function of (config, seed).
    """
    return np.random.Generator(np.random.Philox(key=np.uint64(master_seed)).jumped(stream))

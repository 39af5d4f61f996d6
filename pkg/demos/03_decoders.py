"""Watch the two decoders fix the same error history.

A burst of qudit errors plus measurement noise is decoded once with the
Z_d clustering decoder and once (d = 2) with exact minimum-weight
matching; both satisfy their syndromes exactly, matching returns the
lighter correction.
"""

import numpy as np

from saqd import Manifold, TrialEngine, build_code
from saqd.channel import corrupt_measurements, sample_z_error
from saqd.cluster import cluster_decode
from saqd.matching import mwpm_decode

rng = np.random.default_rng(11)
code = build_code(Manifold.cube(4), d=2)
engine = TrialEngine(code, "matching", "matching")

residual = sample_z_error(code.n, 0.01, 2, rng)
flux = corrupt_measurements(engine.measure_flux(residual), 0.01, 2, rng)
sigma1 = np.asarray(engine.h1_mat @ flux) % 2

for name, decode in (("clustering", cluster_decode), ("matching", mwpm_decode)):
    y1 = decode(engine.g1, sigma1) if name == "matching" else decode(engine.g1, sigma1, 2)
    ok = not ((engine.h1_mat @ y1 - sigma1) % 2).any()
    print(f"{name:>10}: flux correction weight {int(np.count_nonzero(y1)):>3}, "
          f"syndrome satisfied: {ok}")

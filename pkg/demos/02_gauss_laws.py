"""The gauge-flux Gauss laws that make single-shot correction possible.

Measuring every X-type gauge operator on a physical state gives random
outcomes, but they satisfy exact local relations: zero net flux at every
sphere, and matching green/yellow flux through every volume. Measurement
errors break the relations, so the violations locate them.
"""

import numpy as np

from saqd import Manifold, NoiseParams, TrialEngine, build_code
from saqd.channel import corrupt_measurements, sample_z_error

rng = np.random.default_rng(7)
code = build_code(Manifold.cube(2), d=3)
engine = TrialEngine(code)

residual = (engine.random_z_gauge(rng) + sample_z_error(code.n, 0.2, 3, rng)) % 3
flux = engine.measure_flux(residual)
print("random physical state:")
print("  flux outcomes nonzero on", np.count_nonzero(flux), "of", len(flux), "faces")
print("  validation syndrome weight:", np.count_nonzero(engine.h1_mat @ flux % 3), "(always 0)")

noisy = corrupt_measurements(flux, 0.1, 3, rng)
syndrome = np.asarray(engine.h1_mat @ noisy) % 3
print("after 10% measurement corruption:")
print("  validation syndrome weight:", np.count_nonzero(syndrome))

correction = engine.two_stage_decode(noisy)
print("two-stage decode returns a qudit correction of weight",
      int(np.count_nonzero(correction)))

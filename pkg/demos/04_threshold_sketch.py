"""A miniature threshold estimate (a few minutes on a laptop).

Sweeps the error rate for two cube sizes with 2000 trials per point and
reports where the failure-rate curves cross. Scale trials and sizes up
(L in {4, 6, 8}, 2e4 trials) to reproduce publication-grade numbers.
"""

from saqd import RunConfig, crossing_threshold, run_sweep

config = RunConfig(
    manifold="cube", ds=(2,), Ls=(4, 6),
    ps=tuple(0.008 + 0.001 * i for i in range(6)),
    ts=(4,), trials=2000,
    validator="matching", corrector="matching", seed=7,
)
curves = {}
for point in run_sweep(config, progress=True):
    curves.setdefault(point.L, []).append(point)
estimate = crossing_threshold(curves)
print(f"matching/matching crossing: {estimate.p_th:.3%} +- {estimate.uncertainty:.3%}")

"""A miniature Monte Carlo study across the three network families.

Each replication draws a new network, truth and noise from its own seed
stream, so the numbers below are reproducible and independent of the
number of worker processes.  Sizes are kept small to run in seconds; the
acceptance suite runs the full-size versions.
"""

from snirkit.simlab import TruthPlan, preset, run_study

plan = TruthPlan(size=5)
print(f"{'network':<10} {'N':>5} {'TPR':>6} {'FPR':>7} {'CFP':>5} {'Err':>6} {'s/fit':>6}")
for kind, n in (("er", 2000), ("sbm", 1000), ("powerlaw", 2000)):
    res = run_study(preset(kind, n), plan, reps=10, seed=3)
    m = res.metrics
    print(f"{kind:<10} {n:5d} {m.tpr:6.3f} {m.fpr:7.4f} {m.cfp:5.2f} {m.err:6.3f} {res.secs_per_fit:6.3f}")

# Heteroskedastic noise with three profiled covariates.
res = run_study(preset("sbm", 1000), TruthPlan(size=5, hetero=(0.5, 1.5), covariates=3),
                reps=10, seed=3)
print(f"\nheteroskedastic + covariates: TPR {res.metrics.tpr:.3f}  CFP {res.metrics.cfp:.2f}")

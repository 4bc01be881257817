"""How much of a planted-partition instance the engine fixes as the noise grows.

Run:  python demos/partition_sweep.py [reps]
"""

import sys

from cubic_persistency.experiments import ExperimentSpec, run_experiment

reps = int(sys.argv[1]) if len(sys.argv) > 1 else 5
spec = ExperimentSpec("partition", "alpha", [0.0, 0.2, 0.4, 0.6, 0.8], reps=reps, n=2)

print(f"{'alpha':>6} {'edges fixed':>12} {'triples fixed':>14} {'seconds':>8}")
for row in run_experiment(spec):
    print(f"{row['alpha']:6.2f} {row['medianEliminatedVariables']:12.3f} "
          f"{row['medianEliminatedTriangles']:14.3f} {row['medianDuration'] / 1e9:8.3f}")

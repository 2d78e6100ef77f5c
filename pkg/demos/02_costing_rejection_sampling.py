#!/usr/bin/env python3
"""Turn importance-weighted classification into plain classification.

Rejection sampling accepts each example with probability weight/normalizer.
The accepted set is unweighted, yet minimizing plain error on it minimizes
the weighted error on the original distribution.  The identity below is the
bookkeeping that makes this work: error on the induced distribution times the
mean importance equals the importance-weighted loss.
"""

import numpy as np

from offsettree.costing import (CostingConfig, acceptance_masks,
                                induced_distribution, weighted_error)

rng = np.random.default_rng(1)

# Weighted atoms: (mass, point, label, weight).  Points 0..4, random labels,
# weights spread over an order of magnitude.
points = np.arange(5)
masses = rng.dirichlet(np.ones(5))
weights = rng.uniform(0.2, 2.5, size=5).round(2)
labels = rng.choice([-1, 1], size=5)
atoms = [(float(m), int(p), int(s), float(w))
         for m, p, s, w in zip(masses, points, labels, weights)]
for m, p, s, w in atoms:
    print(f"point {p}: mass {m:.3f}, label {s:+d}, weight {w}")

# The identity, on an arbitrary classifier.
classify = lambda p: 1 if p % 2 == 0 else -1
Q = induced_distribution(atoms)
lhs = Q.error_rate(classify) * Q.expected_importance
rhs = weighted_error(classify, atoms)
print(f"\nerror on induced Q * mean importance = {lhs:.10f}")
print(f"importance-weighted loss             = {rhs:.10f}")

# Acceptance frequencies track weight / normalizer (the max weight here).
cfg = CostingConfig(draws=200_000, rng_seed=7)
freq = np.array(acceptance_masks(weights, cfg)).mean(axis=0)
print("\nweight  target  accepted")
for w, f in zip(weights, freq):
    print(f"{w:6.2f}  {w / weights.max():6.3f}  {f:8.3f}")

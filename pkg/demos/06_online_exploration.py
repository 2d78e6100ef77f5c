#!/usr/bin/env python3
"""Epoch-greedy exploration: learn a policy while serving traffic.

At step t the agent explores with probability t^(-1/3) (the agnostic rate)
or t^(-1/2) (the realizable rate), logging only explored steps, and refits
the offset tree from that buffer every 150 steps.  Early on it guesses; as
the schedule decays it mostly plays the learned policy, so the running error
falls toward the exploration floor.
"""

import numpy as np

from offsettree.dataio import MulticlassDataset
from offsettree.harness import ExplorationSchedule, run_online_epoch_greedy

rng = np.random.default_rng(0)
n, k = 3000, 4
labels = rng.integers(1, k + 1, size=n)
xs = np.zeros((n, k))
xs[np.arange(n), labels - 1] = 1.0
stream = MulticlassDataset(xs, labels, k)

print("exploration probability along the two schedules:")
for t in (1, 10, 100, 1000):
    ag = ExplorationSchedule("agnostic")(t)
    re = ExplorationSchedule("realizable")(t)
    print(f"  t={t:>4}: agnostic {ag:.3f}, realizable {re:.3f}")

# A perfectly learnable stream (one-hot features name the best action), so
# whatever error remains is the price of exploring.
print(f"\nrunning error over {n} steps (k={k}, chance 0.75):")
for mode in ("agnostic", "realizable"):
    result = run_online_epoch_greedy(stream, ExplorationSchedule(mode),
                                     method="offset-tree", seed=0,
                                     retrain_every=150)
    marks = "  ".join(f"@{t}: {result.running_error[t - 1]:.3f}"
                      for t in (150, 600, 1500, n))
    print(f"  {mode:>10}: {marks}  (explored {result.n_explore})")

print("\nthe realizable schedule explores less and finishes lower here; its")
print("faster decay is only justified when the policy class can actually")
print("represent the best policy, as it can on this stream.")

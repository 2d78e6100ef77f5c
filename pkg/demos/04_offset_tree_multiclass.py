#!/usr/bin/env python3
"""Train an offset tree over k actions and inspect what it builds.

Actions sit at the leaves of a balanced binary tree; each internal node
learns a binary preference between its two subtrees from filtered, reweighted
log rows.  Prediction walks root to leaf, so choosing among k actions costs
ceil(log2 k) classifier calls, and the whole model serializes to JSON.
"""

import json
import math

import numpy as np

from offsettree.core import best_value, policy_value
from offsettree.costing import CostingConfig
from offsettree.harness import exhaustive_log, lower_bound_problem
from offsettree.learners import make_binary_learner
from offsettree.offset_tree import (build_tree, max_queries,
                                    node_example_counts, train_offset_tree)
from offsettree.serialize import model_from_json, model_to_json

k = 8
tree = build_tree(k)
print(f"k={k}: {len(tree.nodes)} internal nodes, "
      f"{max_queries(k)} queries per prediction")
for v in tree.nodes:
    print(f"  node {v.index} at depth {v.depth}: "
          f"{sorted(v.left_actions)} vs {sorted(v.right_actions)}")

# One context per action, paying 1 only on its own action.  An exhaustive
# uniform log plus a lookup-table learner recovers the best policy exactly.
problem = lower_bound_problem(k)
log = exhaustive_log(problem)
model = train_offset_tree(log, make_binary_learner("table"),
                          CostingConfig(rng_seed=0))
print(f"\ntrained on {len(log)} logged rows: value "
      f"{policy_value(model, problem):.3f} of best {best_value(problem):.3f}")

# Each log row reaches at most ceil(log2 k) nodes during training.
counts = node_example_counts(model, log)
print(f"node examples per log row: max {max(counts)} "
      f"(ceiling is {math.ceil(math.log2(k))})")

# Prediction cost: count classifier calls along the root-to-leaf walk.
calls = [0]


class Counting:
    def __init__(self, inner):
        self.inner = inner

    def __call__(self, x):
        calls[0] += 1
        return self.inner(x)


wrapped = model.__class__(tree, {i: Counting(c) for i, c in
                                 model.node_classifiers.items()})
for ctx in problem.contexts:
    wrapped(ctx.x)
print(f"classifier calls for {k} predictions: {calls[0]} "
      f"({calls[0] // k} each)")

# Round trip through the JSON container.
text = model_to_json(model)
restored = model_from_json(text)
agree = all(restored(ctx.x) == model(ctx.x) for ctx in problem.contexts)
print(f"\nserialized to {len(text)} bytes of JSON "
      f"(format {json.loads(text)['format']!r}); "
      f"restored model agrees on every context: {agree}")

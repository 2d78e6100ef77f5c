"""Baseline reductions: reward regression and importance-weighted all-pairs.

The regression baseline fits expected reward as a function of (x, action) and
acts greedily; its policy regret is bounded by sqrt(2k * squared-error
regret), with a matching adversarial case where the regressor hedges two
actions at their midpoint.  The all-pairs baseline converts the log into an
importance-weighted multiclass problem (weight r_a / p(a)), resamples it with
costing, trains one classifier per action pair, and predicts by pairwise
vote.  Both spend O(k) or O(k^2) work per decision where the offset tree
spends O(log k); they are here for the comparisons, not as recommendations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import PartialLabelExample, as_features
from .costing import CostingConfig, MajorityVoteClassifier, rejection_sample
from .learners import ConstantClassifier, ConstantRegressor


def encode_action(x, action: int, k: int) -> np.ndarray:
    """Feature vector for a (context, action) pair: x with a one-hot tail."""
    tail = [0.0] * k
    tail[action - 1] = 1.0
    return as_features([float(v) for v in x] + tail)


@dataclass(frozen=True, eq=False)
class RegressionModel:
    """Greedy policy over fitted per-action reward estimates.

    mode "per-action" keeps k separate regressors; mode "single" keeps one
    regressor over one-hot-encoded (x, action) pairs.
    """

    k: int
    mode: str
    regressors: tuple
    n_features: int | None = None

    def predicted_rewards(self, x) -> np.ndarray:
        if self.mode == "per-action":
            return np.array([float(f(x)) for f in self.regressors])
        return np.array([float(self.regressors[0](encode_action(x, a, self.k)))
                         for a in range(1, self.k + 1)])

    def predict(self, x) -> int:
        """Argmax of predicted reward; ties go to the smallest action."""
        return int(np.argmax(self.predicted_rewards(x))) + 1

    def __call__(self, x) -> int:
        return self.predict(x)


def train_regression(examples: Sequence[PartialLabelExample], regressor: Callable,
                     mode: str = "per-action") -> RegressionModel:
    """Fit observed rewards against (x, action); no importance weighting.

    Actions never observed in the log fall back to a constant-0 regressor in
    per-action mode, keeping the argmax well defined.
    """
    if mode not in ("per-action", "single"):
        raise ValueError(f"mode must be 'per-action' or 'single', got {mode!r}")
    if not examples:
        raise ValueError("cannot train on an empty dataset")
    k = examples[0].k
    if any(e.k != k for e in examples):
        raise ValueError("all examples must agree on k")
    n_features = len(examples[0].x)
    if mode == "per-action":
        fitted = []
        for a in range(1, k + 1):
            pairs = [(e.x, e.reward) for e in examples if e.action == a]
            fitted.append(regressor(pairs) if pairs else ConstantRegressor(0.0))
        return RegressionModel(k, mode, tuple(fitted), n_features)
    pairs = [(encode_action(e.x, e.action, k), e.reward) for e in examples]
    return RegressionModel(k, mode, (regressor(pairs),), n_features)


def argmax_policy(model: RegressionModel, x) -> int:
    """Greedy action under the fitted reward model (ties to smallest index)."""
    return model.predict(x)


def pair_index(i: int, j: int, k: int) -> int:
    """Rank of the ordered pair (i, j), i < j, in lexicographic order."""
    if not (1 <= i < j <= k):
        raise ValueError(f"need 1 <= i < j <= k, got ({i}, {j}) with k={k}")
    return (i - 1) * k - (i - 1) * i // 2 + (j - i) - 1


@dataclass(frozen=True, eq=False)
class AllPairsModel:
    """One classifier per action pair; prediction is the pairwise vote.

    The classifier for pair (i, j), i < j, answers +1 for i.  The action with
    the most wins is chosen; vote ties go to the smallest action index.
    """

    k: int
    pair_classifiers: dict
    n_features: int | None = None

    def predict(self, x) -> int:
        wins = np.zeros(self.k)
        for (i, j), c in self.pair_classifiers.items():
            winner = i if int(c(x)) == 1 else j
            wins[winner - 1] += 1
        return int(np.argmax(wins)) + 1

    def __call__(self, x) -> int:
        return self.predict(x)


def allpairs_predict(model: AllPairsModel, x) -> int:
    """Action winning the most pairwise comparisons (ties to smallest index)."""
    return model.predict(x)


@dataclass(frozen=True, eq=False)
class _WeightedMulticlass:
    x: np.ndarray
    label: int
    weight: float


def train_iwc(examples: Sequence[PartialLabelExample], learner: Callable,
              cfg: CostingConfig = CostingConfig()) -> AllPairsModel:
    """Importance-weighted multiclass classification via all-pairs.

    Each interaction becomes the multiclass example (x, a) with weight
    r_a / p(a); costing resamples those into unweighted multiclass sets.  For
    every pair (i, j) the examples labeled i or j train a binary classifier
    (+1 for i); with several costing draws the per-pair classifiers vote,
    ties toward the smaller index.  Pairs with no data fall back to a
    constant preference for the smaller index.
    """
    if not examples:
        raise ValueError("cannot train on an empty dataset")
    k = examples[0].k
    if any(e.k != k for e in examples):
        raise ValueError("all examples must agree on k")
    weighted = [_WeightedMulticlass(e.x, e.action, e.reward / e.propensity(e.action))
                for e in examples]
    draws = rejection_sample(weighted, cfg, seed_entropy=(cfg.rng_seed,))
    pair_classifiers: dict[tuple[int, int], Callable] = {}
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            members = []
            for drawn in draws:
                subset = [(x, 1 if label == i else -1)
                          for x, label in drawn if label in (i, j)]
                members.append(learner(subset) if subset else ConstantClassifier(1))
            if cfg.draws == 1:
                pair_classifiers[(i, j)] = members[0]
            else:
                pair_classifiers[(i, j)] = MajorityVoteClassifier(tuple(members))
    return AllPairsModel(k, pair_classifiers, len(examples[0].x))

"""Two-action reduction: partial feedback to one binary classification.

Actions 1 and 2 are mapped to the signs +1 and -1 (label +1 means "prefer
action 1").  A logged interaction (x, a, r, p) becomes the importance-weighted
binary example

    (x,  sign(a_pm * (r - offset)),  |r - offset| / p(a))

and is dropped when r equals the offset.  With the default offset 1/2 the
expected importance is at most 1, and the policy regret of deciding with any
classifier c is bounded by the binary regret of c on the induced distribution
Q_D computed here.  Offsetting by 0 instead costs a factor 2 in that bound;
both offsets are supported so the comparison is testable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import ExactProblem, PartialLabelExample, WeightedBinaryExample
from .costing import CostingConfig, LabelDistribution, costing_train

DEFAULT_OFFSET = 0.5

_ACTIONS = (1, 2)


def action_sign(action: int) -> int:
    """Map action 1 -> +1, action 2 -> -1."""
    if action == 1:
        return 1
    if action == 2:
        return -1
    raise ValueError(f"two-action reduction got action {action}")


def sign_action(sign: int) -> int:
    """Inverse of action_sign."""
    return 1 if sign == 1 else 2


def offset_map(e: PartialLabelExample, offset: float = DEFAULT_OFFSET,
               use_propensities: bool = True) -> WeightedBinaryExample | None:
    """Importance-weighted binary example for one logged interaction.

    Returns None when the observed reward sits exactly at the offset (the
    example carries no preference either way).
    """
    if e.k != 2:
        raise ValueError(f"two-action reduction needs k=2 examples, got k={e.k}")
    gap = e.reward - offset
    if gap == 0.0:
        return None
    label = 1 if action_sign(e.action) * gap > 0 else -1
    weight = abs(gap) / e.propensity(e.action) if use_propensities else abs(gap)
    return WeightedBinaryExample(e.x, label, weight)


@dataclass(frozen=True, eq=False)
class BinaryOffsetModel:
    """Trained two-action policy: classifier output +1 picks action 1."""

    classifier: Callable
    offset: float = DEFAULT_OFFSET
    n_features: int | None = None

    def predict(self, x) -> int:
        return sign_action(1 if int(self.classifier(x)) == 1 else -1)

    def __call__(self, x) -> int:
        return self.predict(x)


def train_binary_offset(examples: Sequence[PartialLabelExample],
                        learner: Callable,
                        cfg: CostingConfig = CostingConfig(),
                        offset: float = DEFAULT_OFFSET,
                        use_propensities: bool = True) -> BinaryOffsetModel:
    """Train the two-action reduction on a logged sample.

    Weighted examples from offset_map go through costing (rejection sampling),
    and the learner runs on the unweighted result.  If every example lands
    exactly on the offset, the model falls back to always picking action 1.
    """
    weighted = []
    n_features = None
    for e in examples:
        if e.k != 2:
            raise ValueError(f"two-action reduction needs k=2 examples, got k={e.k}")
        n_features = len(e.x)
        we = offset_map(e, offset, use_propensities)
        if we is not None:
            weighted.append(we)
    classifier = costing_train(weighted, learner, cfg,
                               seed_entropy=(cfg.rng_seed, 0))
    return BinaryOffsetModel(classifier, offset, n_features)


def induced_Q(problem: ExactProblem, offset: float = DEFAULT_OFFSET) -> LabelDistribution:
    """Exact distribution the reduction presents to the binary learner.

    Computed by literal enumeration over (context, reward vector, action):
    each triple contributes mass D(x) * q(r) * p(a) times the importance
    weight of its mapped example.  Points are context indices into
    problem.contexts.  The result's expected_importance is the normalizer;
    the distribution itself does not depend on the propensities, which the
    tests check rather than assume.
    """
    if problem.k != 2:
        raise ValueError(f"two-action reduction needs a k=2 problem, got k={problem.k}")
    masses: dict[tuple[int, int], float] = {}
    total = 0.0
    for i, ctx in enumerate(problem.contexts):
        for q, rvec in ctx.rewards:
            for action in _ACTIONS:
                p = float(problem.propensities[action - 1])
                gap = float(rvec[action - 1]) - offset
                if gap == 0.0:
                    continue
                label = 1 if action_sign(action) * gap > 0 else -1
                mass = ctx.probability * q * p * (abs(gap) / p)
                key = (i, label)
                masses[key] = masses.get(key, 0.0) + mass
                total += mass
    if total <= 0.0:
        raise ValueError("induced distribution has no mass (every reward equals the offset)")
    return LabelDistribution({k: m / total for k, m in masses.items()},
                             expected_importance=total)


def expected_importance(problem: ExactProblem, offset: float = DEFAULT_OFFSET) -> float:
    """Mean importance weight E[|r_a - offset| / p(a)] under the problem."""
    total = 0.0
    for ctx in problem.contexts:
        for q, rvec in ctx.rewards:
            for action in _ACTIONS:
                total += ctx.probability * q * abs(float(rvec[action - 1]) - offset)
    return total


def classifier_policy(decide: Callable[[np.ndarray], int]) -> Callable[[np.ndarray], int]:
    """Lift a +-1 classifier on contexts to a two-action policy."""
    def policy(x):
        return sign_action(1 if int(decide(x)) == 1 else -1)
    return policy

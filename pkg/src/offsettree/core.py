"""Shared domain types for learning from partial (bandit) feedback.

A logged interaction reveals the reward of the one action that was taken and
nothing about the others.  This module carries that data shape, plus an exact
finite-support problem description (`ExactProblem`) on which policy values and
regrets are computed in closed form.  Everything is immutable after
construction, so values can be shared freely across threads or processes.

Ties are always broken toward the smallest action index.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

# A policy is any callable mapping a feature vector to an action in 1..k.
Policy = Callable[[np.ndarray], int]

_PROB_TOL = 1e-9


def as_features(values) -> np.ndarray:
    """Coerce to a read-only 1-D float array, rejecting NaN and Inf."""
    x = np.array(values, dtype=float)
    if x.ndim != 1:
        raise ValueError(f"feature vector must be 1-D, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("feature vector contains NaN or Inf")
    x.setflags(write=False)
    return x


def feature_key(x) -> tuple:
    """Hashable identity of a feature vector (exact float values)."""
    return tuple(float(v) for v in x)


def append_tags(x, *tags: float) -> np.ndarray:
    """Append tag slots (node index, resample index, ...) to a feature vector."""
    return as_features([float(v) for v in x] + [float(t) for t in tags])


@dataclass(frozen=True, eq=False)
class PartialLabelExample:
    """One logged interaction: context, chosen action, observed reward.

    `propensities` is the logging policy's full length-k probability vector at
    this context; ``None`` means uniform 1/k.  The full vector is kept because
    tree training needs the propensity of the unchosen sibling action, not
    just of the action actually taken.
    """

    x: np.ndarray
    action: int
    reward: float
    k: int
    propensities: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "x", as_features(self.x))
        if self.k < 2:
            raise ValueError(f"need at least 2 actions, got k={self.k}")
        if not (isinstance(self.action, (int, np.integer)) and 1 <= self.action <= self.k):
            raise ValueError(f"action must be an integer in 1..{self.k}, got {self.action!r}")
        object.__setattr__(self, "action", int(self.action))
        if not (0.0 <= self.reward <= 1.0):
            raise ValueError(f"reward must lie in [0, 1], got {self.reward!r}")
        object.__setattr__(self, "reward", float(self.reward))
        if self.propensities is not None:
            p = np.array(self.propensities, dtype=float)
            if p.shape != (self.k,):
                raise ValueError(f"propensity vector must have length k={self.k}, got shape {p.shape}")
            if np.any(p <= 0.0):
                raise ValueError("every propensity must be strictly positive")
            if abs(p.sum() - 1.0) > _PROB_TOL:
                raise ValueError(f"propensities must sum to 1, got {p.sum()!r}")
            p.setflags(write=False)
            object.__setattr__(self, "propensities", p)

    def propensity(self, action: int) -> float:
        """Probability the logging policy gave to `action` at this context."""
        if not 1 <= action <= self.k:
            raise ValueError(f"action must be in 1..{self.k}, got {action}")
        if self.propensities is None:
            return 1.0 / self.k
        return float(self.propensities[action - 1])


@dataclass(frozen=True, eq=False)
class WeightedBinaryExample:
    """Importance-weighted binary example (x, label in {-1,+1}, weight >= 0)."""

    x: np.ndarray
    label: int
    weight: float

    def __post_init__(self):
        object.__setattr__(self, "x", as_features(self.x))
        if self.label not in (-1, 1):
            raise ValueError(f"label must be -1 or +1, got {self.label!r}")
        object.__setattr__(self, "label", int(self.label))
        if not (np.isfinite(self.weight) and self.weight >= 0.0):
            raise ValueError(f"weight must be finite and >= 0, got {self.weight!r}")
        object.__setattr__(self, "weight", float(self.weight))


@dataclass(frozen=True, eq=False)
class Context:
    """One context of an exact problem: its mass and reward distribution.

    `rewards` is a finite distribution over reward vectors: a sequence of
    (probability, length-k vector with entries in [0, 1]) pairs.
    """

    probability: float
    x: np.ndarray
    rewards: tuple[tuple[float, np.ndarray], ...]

    def __post_init__(self):
        object.__setattr__(self, "x", as_features(self.x))
        if not (0.0 < self.probability <= 1.0):
            raise ValueError(f"context probability must lie in (0, 1], got {self.probability!r}")
        if not self.rewards:
            raise ValueError("context needs at least one reward vector")
        frozen = []
        total = 0.0
        for q, rvec in self.rewards:
            if not (0.0 < q <= 1.0):
                raise ValueError(f"reward-vector probability must lie in (0, 1], got {q!r}")
            r = np.array(rvec, dtype=float)
            if r.ndim != 1:
                raise ValueError("reward vector must be 1-D")
            if np.any(r < 0.0) or np.any(r > 1.0):
                raise ValueError(f"rewards must lie in [0, 1], got {r!r}")
            r.setflags(write=False)
            frozen.append((float(q), r))
            total += q
        if abs(total - 1.0) > _PROB_TOL:
            raise ValueError(f"reward-vector probabilities must sum to 1, got {total!r}")
        object.__setattr__(self, "rewards", tuple(frozen))

    @cached_property
    def mean_rewards(self) -> np.ndarray:
        """Expected reward of each action at this context."""
        out = sum(q * r for q, r in self.rewards)
        out.setflags(write=False)
        return out


@dataclass(frozen=True, eq=False)
class ExactProblem:
    """Finite-support distribution over (context, reward vector) with one
    context-independent action-choosing propensity vector.

    Small enough to evaluate exactly: policy values and regrets below iterate
    the full support instead of sampling.
    """

    k: int
    contexts: tuple[Context, ...]
    propensities: np.ndarray | None = None

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"need at least 2 actions, got k={self.k}")
        ctxs = tuple(self.contexts)
        if not ctxs:
            raise ValueError("problem needs at least one context")
        total = 0.0
        for c in ctxs:
            for _, r in c.rewards:
                if r.shape != (self.k,):
                    raise ValueError(f"reward vectors must have length k={self.k}, got shape {r.shape}")
            total += c.probability
        if abs(total - 1.0) > _PROB_TOL:
            raise ValueError(f"context probabilities must sum to 1, got {total!r}")
        object.__setattr__(self, "contexts", ctxs)
        if self.propensities is None:
            p = np.full(self.k, 1.0 / self.k)
        else:
            p = np.array(self.propensities, dtype=float)
            if p.shape != (self.k,):
                raise ValueError(f"propensity vector must have length k={self.k}, got shape {p.shape}")
            if np.any(p <= 0.0):
                raise ValueError("every propensity must be strictly positive")
            if abs(p.sum() - 1.0) > _PROB_TOL:
                raise ValueError(f"propensities must sum to 1, got {p.sum()!r}")
        p.setflags(write=False)
        object.__setattr__(self, "propensities", p)

    def with_propensities(self, propensities) -> "ExactProblem":
        """Same contexts and rewards under a different logging policy."""
        return ExactProblem(self.k, self.contexts, propensities)


def deterministic_problem(reward_vectors: Sequence[Sequence[float]],
                          xs: Sequence[Sequence[float]] | None = None,
                          probabilities: Sequence[float] | None = None,
                          propensities=None) -> ExactProblem:
    """Build an ExactProblem whose reward vector is a fixed function of x.

    Contexts default to one-hot feature vectors and uniform masses.
    """
    n = len(reward_vectors)
    if n == 0:
        raise ValueError("need at least one context")
    k = len(reward_vectors[0])
    if xs is None:
        xs = np.eye(n)
    if probabilities is None:
        probabilities = [1.0 / n] * n
    contexts = tuple(
        Context(float(p), x, ((1.0, rv),))
        for p, x, rv in zip(probabilities, xs, reward_vectors)
    )
    return ExactProblem(k, contexts, propensities)


def policy_value(policy: Policy, problem: ExactProblem) -> float:
    """Expected reward of following `policy`, computed context-wise."""
    total = 0.0
    for ctx in problem.contexts:
        a = int(policy(ctx.x))
        if not 1 <= a <= problem.k:
            raise ValueError(f"policy returned action {a}, outside 1..{problem.k}")
        total += ctx.probability * ctx.mean_rewards[a - 1]
    return float(total)


def best_value(problem: ExactProblem) -> float:
    """Value of the best deterministic policy (argmax per context)."""
    return float(sum(c.probability * c.mean_rewards.max() for c in problem.contexts))


def best_action(problem: ExactProblem, context: Context) -> int:
    """Optimal action at a context; ties go to the smallest index."""
    del problem
    return int(np.argmax(context.mean_rewards)) + 1


def policy_regret(policy: Policy, problem: ExactProblem) -> float:
    """Shortfall of `policy` against the best deterministic policy.

    Computed context-wise, so it is exact (no sampling) and never negative.
    """
    total = 0.0
    for ctx in problem.contexts:
        a = int(policy(ctx.x))
        if not 1 <= a <= problem.k:
            raise ValueError(f"policy returned action {a}, outside 1..{problem.k}")
        total += ctx.probability * (ctx.mean_rewards.max() - ctx.mean_rewards[a - 1])
    return float(total)


def estimate_value_ips(policy: Policy, log: Iterable[PartialLabelExample]) -> float:
    """Inverse-propensity estimate of a policy's value from a logged sample.

    Each entry contributes reward * 1(policy matches logged action) / p(a).
    Unbiased for the true value when propensities are correct.
    """
    total = 0.0
    n = 0
    for e in log:
        p = e.propensity(e.action)
        if p <= 0.0:
            raise ValueError("logged propensity must be strictly positive")
        if int(policy(e.x)) == e.action:
            total += e.reward / p
        n += 1
    if n == 0:
        raise ValueError("cannot estimate a value from an empty log")
    return total / n

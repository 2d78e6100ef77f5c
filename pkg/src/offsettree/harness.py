"""Experiment machinery: banditification, splits, online loop, stress cases.

Fully labeled multiclass data becomes partial-label data by drawing one
action per example from a logging distribution and revealing only whether it
hit the true label.  The offline experiment banditifies the training portion
of each split and scores the learned policy against the held-out true labels;
split membership and banditification depend only on (master seed, split
index), never on the method, so every method sees identical data.

Also here: the epoch-greedy online loop, the hard-instance generator used by
the noiseless-recovery check, and a Monte Carlo check of the two-action
reduction's finite-class deviation bound.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .baselines import train_iwc, train_regression
from .binary_offset import train_binary_offset
from .core import Context, ExactProblem, PartialLabelExample, deterministic_problem
from .costing import CostingConfig
from .dataio import MulticlassDataset
from .learners import make_binary_learner, make_regressor
from .offset_tree import train_offset_tree

METHODS = ("offset-tree", "binary-offset", "regression", "iwc")


def banditify(x, label: int, k: int, propensities=None,
              rng: np.random.Generator | int = 0) -> PartialLabelExample:
    """Turn one labeled example into a logged interaction.

    Draws an action from `propensities` (uniform when None) and records
    reward 1 if it matches the label, else 0, along with the distribution the
    draw actually came from.
    """
    if not 1 <= label <= k:
        raise ValueError(f"label {label} outside 1..{k}")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    if propensities is None:
        p = np.full(k, 1.0 / k)
        stored = None
    else:
        p = np.array(propensities, dtype=float)
        stored = p
    action = int(rng.choice(np.arange(1, k + 1), p=p))
    return PartialLabelExample(x, action, 1.0 if action == label else 0.0, k, stored)


def banditify_dataset(dataset: MulticlassDataset, propensities=None,
                      rng: np.random.Generator | int = 0) -> list[PartialLabelExample]:
    """Banditify every example in order with one random stream."""
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    return [banditify(x, int(label), dataset.k, propensities, rng)
            for x, label in zip(dataset.xs, dataset.labels)]


@dataclass(frozen=True)
class ExperimentConfig:
    """One method's offline-evaluation settings.

    Splits and banditification derive from `seed` and the split index alone,
    so two configs differing only in method/learner see the same data.
    """

    method: str
    learner: str = "perceptron"
    splits: int = 10
    train_fraction: float = 2.0 / 3.0
    seed: int = 0
    costing: CostingConfig = CostingConfig()
    epochs: int = 10

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; choose from {METHODS}")
        if self.splits < 1:
            raise ValueError(f"splits must be >= 1, got {self.splits}")
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError(f"train_fraction must lie in (0, 1), got {self.train_fraction}")


def make_trainer(method: str, learner: str, costing: CostingConfig,
                 seed: int = 0, epochs: int = 10,
                 use_propensities: bool = True) -> Callable:
    """Training function (examples -> policy model) for a named method."""
    if method == "regression":
        regress = make_regressor(learner)
        return lambda examples: train_regression(examples, regress)
    base = make_binary_learner(learner, seed=seed, epochs=epochs)
    if method == "offset-tree":
        return lambda examples: train_offset_tree(
            examples, base, costing, use_propensities=use_propensities)
    if method == "binary-offset":
        return lambda examples: train_binary_offset(
            examples, base, costing, use_propensities=use_propensities)
    if method == "iwc":
        return lambda examples: train_iwc(examples, base, costing)
    raise ValueError(f"unknown method {method!r}; choose from {METHODS}")


def split_indices(n: int, train_fraction: float, seed: int,
                  split: int) -> tuple[np.ndarray, np.ndarray, np.random.SeedSequence]:
    """Deterministic (train, test) index split plus the split's data entropy.

    Derived from (seed, split) only; the returned SeedSequence feeds
    banditification so it is identical across methods as well.
    """
    ss = np.random.SeedSequence([int(seed), int(split)])
    perm_entropy, data_entropy = ss.spawn(2)
    perm = np.random.default_rng(perm_entropy).permutation(n)
    n_train = min(max(int(train_fraction * n), 1), n - 1)
    return perm[:n_train], perm[n_train:], data_entropy


def _digest(indices: np.ndarray) -> str:
    payload = ",".join(str(int(i)) for i in sorted(indices))
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class SplitResult:
    split: int
    error: float
    n_train: int
    n_test: int
    train_digest: str


@dataclass(frozen=True)
class ExperimentResult:
    method: str
    learner: str
    k: int
    random_guess: float
    splits: tuple[SplitResult, ...]

    @property
    def mean_error(self) -> float:
        return float(np.mean([s.error for s in self.splits]))


def run_offline_experiment(dataset: MulticlassDataset,
                           cfg: ExperimentConfig) -> ExperimentResult:
    """Banditify, train, and score over fixed random splits.

    Test error is the fraction of held-out examples whose true label the
    learned policy fails to pick.  The 1 - 1/k random-guess rate is reported
    alongside for reference.
    """
    if np.unique(dataset.labels).size < 2:
        raise ValueError("dataset holds a single class; nothing to learn")
    n = len(dataset)
    results = []
    for split in range(cfg.splits):
        train_idx, test_idx, data_entropy = split_indices(
            n, cfg.train_fraction, cfg.seed, split)
        bandit_entropy, train_entropy = data_entropy.spawn(2)
        train_set = MulticlassDataset(dataset.xs[train_idx],
                                      dataset.labels[train_idx], dataset.k)
        log = banditify_dataset(train_set, rng=np.random.default_rng(bandit_entropy))
        method_seed = int(train_entropy.generate_state(1)[0])
        trainer = make_trainer(cfg.method, cfg.learner,
                               replace(cfg.costing, rng_seed=method_seed),
                               seed=method_seed, epochs=cfg.epochs)
        model = trainer(log)
        test_x = dataset.xs[test_idx]
        test_y = dataset.labels[test_idx]
        wrong = sum(1 for x, y in zip(test_x, test_y) if int(model(x)) != int(y))
        results.append(SplitResult(split, wrong / len(test_y), len(train_idx),
                                   len(test_idx), _digest(train_idx)))
    return ExperimentResult(cfg.method, cfg.learner, dataset.k,
                            1.0 - 1.0 / dataset.k, tuple(results))


@dataclass(frozen=True)
class ExplorationSchedule:
    """Exploration probability at step t: min(1, t^(-1/3)) or min(1, t^(-1/2)).

    The agnostic rate is the general epoch-greedy one; the realizable rate
    decays faster because a perfect-classifier assumption lowers the cost of
    exploiting early.
    """

    mode: str = "agnostic"

    def __post_init__(self):
        if self.mode not in ("agnostic", "realizable"):
            raise ValueError(f"mode must be 'agnostic' or 'realizable', got {self.mode!r}")

    def __call__(self, t: int) -> float:
        if t < 1:
            raise ValueError(f"steps are 1-based, got t={t}")
        power = -1.0 / 3.0 if self.mode == "agnostic" else -0.5
        return min(1.0, float(t) ** power)


@dataclass(frozen=True, eq=False)
class OnlineResult:
    """Trace of one epoch-greedy run."""

    running_error: np.ndarray
    n_explore: int
    n_train_examples: int
    model: object | None

    @property
    def final_error(self) -> float:
        return float(self.running_error[-1])


def run_online_epoch_greedy(dataset: MulticlassDataset,
                            schedule: ExplorationSchedule = ExplorationSchedule(),
                            method: str = "offset-tree",
                            learner: str = "perceptron",
                            seed: int = 0,
                            retrain_every: int = 100,
                            include_exploit: bool = False,
                            use_propensities: bool | None = None,
                            costing: CostingConfig = CostingConfig(),
                            epochs: int = 10) -> OnlineResult:
    """One pass of epoch-greedy exploration over the dataset in order.

    At step t the learner explores (uniform action) with probability
    schedule(t) and otherwise plays the current policy, refitting from the
    exploration buffer every `retrain_every` steps.  Exploration steps are
    recorded with the uniform propensity actually used; exploited steps are
    recorded only when include_exploit is set, then with the mixture
    propensities of the step.  use_propensities=None drops the importance
    weighting exactly when the schedule is the realizable one.
    """
    if retrain_every < 1:
        raise ValueError(f"retrain_every must be >= 1, got {retrain_every}")
    if use_propensities is None:
        use_propensities = schedule.mode == "agnostic"
    k = dataset.k
    ss = np.random.SeedSequence([int(seed), 3])
    play_entropy, train_entropy = ss.spawn(2)
    rng = np.random.default_rng(play_entropy)
    method_seed = int(train_entropy.generate_state(1)[0])
    trainer = make_trainer(method, learner, replace(costing, rng_seed=method_seed),
                           seed=method_seed, epochs=epochs,
                           use_propensities=use_propensities)
    buffer: list[PartialLabelExample] = []
    model = None
    mistakes = np.zeros(len(dataset))
    n_explore = 0
    for t, (x, label) in enumerate(zip(dataset.xs, dataset.labels), start=1):
        eps = schedule(t)
        if rng.random() < eps:
            n_explore += 1
            action = int(rng.integers(1, k + 1))
            buffer.append(PartialLabelExample(
                x, action, 1.0 if action == label else 0.0, k, None))
        else:
            action = int(model(x)) if model is not None else 1
            if include_exploit:
                mix = np.full(k, eps / k)
                mix[action - 1] += 1.0 - eps
                buffer.append(PartialLabelExample(
                    x, action, 1.0 if action == label else 0.0, k, mix))
        mistakes[t - 1] = action != label
        if t % retrain_every == 0 and buffer:
            model = trainer(buffer)
    running = np.cumsum(mistakes) / np.arange(1, len(dataset) + 1)
    return OnlineResult(running, n_explore, len(buffer), model)


def lower_bound_problem(k: int) -> ExactProblem:
    """The hard instance family: one context per action, one-hot rewards.

    Contexts are uniform; context i's features are the bits of i - 1 and its
    reward vector pays 1 only on action i.  The best policy earns 1, uniform
    guessing earns 1/k, and any learner must identify every context's action
    to reach regret 0.
    """
    if k < 2:
        raise ValueError(f"need at least 2 actions, got k={k}")
    d = max(1, math.ceil(math.log2(k)))
    xs = [[float((i >> bit) & 1) for bit in range(d - 1, -1, -1)]
          for i in range(k)]
    rewards = np.eye(k)
    return deterministic_problem(rewards, xs=xs)


def exhaustive_log(problem: ExactProblem) -> list[PartialLabelExample]:
    """Every (context, action) pair once, under the problem's propensities.

    Requires deterministic rewards; the empirical distribution of the log
    matches the problem exactly when context masses are uniform.
    """
    examples = []
    for ctx in problem.contexts:
        if len(ctx.rewards) != 1:
            raise ValueError("exhaustive log needs a deterministic reward per context")
        _, rvec = ctx.rewards[0]
        for action in range(1, problem.k + 1):
            examples.append(PartialLabelExample(
                ctx.x, action, float(rvec[action - 1]), problem.k,
                problem.propensities))
    return examples


def binary_reward_problem(qs=(0.1, 0.35, 0.65, 0.9)) -> ExactProblem:
    """Two-action contexts whose reward vector is (1,0) w.p. q, else (0,1)."""
    contexts = []
    n = len(qs)
    for i, q in enumerate(qs):
        q = float(q)
        if not 0.0 <= q <= 1.0:
            raise ValueError(f"need probabilities in [0, 1], got {q!r}")
        outcomes = []
        if q > 0.0:
            outcomes.append((q, (1.0, 0.0)))
        if q < 1.0:
            outcomes.append((1.0 - q, (0.0, 1.0)))
        contexts.append(Context(1.0 / n, [float(i)], tuple(outcomes)))
    return ExactProblem(2, tuple(contexts))


def sample_complexity_bounds(m: int, n_classifiers: int,
                             delta: float) -> tuple[float, float | None]:
    """Closed-form deviation bounds for the offset-1/2 and offset-0 variants.

    The offset-0 denominator m - 2*sqrt(m ln(3/delta)) can be nonpositive for
    small m, in which case that bound is None (not applicable).
    """
    if m < 1 or n_classifiers < 1 or not 0.0 < delta < 1.0:
        raise ValueError("need m >= 1, at least one classifier, and delta in (0, 1)")
    half = math.sqrt((math.log(n_classifiers) + math.log(2.0 / delta)) / (2.0 * m))
    denom = m - 2.0 * math.sqrt(m * math.log(3.0 / delta))
    zero = None
    if denom > 0.0:
        zero = math.sqrt((math.log(n_classifiers) + math.log(3.0 / delta)) / denom)
    return half, zero


@dataclass(frozen=True)
class SampleComplexityResult:
    """Violation counts of the deviation bounds over repeated sample sets."""

    m: int
    n_classifiers: int
    delta: float
    trials: int
    bound_half: float
    bound_zero: float | None
    violations_half: int
    violations_zero: int | None
    notice: str | None = None

    @property
    def violation_rate_half(self) -> float:
        return self.violations_half / self.trials

    @property
    def violation_rate_zero(self) -> float | None:
        if self.violations_zero is None:
            return None
        return self.violations_zero / self.trials


def sample_complexity_trial(m: int, classifiers: Sequence[Callable] | None = None,
                            delta: float = 0.1, trials: int = 200, seed: int = 0,
                            problem: ExactProblem | None = None) -> SampleComplexityResult:
    """Empirical check of the finite-class deviation bounds.

    Each trial draws m logged interactions from the problem under uniform
    exploration, recovers the implied binary sample (exactly the true labels
    at offset 1/2 with unit weights; only the reward-1 observations at offset
    0), and asks whether any classifier's empirical value strays from its
    true value by more than the bound.  Reports how often any classifier
    violates each bound; the theorem says at most a delta fraction should.
    """
    if problem is None:
        problem = binary_reward_problem()
    if problem.k != 2:
        raise ValueError("the deviation bounds cover two-action problems")
    contexts = problem.contexts
    n_ctx = len(contexts)
    if classifiers is None:
        classifiers = [_IndexActions(bits) for bits in
                       np.ndindex(*([2] * n_ctx))]
    masses = np.array([c.probability for c in contexts])
    q1 = np.array([sum(q for q, rvec in c.rewards if rvec[0] == 1.0)
                   for c in contexts])
    actions = np.array([[int(c(ctx.x)) for ctx in contexts] for c in classifiers])
    if actions.min() < 1 or actions.max() > 2:
        raise ValueError("classifiers must return actions 1 or 2")
    true_value = np.where(actions == 1, q1[None, :], 1.0 - q1[None, :])
    true_value = (true_value * masses[None, :]).sum(axis=1)
    bound_half, bound_zero = sample_complexity_bounds(m, len(classifiers), delta)
    notice = None
    if bound_zero is None:
        notice = (f"offset-0 bound skipped: m={m} is below the "
                  f"2*sqrt(m ln(3/delta)) threshold")
    violations_half = 0
    violations_zero = 0 if bound_zero is not None else None
    for trial in range(trials):
        rng = np.random.default_rng(np.random.SeedSequence([int(seed), trial]))
        idx = rng.choice(n_ctx, size=m, p=masses)
        correct = np.where(rng.random(m) < q1[idx], 1, 2)
        chosen = rng.integers(1, 3, size=m)
        hit = chosen == correct
        counts = np.zeros((n_ctx, 2))
        np.add.at(counts, (idx, correct - 1), 1.0)
        est_half = np.array([counts[np.arange(n_ctx), a - 1].sum() / m
                             for a in actions])
        if np.max(np.abs(est_half - true_value)) > bound_half:
            violations_half += 1
        if bound_zero is not None:
            kept = hit
            m0 = int(kept.sum())
            if m0 == 0:
                violations_zero += 1
                continue
            counts0 = np.zeros((n_ctx, 2))
            np.add.at(counts0, (idx[kept], correct[kept] - 1), 1.0)
            est_zero = np.array([counts0[np.arange(n_ctx), a - 1].sum() / m0
                                 for a in actions])
            if np.max(np.abs(est_zero - true_value)) > bound_zero:
                violations_zero += 1
    return SampleComplexityResult(m, len(classifiers), delta, trials, bound_half,
                                  bound_zero, violations_half, violations_zero,
                                  notice)


class _IndexActions:
    """A deterministic two-action policy indexed by context feature."""

    def __init__(self, bits):
        self.actions = tuple(1 + int(b) for b in bits)

    def __call__(self, x) -> int:
        return self.actions[int(round(float(x[0])))]

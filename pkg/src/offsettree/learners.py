"""Built-in binary learners and regressors.

Each learner is a plain function from a training set to a predictor object.
All of them are deterministic given (training-set order, seed), and every one
of them returns a sensible constant predictor on an empty set, because the
reductions upstream can legitimately produce empty per-node or per-draw sets.

Predictors are small frozen dataclasses so trained models can be serialized
field-by-field.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import partial
from typing import Callable, Sequence

import numpy as np

from .core import feature_key

BINARY_LEARNER_NAMES = ("perceptron", "stump", "table")
REGRESSOR_NAMES = ("least-squares", "table")


# ---------------------------------------------------------------------------
# predictors


@dataclass(frozen=True, eq=False)
class ConstantClassifier:
    label: int = 1

    def __call__(self, x) -> int:
        return self.label


@dataclass(frozen=True, eq=False)
class LinearClassifier:
    """sign(w . x + b); a zero score counts as +1."""

    w: np.ndarray
    b: float

    def __call__(self, x) -> int:
        return 1 if float(np.dot(self.w, x)) + self.b >= 0.0 else -1


@dataclass(frozen=True, eq=False)
class StumpClassifier:
    """Single-feature threshold rule: polarity if x[feature] <= threshold."""

    feature: int
    threshold: float
    polarity: int

    def __call__(self, x) -> int:
        return self.polarity if float(x[self.feature]) <= self.threshold else -self.polarity


@dataclass(frozen=True, eq=False)
class TableClassifier:
    """Memorized majority label per exact feature vector; unseen -> default."""

    table: dict
    default: int = 1

    def __call__(self, x) -> int:
        return self.table.get(feature_key(x), self.default)


@dataclass(frozen=True, eq=False)
class ConstantRegressor:
    value: float = 0.0

    def __call__(self, x) -> float:
        return self.value


@dataclass(frozen=True, eq=False)
class LinearRegressor:
    w: np.ndarray
    b: float

    def __call__(self, x) -> float:
        return float(np.dot(self.w, x)) + self.b


@dataclass(frozen=True, eq=False)
class TableRegressor:
    """Memorized mean target per exact feature vector; unseen -> default."""

    table: dict
    default: float = 0.0

    def __call__(self, x) -> float:
        return self.table.get(feature_key(x), self.default)


# ---------------------------------------------------------------------------
# binary learners


def averaged_perceptron(examples: Sequence[tuple], epochs: int = 10,
                        seed: int = 0, average: bool = True):
    """Perceptron with weights averaged over every step.

    Parameters
    ----------
    examples : sequence of (x, label) with label in {-1, +1}
    epochs : passes over the data; order is reshuffled each pass
    seed : shuffle seed; equal seeds give byte-identical weights
    average : False trains the plain variant (last weights win)

    Returns a LinearClassifier, or ConstantClassifier(+1) on an empty set.
    """
    if epochs < 1:
        raise ValueError(f"epochs must be >= 1, got {epochs}")
    if not examples:
        return ConstantClassifier(1)
    X = np.array([x for x, _ in examples], dtype=float)
    y = np.array([label for _, label in examples], dtype=float)
    n, d = X.shape
    rng = np.random.default_rng(seed)
    w = np.zeros(d)
    b = 0.0
    w_sum = np.zeros(d)
    b_sum = 0.0
    steps = 0
    for _ in range(epochs):
        order = rng.permutation(n)
        for i in order:
            if y[i] * (np.dot(w, X[i]) + b) <= 0.0:
                w = w + y[i] * X[i]
                b = b + y[i]
            w_sum += w
            b_sum += b
            steps += 1
    if average:
        return LinearClassifier(w_sum / steps, b_sum / steps)
    return LinearClassifier(w, b)


def decision_stump(examples: Sequence[tuple]):
    """Best single-feature threshold rule by training error count.

    Candidate thresholds are midpoints between consecutive distinct values,
    plus +inf so constant predictions are in the search space.  Ties go to
    the lowest feature index, then the lowest threshold, then polarity +1.

    Returns a StumpClassifier, or ConstantClassifier(+1) on an empty set.
    """
    if not examples:
        return ConstantClassifier(1)
    X = np.array([x for x, _ in examples], dtype=float)
    y = np.array([label for _, label in examples], dtype=int)
    n, d = X.shape
    n_pos = int(np.sum(y == 1))
    best = None  # (errors, feature, threshold, polarity)
    for f in range(d):
        v = X[:, f]
        order = np.argsort(v, kind="stable")
        v_sorted = v[order]
        y_sorted = y[order]
        # pos_leq[i] = count of +1 labels among the i smallest values
        pos_cum = np.cumsum(y_sorted == 1)
        distinct = np.nonzero(np.diff(v_sorted) > 0)[0]
        cut_counts = list(distinct + 1) + [n]  # n <=> threshold +inf
        thresholds = [float((v_sorted[i - 1] + v_sorted[i]) / 2.0) for i in distinct + 1]
        thresholds.append(np.inf)
        for cut, thr in zip(cut_counts, thresholds):
            pos_leq = int(pos_cum[cut - 1]) if cut > 0 else 0
            neg_leq = cut - pos_leq
            # polarity +1: predict +1 on the <= side
            err_plus = neg_leq + (n_pos - pos_leq)
            err_minus = n - err_plus
            for polarity, err in ((1, err_plus), (-1, err_minus)):
                if best is None or err < best[0]:
                    best = (err, f, thr, polarity)
    _, f, thr, polarity = best
    return StumpClassifier(f, thr, polarity)


def table_learner(examples: Sequence[tuple]):
    """Majority label per exact feature vector; ties and unseen inputs -> +1.

    Bayes-optimal on the empirical distribution of its training set, which is
    what makes exact-recovery tests possible.
    """
    counts: dict[tuple, int] = {}
    for x, label in examples:
        key = feature_key(x)
        counts[key] = counts.get(key, 0) + (1 if label == 1 else -1)
    table = {key: (1 if c >= 0 else -1) for key, c in counts.items()}
    return TableClassifier(table, default=1)


# ---------------------------------------------------------------------------
# regressors


def least_squares(pairs: Sequence[tuple], ridge: float = 1e-6):
    """Linear regression with a small ridge term for rank deficiency.

    Parameters
    ----------
    pairs : sequence of (x, target)
    ridge : damping added to the normal equations (default 1e-6)
    """
    if ridge < 0.0:
        raise ValueError(f"ridge must be >= 0, got {ridge}")
    if not pairs:
        return ConstantRegressor(0.0)
    X = np.array([x for x, _ in pairs], dtype=float)
    t = np.array([target for _, target in pairs], dtype=float)
    A = np.hstack([X, np.ones((len(t), 1))])
    gram = A.T @ A + ridge * np.eye(A.shape[1])
    beta = np.linalg.solve(gram, A.T @ t)
    return LinearRegressor(beta[:-1], float(beta[-1]))


def table_regressor(pairs: Sequence[tuple]):
    """Mean target per exact feature vector; unseen inputs -> 0."""
    sums: dict[tuple, list] = {}
    for x, target in pairs:
        key = feature_key(x)
        cell = sums.setdefault(key, [0.0, 0])
        cell[0] += float(target)
        cell[1] += 1
    table = {key: s / c for key, (s, c) in sums.items()}
    return TableRegressor(table, default=0.0)


# ---------------------------------------------------------------------------
# name registry (CLI / config surface)


def make_binary_learner(name: str, seed: int = 0, epochs: int = 10) -> Callable:
    """Look up a binary learner by its public name."""
    if name == "perceptron":
        return partial(averaged_perceptron, epochs=epochs, seed=seed)
    if name == "stump":
        return decision_stump
    if name == "table":
        return table_learner
    raise ValueError(
        f"unknown binary learner {name!r}; expected one of {BINARY_LEARNER_NAMES}")


def make_regressor(name: str) -> Callable:
    """Look up a regression learner by its public name."""
    if name == "least-squares":
        return least_squares
    if name == "table":
        return table_regressor
    raise ValueError(
        f"unknown regressor {name!r}; expected one of {REGRESSOR_NAMES}")

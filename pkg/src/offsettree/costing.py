"""Importance-weighted to unweighted classification via rejection sampling.

A weighted example (x, y, w) is accepted with probability w / normalizer in
each of M independent draws.  The accepted sets follow the induced
distribution Q(x, y) proportional to w * P(x, y, w), so an ordinary learner
trained on them minimizes the original importance-weighted loss: error rate
under Q times the expected importance w-bar equals the weighted loss under P
(the reweighting identity, checked exactly in the tests).

`LabelDistribution` is the finite-support distribution type the exact
regret checkers run on; labels may be +-1 or multiclass.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .core import append_tags

# Atom of a finite importance-weighted distribution: (mass, point, label, weight).
WeightedAtom = tuple[float, Any, Any, float]


class LabelDistribution:
    """Finite distribution over (point, label) pairs.

    Points are hashable keys (context indices, (context, node) pairs, ...).
    `expected_importance` records the normalizer w-bar when the distribution
    was induced from a weighted one.
    """

    def __init__(self, masses: dict[tuple[Any, Any], float],
                 expected_importance: float | None = None,
                 normalize: bool = False):
        total = sum(masses.values())
        if total <= 0.0:
            raise ValueError("distribution has no mass")
        if normalize:
            masses = {key: m / total for key, m in masses.items()}
        elif abs(total - 1.0) > 1e-9:
            raise ValueError(f"masses must sum to 1, got {total!r}")
        self.masses = {key: float(m) for key, m in masses.items() if m > 0.0}
        self.expected_importance = expected_importance

    def points(self) -> list[Any]:
        seen: dict[Any, None] = {}
        for point, _ in self.masses:
            seen.setdefault(point, None)
        return list(seen)

    def point_mass(self, point) -> float:
        return sum(m for (p, _), m in self.masses.items() if p == point)

    def conditional(self, point) -> dict[Any, float]:
        """Label distribution at one point."""
        at = {label: m for (p, label), m in self.masses.items() if p == point}
        total = sum(at.values())
        if total <= 0.0:
            raise ValueError(f"point {point!r} has no mass")
        return {label: m / total for label, m in at.items()}

    def error_rate(self, classify: Callable[[Any], Any]) -> float:
        """Probability that `classify(point)` disagrees with the drawn label."""
        return float(sum(m for (p, label), m in self.masses.items()
                         if classify(p) != label))

    def bayes_error(self) -> float:
        """Smallest error rate any deterministic labeling can achieve."""
        best: dict[Any, float] = {}
        total_at: dict[Any, float] = {}
        for (p, _), m in self.masses.items():
            total_at[p] = total_at.get(p, 0.0) + m
            if m > best.get(p, 0.0):
                best[p] = m
        return float(sum(total_at[p] - best[p] for p in total_at))

    def regret(self, classify: Callable[[Any], Any]) -> float:
        """error_rate(classify) minus the Bayes error."""
        return self.error_rate(classify) - self.bayes_error()

    def allclose(self, other: "LabelDistribution", tol: float = 1e-12) -> bool:
        keys = set(self.masses) | set(other.masses)
        return all(abs(self.masses.get(k, 0.0) - other.masses.get(k, 0.0)) <= tol
                   for k in keys)


def weighted_error(classify: Callable[[Any], Any],
                   atoms: Iterable[WeightedAtom]) -> float:
    """Importance-weighted loss: sum of mass * w over misclassified atoms."""
    return float(sum(mass * w for mass, point, label, w in atoms
                     if classify(point) != label))


def weighted_bayes_error(atoms: Iterable[WeightedAtom]) -> float:
    """Smallest weighted loss over all deterministic labelings."""
    per_point: dict[Any, dict[Any, float]] = {}
    for mass, point, label, w in atoms:
        per_point.setdefault(point, {})
        per_point[point][label] = per_point[point].get(label, 0.0) + mass * w
    total = 0.0
    for label_mass in per_point.values():
        total += sum(label_mass.values()) - max(label_mass.values())
    return float(total)


def weighted_regret(classify: Callable[[Any], Any],
                    atoms: Sequence[WeightedAtom]) -> float:
    return weighted_error(classify, atoms) - weighted_bayes_error(atoms)


def expected_importance(atoms: Iterable[WeightedAtom]) -> float:
    return float(sum(mass * w for mass, _, _, w in atoms))


def induced_distribution(atoms: Sequence[WeightedAtom]) -> LabelDistribution:
    """Unweighted distribution with mass proportional to w * P, merged over w.

    Raises if the expected importance is zero (every atom weightless): the
    induced distribution would be undefined.
    """
    wbar = expected_importance(atoms)
    if wbar <= 0.0:
        raise ValueError("expected importance is zero; induced distribution undefined")
    masses: dict[tuple[Any, Any], float] = {}
    for mass, point, label, w in atoms:
        if mass * w == 0.0:
            continue
        key = (point, label)
        masses[key] = masses.get(key, 0.0) + mass * w / wbar
    return LabelDistribution(masses, expected_importance=wbar)


@dataclass(frozen=True)
class CostingConfig:
    """Controls the weighted-to-unweighted conversion.

    draws: number M of independent rejection-sampled sets (majority vote at
        prediction time, ties toward +1).
    normalizer: acceptance cap; None means the max weight in the set.  An
        explicit cap smaller than an observed weight is a configuration error.
    rng_seed: master seed; per-draw streams are split off deterministically.
    share_classifier: train one classifier on the union of the M sets with the
        resample index appended as a feature, instead of M classifiers.
    """

    draws: int = 1
    normalizer: float | None = None
    rng_seed: int = 0
    share_classifier: bool = False

    def __post_init__(self):
        if self.draws < 1:
            raise ValueError(f"draws must be >= 1, got {self.draws}")
        if self.normalizer is not None and not (self.normalizer > 0.0):
            raise ValueError(f"normalizer must be positive, got {self.normalizer!r}")


def _resolve_normalizer(weights: Sequence[float], cfg: CostingConfig) -> float:
    max_w = max(weights, default=0.0)
    if cfg.normalizer is None:
        return max_w
    if cfg.normalizer < max_w - 1e-12:
        raise ValueError(
            f"normalizer {cfg.normalizer} is smaller than observed weight {max_w}")
    return cfg.normalizer


def acceptance_masks(weights: Sequence[float], cfg: CostingConfig,
                     seed_entropy: Sequence[int] | None = None) -> list[np.ndarray]:
    """One boolean accept/reject mask per draw.

    Acceptance probability is weight / normalizer; zero-weight items are never
    accepted.  Streams are split per draw from the seed entropy, so results
    are reproducible and independent across draws.
    """
    w = np.asarray(list(weights), dtype=float)
    if np.any(w < 0.0):
        raise ValueError("weights must be >= 0")
    norm = _resolve_normalizer(list(w), cfg)
    if seed_entropy is None:
        seed_entropy = (cfg.rng_seed,)
    children = np.random.SeedSequence(list(seed_entropy)).spawn(cfg.draws)
    masks = []
    for child in children:
        rng = np.random.default_rng(child)
        u = rng.random(len(w))
        if norm <= 0.0:
            masks.append(np.zeros(len(w), dtype=bool))
        else:
            masks.append(u < w / norm)
    return masks


def rejection_sample(examples: Sequence, cfg: CostingConfig,
                     seed_entropy: Sequence[int] | None = None) -> list[list[tuple]]:
    """M unweighted (x, label) sets drawn from weighted examples.

    `examples` may be WeightedBinaryExample instances or anything exposing
    x / label / weight attributes (the multiclass reduction reuses this).
    """
    masks = acceptance_masks([e.weight for e in examples], cfg, seed_entropy)
    out = []
    for mask in masks:
        out.append([(e.x, e.label) for e, keep in zip(examples, mask) if keep])
    return out


@dataclass(frozen=True, eq=False)
class MajorityVoteClassifier:
    """Votes over member classifiers; ties go to +1."""

    members: tuple

    def __call__(self, x) -> int:
        score = sum(int(m(x)) for m in self.members)
        return 1 if score >= 0 else -1


@dataclass(frozen=True, eq=False)
class IndexTaggedVoteClassifier:
    """One shared classifier queried once per resample index; ties go to +1.

    Wraps the single-classifier variant of costing: training appended the
    resample index as a feature, so prediction votes over the index values.
    """

    base: Any
    draws: int

    def __call__(self, x) -> int:
        score = sum(int(self.base(append_tags(x, j))) for j in range(self.draws))
        return 1 if score >= 0 else -1


def costing_train(examples: Sequence, learner: Callable,
                  cfg: CostingConfig = CostingConfig(),
                  seed_entropy: Sequence[int] | None = None):
    """Train through rejection sampling; returns a single predictor.

    With draws == 1 the lone classifier is returned bare.  With more draws,
    either M classifiers vote (default) or, with cfg.share_classifier, one
    classifier is trained on the index-tagged union and votes over indices.
    """
    sets = rejection_sample(examples, cfg, seed_entropy)
    if cfg.share_classifier:
        union = [(append_tags(x, j), label)
                 for j, drawn in enumerate(sets) for x, label in drawn]
        base = learner(union)
        if cfg.draws == 1:
            return IndexTaggedVoteClassifier(base, 1)
        return IndexTaggedVoteClassifier(base, cfg.draws)
    classifiers = tuple(learner(drawn) for drawn in sets)
    if cfg.draws == 1:
        return classifiers[0]
    return MajorityVoteClassifier(classifiers)

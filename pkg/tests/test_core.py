import numpy as np
import pytest

from offsettree.core import (
    Context,
    ExactProblem,
    PartialLabelExample,
    WeightedBinaryExample,
    append_tags,
    as_features,
    best_action,
    best_value,
    deterministic_problem,
    estimate_value_ips,
    feature_key,
    policy_regret,
    policy_value,
)


def test_as_features_accepts_tuples_and_arrays():
    x = as_features((1.0, 2.0))
    assert isinstance(x, np.ndarray)
    assert x.tolist() == [1.0, 2.0]
    assert as_features(np.array([3.0])).tolist() == [3.0]


def test_as_features_rejects_bad_shapes_and_nan():
    with pytest.raises(ValueError):
        as_features(np.zeros((2, 2)))
    with pytest.raises(ValueError):
        as_features((1.0, float("nan")))


def test_feature_key_is_hashable_and_stable():
    a = feature_key(np.array([1.0, 2.0]))
    b = feature_key((1.0, 2.0))
    assert a == b
    assert hash(a) == hash(b)


def test_append_tags():
    x = append_tags(np.array([1.0, 2.0]), 7)
    assert x.tolist() == [1.0, 2.0, 7.0]


class TestPartialLabelExample:
    def test_uniform_propensity_default(self):
        e = PartialLabelExample((0.0,), 3, 1.0, 4)
        assert e.propensities is None
        assert e.propensity(1) == pytest.approx(0.25)
        assert e.propensity(3) == pytest.approx(0.25)

    def test_explicit_propensities(self):
        e = PartialLabelExample((0.0,), 2, 0.5, 2, (0.25, 0.75))
        assert e.propensity(1) == pytest.approx(0.25)
        assert e.propensity(2) == pytest.approx(0.75)

    def test_validation(self):
        with pytest.raises(ValueError):
            PartialLabelExample((0.0,), 0, 1.0, 2)
        with pytest.raises(ValueError):
            PartialLabelExample((0.0,), 3, 1.0, 2)
        with pytest.raises(ValueError):
            PartialLabelExample((0.0,), 1, 1.5, 2)
        with pytest.raises(ValueError):
            PartialLabelExample((0.0,), 1, 1.0, 2, (0.0, 1.0))
        with pytest.raises(ValueError):
            PartialLabelExample((0.0,), 1, 1.0, 2, (0.3, 0.3))
        with pytest.raises(ValueError):
            PartialLabelExample((0.0,), 1, 1.0, 1)

    def test_propensity_action_range(self):
        e = PartialLabelExample((0.0,), 1, 1.0, 2)
        with pytest.raises(ValueError):
            e.propensity(3)


def test_weighted_binary_example_validation():
    WeightedBinaryExample(np.zeros(1), 1, 0.0)
    with pytest.raises(ValueError):
        WeightedBinaryExample(np.zeros(1), 2, 1.0)
    with pytest.raises(ValueError):
        WeightedBinaryExample(np.zeros(1), 1, -0.5)


def test_context_mean_rewards_mixes_vectors():
    c = Context(1.0, (0.0,), ((0.25, (1.0, 0.0)), (0.75, (0.0, 1.0))))
    assert np.allclose(c.mean_rewards, [0.25, 0.75])


def test_context_validation():
    with pytest.raises(ValueError):
        Context(0.0, (0.0,), ((1.0, (1.0, 0.0)),))
    with pytest.raises(ValueError):
        Context(1.0, (0.0,), ())
    with pytest.raises(ValueError):
        Context(1.0, (0.0,), ((0.5, (1.0, 0.0)),))
    with pytest.raises(ValueError):
        Context(1.0, (0.0,), ((1.0, (1.0, 2.0)),))


def test_deterministic_problem_defaults():
    prob = deterministic_problem([(1.0, 0.0), (0.0, 1.0)])
    assert prob.k == 2
    # contexts default to one-hot feature vectors, uniform weights
    assert [tuple(c.x) for c in prob.contexts] == [(1.0, 0.0), (0.0, 1.0)]
    assert [c.probability for c in prob.contexts] == [0.5, 0.5]
    # propensities always materialize to a concrete uniform vector
    assert np.allclose(prob.propensities, [0.5, 0.5])


def test_problem_validation():
    with pytest.raises(ValueError):
        deterministic_problem([(1.0, 0.0)], probabilities=[0.5])
    with pytest.raises(ValueError):
        deterministic_problem([(1.0, 0.0), (0.0, 0.5, 0.2)])
    with pytest.raises(ValueError):
        deterministic_problem([(1.0, 0.0)], propensities=(0.2, 0.2))


def test_with_propensities_replaces_logging_only():
    prob = deterministic_problem([(1.0, 0.0)])
    other = prob.with_propensities((0.9, 0.1))
    assert np.allclose(other.propensities, [0.9, 0.1])
    assert other.contexts is prob.contexts


def test_policy_value_and_regret_exact():
    prob = deterministic_problem([(1.0, 0.0), (0.25, 0.75)],
                                 probabilities=[0.4, 0.6])

    def pick_first(x):
        return 1

    # value = 0.4 * 1.0 + 0.6 * 0.25
    assert policy_value(pick_first, prob) == pytest.approx(0.55)
    assert best_value(prob) == pytest.approx(0.4 * 1.0 + 0.6 * 0.75)
    assert policy_regret(pick_first, prob) == pytest.approx(0.6 * 0.5)

    def optimal(x):
        return 1 if x[0] == 1.0 else 2

    assert policy_regret(optimal, prob) == 0.0


def test_best_action_breaks_ties_low():
    prob = deterministic_problem([(0.5, 0.5)])
    assert best_action(prob, prob.contexts[0]) == 1


def test_policy_value_rejects_out_of_range_actions():
    prob = deterministic_problem([(1.0, 0.0)])
    with pytest.raises(ValueError):
        policy_value(lambda x: 3, prob)


def test_estimate_value_ips_frozen():
    log = [
        PartialLabelExample((0.0,), 1, 1.0, 2, (0.25, 0.75)),
        PartialLabelExample((1.0,), 2, 1.0, 2, (0.25, 0.75)),
    ]

    def pick_first(x):
        return 1

    # matched example contributes 1/0.25 = 4, the other 0; mean is 2
    assert estimate_value_ips(pick_first, log) == pytest.approx(2.0)
    assert estimate_value_ips(pick_first, log[:1]) == pytest.approx(4.0)


def test_estimate_value_ips_uniform_log_unbiased():
    # exhaustive uniform log over a deterministic problem reproduces the value
    prob = deterministic_problem([(1.0, 0.0), (0.25, 0.75)])
    log = []
    for c in prob.contexts:
        for a in (1, 2):
            log.append(PartialLabelExample(c.x, a, float(c.mean_rewards[a - 1]), 2))

    def pick_second(x):
        return 2

    assert estimate_value_ips(pick_second, log) == pytest.approx(
        policy_value(pick_second, prob), abs=1e-12)


def test_estimate_value_ips_empty_log():
    with pytest.raises(ValueError):
        estimate_value_ips(lambda x: 1, [])

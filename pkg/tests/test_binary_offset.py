import numpy as np
import pytest

from offsettree.binary_offset import (
    DEFAULT_OFFSET,
    BinaryOffsetModel,
    action_sign,
    classifier_policy,
    expected_importance,
    induced_Q,
    offset_map,
    sign_action,
    train_binary_offset,
)
from offsettree.core import PartialLabelExample, deterministic_problem, policy_regret
from offsettree.costing import CostingConfig
from offsettree.learners import make_binary_learner, table_learner


def test_action_sign_round_trip():
    assert action_sign(1) == 1 and action_sign(2) == -1
    assert sign_action(1) == 1 and sign_action(-1) == 2
    for a in (1, 2):
        assert sign_action(action_sign(a)) == a


def test_offset_map_frozen_values():
    # reward above the offset labels toward the observed action
    e = PartialLabelExample((1.0,), 1, 1.0, 2, (0.25, 0.75))
    we = offset_map(e, 0.5)
    assert we.label == 1
    assert we.weight == pytest.approx(2.0)  # |1 - 0.5| / 0.25

    e = PartialLabelExample((1.0,), 2, 1.0, 2, (0.25, 0.75))
    we = offset_map(e, 0.5)
    assert we.label == -1
    assert we.weight == pytest.approx(0.5 / 0.75)

    # reward below the offset labels toward the other action
    e = PartialLabelExample((1.0,), 2, 0.0, 2, (0.25, 0.75))
    we = offset_map(e, 0.5)
    assert we.label == 1
    assert we.weight == pytest.approx(0.5 / 0.75)


def test_offset_map_drops_rewards_at_the_offset():
    e = PartialLabelExample((1.0,), 1, 0.5, 2)
    assert offset_map(e, 0.5) is None
    assert offset_map(e, 0.25) is not None


def test_offset_map_without_propensities():
    e = PartialLabelExample((1.0,), 2, 1.0, 2, (0.25, 0.75))
    we = offset_map(e, 0.5, use_propensities=False)
    assert we.weight == pytest.approx(0.5)


def test_offset_map_zero_offset_keeps_only_nonzero_rewards():
    e = PartialLabelExample((1.0,), 1, 0.0, 2)
    assert offset_map(e, 0.0) is None
    we = offset_map(PartialLabelExample((1.0,), 1, 1.0, 2), 0.0)
    assert we.label == 1 and we.weight == pytest.approx(2.0)


def test_offset_map_rejects_k_not_two():
    e = PartialLabelExample((1.0,), 1, 1.0, 3)
    with pytest.raises(ValueError):
        offset_map(e)


def test_model_sign_convention():
    model = BinaryOffsetModel(lambda x: 1)
    assert model(np.zeros(1)) == 1
    model = BinaryOffsetModel(lambda x: -1)
    assert model(np.zeros(1)) == 2


def test_train_recovers_optimal_policy_from_noiseless_log():
    prob = deterministic_problem([(1.0, 0.0), (0.0, 1.0), (1.0, 0.0)])
    log = []
    for c in prob.contexts:
        for a in (1, 2):
            log.append(PartialLabelExample(c.x, a, float(c.mean_rewards[a - 1]), 2))
    model = train_binary_offset(log, table_learner)
    assert policy_regret(model, prob) == 0.0


def test_train_rejects_wrong_k():
    log = [PartialLabelExample((0.0,), 1, 1.0, 3)]
    with pytest.raises(ValueError):
        train_binary_offset(log, table_learner)


def test_train_is_deterministic_per_seed():
    rng = np.random.default_rng(0)
    log = []
    for _ in range(40):
        x = rng.normal(size=2)
        a = int(rng.integers(1, 3))
        r = float(rng.random() > 0.5)
        log.append(PartialLabelExample(x, a, r, 2))
    learner = make_binary_learner("perceptron", seed=1)
    m1 = train_binary_offset(log, learner, CostingConfig(draws=3, rng_seed=5))
    m2 = train_binary_offset(log, learner, CostingConfig(draws=3, rng_seed=5))
    xs = rng.normal(size=(20, 2))
    assert [m1(x) for x in xs] == [m2(x) for x in xs]


def test_all_offset_rewards_fall_back_to_action_one():
    log = [PartialLabelExample((0.0,), a, 0.5, 2) for a in (1, 2)]
    model = train_binary_offset(log, table_learner)
    assert model(np.zeros(1)) == 1


def test_induced_Q_frozen_masses():
    # context 0 pays (1, 0) deterministically, context 1 pays (0.25, 0.75)
    prob = deterministic_problem([(1.0, 0.0), (0.25, 0.75)])
    q = induced_Q(prob, 0.5)
    assert q.masses[(0, 1)] == pytest.approx(2.0 / 3.0)
    assert q.masses[(1, -1)] == pytest.approx(1.0 / 3.0)
    assert set(q.masses) == {(0, 1), (1, -1)}
    assert q.expected_importance == pytest.approx(0.75)
    assert expected_importance(prob, 0.5) == pytest.approx(0.75)


def test_induced_Q_is_propensity_independent():
    prob = deterministic_problem([(1.0, 0.25), (0.5, 0.75)],
                                 probabilities=[0.3, 0.7])
    q1 = induced_Q(prob.with_propensities((0.2, 0.8)), 0.5)
    q2 = induced_Q(prob.with_propensities((0.9, 0.1)), 0.5)
    assert q1.allclose(q2, tol=1e-12)


def test_induced_Q_rejects_all_offset_problem():
    prob = deterministic_problem([(0.5, 0.5)])
    with pytest.raises(ValueError):
        induced_Q(prob, 0.5)


def test_regret_transfer_on_a_hand_case():
    # classifier wrong only at context 1; Q regret there is |0.25 - 0.75|/2
    prob = deterministic_problem([(1.0, 0.0), (0.25, 0.75)])
    q = induced_Q(prob, 0.5)

    def pick_first(point):
        return 1

    reg_q = q.regret(pick_first)
    wbar = q.expected_importance
    policy = classifier_policy(pick_first_on_index(prob))
    reg_policy = policy_regret(policy, prob)
    # per-context identity: policy regret equals w-bar times Q regret
    assert reg_policy == pytest.approx(wbar * reg_q, abs=1e-12)


def pick_first_on_index(prob):
    # classifier over raw x that always answers +1 (action 1)
    return lambda x: 1


def test_classifier_policy_maps_signs():
    policy = classifier_policy(lambda x: -1)
    assert policy(np.zeros(1)) == 2


def test_default_offset_value():
    assert DEFAULT_OFFSET == 0.5

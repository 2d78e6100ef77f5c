import unittest

import numpy as np

from offsettree.baselines import (
    AllPairsModel,
    RegressionModel,
    allpairs_predict,
    argmax_policy,
    encode_action,
    pair_index,
    train_iwc,
    train_regression,
)
from offsettree.core import PartialLabelExample, deterministic_problem, policy_regret
from offsettree.costing import CostingConfig
from offsettree.learners import (
    ConstantRegressor,
    least_squares,
    make_binary_learner,
    table_learner,
    table_regressor,
)


def uniform_log(problem):
    log = []
    for c in problem.contexts:
        for a in range(1, problem.k + 1):
            log.append(PartialLabelExample(
                c.x, a, float(c.mean_rewards[a - 1]), problem.k))
    return log


class TestEncoding(unittest.TestCase):
    def test_encode_action_one_hot_tail(self):
        z = encode_action(np.array([1.5, 2.5]), 2, 3)
        self.assertEqual(z.tolist(), [1.5, 2.5, 0.0, 1.0, 0.0])

    def test_pair_index_lexicographic(self):
        k = 4
        expected = {(1, 2): 0, (1, 3): 1, (1, 4): 2, (2, 3): 3, (2, 4): 4, (3, 4): 5}
        for (i, j), rank in expected.items():
            self.assertEqual(pair_index(i, j, k), rank)
        with self.assertRaises(ValueError):
            pair_index(2, 2, 4)
        with self.assertRaises(ValueError):
            pair_index(3, 1, 4)


class TestRegression(unittest.TestCase):
    def test_argmax_and_ties(self):
        model = RegressionModel(3, "per-action", (
            ConstantRegressor(0.3), ConstantRegressor(0.7), ConstantRegressor(0.1)))
        self.assertEqual(model(np.zeros(1)), 2)
        self.assertEqual(argmax_policy(model, np.zeros(1)), 2)
        tied = RegressionModel(2, "per-action", (
            ConstantRegressor(0.5), ConstantRegressor(0.5)))
        self.assertEqual(tied(np.zeros(1)), 1)

    def test_constant_reward_fit(self):
        rng = np.random.default_rng(0)
        log = [PartialLabelExample(rng.normal(size=2), int(rng.integers(1, 4)),
                                   0.7, 3) for _ in range(30)]
        model = train_regression(log, least_squares)
        preds = model.predicted_rewards(np.array([0.3, -0.2]))
        for p in preds:
            self.assertAlmostEqual(p, 0.7, places=6)

    def test_unseen_action_gets_constant_zero(self):
        log = [PartialLabelExample((0.0,), 1, 1.0, 3)]
        model = train_regression(log, least_squares)
        self.assertIsInstance(model.regressors[2], ConstantRegressor)
        self.assertEqual(model.regressors[2](np.zeros(1)), 0.0)

    def test_single_mode_shares_one_regressor(self):
        log = [PartialLabelExample((float(i),), 1 + i % 2, float(i % 2), 2)
               for i in range(12)]
        model = train_regression(log, least_squares, mode="single")
        self.assertEqual(len(model.regressors), 1)
        self.assertIn(model(np.array([3.0])), (1, 2))

    def test_validation(self):
        with self.assertRaises(ValueError):
            train_regression([], least_squares)
        with self.assertRaises(ValueError):
            train_regression([PartialLabelExample((0.0,), 1, 1.0, 2)],
                             least_squares, mode="weird")
        mixed = [PartialLabelExample((0.0,), 1, 1.0, 2),
                 PartialLabelExample((0.0,), 1, 1.0, 3)]
        with self.assertRaises(ValueError):
            train_regression(mixed, least_squares)

    def test_table_regressor_recovers_exact_policy(self):
        prob = deterministic_problem(np.eye(4))
        model = train_regression(uniform_log(prob), table_regressor)
        self.assertAlmostEqual(policy_regret(model, prob), 0.0, places=12)


class TestAllPairs(unittest.TestCase):
    def test_vote_counting_frozen(self):
        # winners: 1v2 -> 1, 1v3 -> 3, 2v3 -> 3; votes (1, 0, 2)
        clfs = {
            (1, 2): lambda x: 1,
            (1, 3): lambda x: -1,
            (2, 3): lambda x: -1,
        }
        model = AllPairsModel(3, clfs)
        self.assertEqual(model(np.zeros(1)), 3)
        self.assertEqual(allpairs_predict(model, np.zeros(1)), 3)

    def test_all_prefer_lower_gives_action_one(self):
        clfs = {(i, j): (lambda x: 1) for i in range(1, 4) for j in range(i + 1, 5)}
        model = AllPairsModel(4, clfs)
        self.assertEqual(model(np.zeros(1)), 1)

    def test_k2_reduces_to_single_classifier(self):
        model = AllPairsModel(2, {(1, 2): lambda x: -1})
        self.assertEqual(model(np.zeros(1)), 2)

    def test_query_count_is_k_choose_2(self):
        calls = []

        def probe(pair):
            def f(x):
                calls.append(pair)
                return 1
            return f

        k = 5
        clfs = {(i, j): probe((i, j)) for i in range(1, k) for j in range(i + 1, k + 1)}
        AllPairsModel(k, clfs)(np.zeros(1))
        self.assertEqual(len(calls), k * (k - 1) // 2)


class TestTrainIWC(unittest.TestCase):
    def test_pair_classifier_inventory(self):
        prob = deterministic_problem(np.eye(4))
        model = train_iwc(uniform_log(prob), table_learner)
        self.assertEqual(len(model.pair_classifiers), 6)
        self.assertEqual(set(model.pair_classifiers),
                         {(i, j) for i in range(1, 4) for j in range(i + 1, 5)})

    def test_recovers_exact_policy_from_noiseless_log(self):
        for k in (2, 3, 4):
            prob = deterministic_problem(np.eye(k))
            model = train_iwc(uniform_log(prob), table_learner)
            self.assertAlmostEqual(policy_regret(model, prob), 0.0, places=12)

    def test_zero_reward_log_prefers_smallest_action(self):
        # every weight r/p is zero: all pair sets are empty after costing
        log = [PartialLabelExample((float(i),), 1 + i % 3, 0.0, 3)
               for i in range(9)]
        model = train_iwc(log, table_learner)
        self.assertEqual(model(np.array([0.0])), 1)

    def test_deterministic_per_seed(self):
        rng = np.random.default_rng(8)
        log = []
        for _ in range(60):
            x = rng.normal(size=2)
            a = int(rng.integers(1, 4))
            r = float(rng.random() > 0.5)
            log.append(PartialLabelExample(x, a, r, 3))
        learner = make_binary_learner("perceptron", seed=0, epochs=3)
        cfg = CostingConfig(draws=3, rng_seed=2)
        m1 = train_iwc(log, learner, cfg)
        m2 = train_iwc(log, learner, cfg)
        xs = rng.normal(size=(20, 2))
        self.assertEqual([m1(x) for x in xs], [m2(x) for x in xs])


if __name__ == "__main__":
    unittest.main()

import unittest

import numpy as np

from offsettree.core import WeightedBinaryExample
from offsettree.costing import (
    CostingConfig,
    IndexTaggedVoteClassifier,
    LabelDistribution,
    MajorityVoteClassifier,
    acceptance_masks,
    costing_train,
    expected_importance,
    induced_distribution,
    rejection_sample,
    weighted_bayes_error,
    weighted_error,
    weighted_regret,
)
from offsettree.learners import table_learner


def two_point_distribution():
    # point "a" is 3:1 toward +1, point "b" is pure -1
    return LabelDistribution({
        ("a", 1): 0.3,
        ("a", -1): 0.1,
        ("b", -1): 0.6,
    })


class TestLabelDistribution(unittest.TestCase):
    def test_point_mass_and_conditional(self):
        q = two_point_distribution()
        self.assertAlmostEqual(q.point_mass("a"), 0.4)
        cond = q.conditional("a")
        self.assertAlmostEqual(cond[1], 0.75)
        self.assertAlmostEqual(cond[-1], 0.25)
        self.assertEqual(set(q.points()), {"a", "b"})

    def test_conditional_of_unknown_point(self):
        q = two_point_distribution()
        with self.assertRaises(ValueError):
            q.conditional("zzz")

    def test_error_rate(self):
        q = two_point_distribution()
        always_plus = lambda point: 1
        # wrong on the 0.1 mass at "a" and the whole 0.6 at "b"
        self.assertAlmostEqual(q.error_rate(always_plus), 0.7)

    def test_bayes_error_and_regret(self):
        q = two_point_distribution()
        self.assertAlmostEqual(q.bayes_error(), 0.1)
        always_plus = lambda point: 1
        self.assertAlmostEqual(q.regret(always_plus), 0.6)
        bayes = lambda point: 1 if point == "a" else -1
        self.assertAlmostEqual(q.regret(bayes), 0.0)

    def test_masses_must_be_normalized(self):
        with self.assertRaises(ValueError):
            LabelDistribution({("a", 1): 0.5})
        # unless normalization is requested explicitly
        q = LabelDistribution({("a", 1): 0.5}, normalize=True)
        self.assertAlmostEqual(q.masses[("a", 1)], 1.0)
        with self.assertRaises(ValueError):
            LabelDistribution({})

    def test_allclose(self):
        q = two_point_distribution()
        r = LabelDistribution({
            ("a", 1): 0.3,
            ("a", -1): 0.1,
            ("b", -1): 0.6 + 1e-15,
        })
        self.assertTrue(q.allclose(r))
        self.assertFalse(q.allclose(LabelDistribution({("a", 1): 1.0})))


class TestWeightedSets(unittest.TestCase):
    def setUp(self):
        # (mass, point, label, weight)
        self.atoms = [
            (0.5, "a", 1, 2.0),
            (0.5, "a", -1, 1.0),
        ]

    def test_weighted_error_and_importance(self):
        always_plus = lambda point: 1
        self.assertAlmostEqual(weighted_error(always_plus, self.atoms), 0.5)
        self.assertAlmostEqual(expected_importance(self.atoms), 1.5)

    def test_induced_distribution_reweights(self):
        q = induced_distribution(self.atoms)
        self.assertAlmostEqual(q.conditional("a")[1], 2.0 / 3.0)
        self.assertAlmostEqual(q.expected_importance, 1.5)

    def test_induced_distribution_rejects_zero_mass(self):
        with self.assertRaises(ValueError):
            induced_distribution([(1.0, "a", 1, 0.0)])

    def test_reweighting_identity(self):
        # error on Q times expected importance equals importance-weighted loss
        q = induced_distribution(self.atoms)
        wbar = expected_importance(self.atoms)
        always_minus = lambda point: -1
        self.assertAlmostEqual(q.error_rate(always_minus) * wbar,
                               weighted_error(always_minus, self.atoms),
                               places=12)

    def test_weighted_regret_vs_bayes(self):
        always_plus = lambda point: 1
        reg = weighted_regret(always_plus, self.atoms)
        self.assertAlmostEqual(
            reg, weighted_error(always_plus, self.atoms) - weighted_bayes_error(self.atoms))
        self.assertGreaterEqual(reg, 0.0)
        # bayes picks +1 at "a": loses only the 0.5 * 1.0 mass
        self.assertAlmostEqual(weighted_bayes_error(self.atoms), 0.5)


class TestCostingConfig(unittest.TestCase):
    def test_defaults(self):
        cfg = CostingConfig()
        self.assertEqual(cfg.draws, 1)
        self.assertIsNone(cfg.normalizer)
        self.assertFalse(cfg.share_classifier)

    def test_validation(self):
        with self.assertRaises(ValueError):
            CostingConfig(draws=0)
        with self.assertRaises(ValueError):
            CostingConfig(normalizer=0.0)


class TestRejectionSampling(unittest.TestCase):
    def test_acceptance_masks_shape_and_determinism(self):
        cfg = CostingConfig(draws=3)
        m1 = acceptance_masks([1.0, 0.5, 0.0], cfg, seed_entropy=(4, 0))
        m2 = acceptance_masks([1.0, 0.5, 0.0], cfg, seed_entropy=(4, 0))
        self.assertEqual(len(m1), 3)
        self.assertTrue(all(a.shape == (3,) for a in m1))
        self.assertTrue(all(np.array_equal(a, b) for a, b in zip(m1, m2)))
        m3 = acceptance_masks([1.0, 0.5, 0.0], cfg, seed_entropy=(4, 1))
        self.assertFalse(all(np.array_equal(a, b) for a, b in zip(m1, m3)))

    def test_max_weight_always_accepted_zero_never(self):
        cfg = CostingConfig(draws=25, rng_seed=9)
        masks = np.array(acceptance_masks([2.0, 0.0], cfg, seed_entropy=(9, 0)))
        self.assertTrue(masks[:, 0].all())
        self.assertFalse(masks[:, 1].any())

    def test_equal_weights_accept_everything(self):
        cfg = CostingConfig(draws=5)
        masks = np.array(acceptance_masks([1.5, 1.5, 1.5], cfg, seed_entropy=(0, 0)))
        self.assertTrue(masks.all())

    def test_negative_weight_rejected(self):
        with self.assertRaises(ValueError):
            acceptance_masks([-1.0], CostingConfig(), seed_entropy=(0,))

    def test_explicit_normalizer_cap(self):
        cfg = CostingConfig(normalizer=4.0, draws=2000, rng_seed=1)
        masks = np.array(acceptance_masks([1.0], cfg, seed_entropy=(1, 0)))
        self.assertAlmostEqual(masks.mean(), 0.25, delta=0.03)
        with self.assertRaises(ValueError):
            acceptance_masks([5.0], cfg, seed_entropy=(1, 0))

    def test_rejection_sample_returns_label_sets(self):
        examples = [WeightedBinaryExample(np.array([float(i)]),
                                          1 if i % 2 == 0 else -1, 1.0)
                    for i in range(6)]
        cfg = CostingConfig(draws=2)
        sets = rejection_sample(examples, cfg, seed_entropy=(0,))
        self.assertEqual(len(sets), 2)
        # equal weights: every draw keeps the full set in original order
        for drawn in sets:
            self.assertEqual(len(drawn), 6)
            self.assertEqual([y for _, y in drawn], [1, -1, 1, -1, 1, -1])


class TestVoting(unittest.TestCase):
    def test_majority_vote_ties_go_plus(self):
        clf = MajorityVoteClassifier((lambda x: 1, lambda x: -1))
        self.assertEqual(clf(np.zeros(1)), 1)
        clf = MajorityVoteClassifier((lambda x: -1, lambda x: -1, lambda x: 1))
        self.assertEqual(clf(np.zeros(1)), -1)

    def test_index_tagged_vote_queries_each_index(self):
        seen = []

        def base(x):
            seen.append(float(x[-1]))
            return 1 if x[-1] < 2 else -1

        clf = IndexTaggedVoteClassifier(base, draws=3)
        self.assertEqual(clf(np.array([5.0])), 1)
        self.assertEqual(seen, [0.0, 1.0, 2.0])


class TestCostingTrain(unittest.TestCase):
    def setUp(self):
        self.examples = [
            WeightedBinaryExample(np.array([0.0]), 1, 1.0),
            WeightedBinaryExample(np.array([1.0]), -1, 1.0),
        ]

    def test_single_draw_returns_bare_classifier(self):
        clf = costing_train(self.examples, table_learner, CostingConfig(),
                            seed_entropy=(0, 0))
        self.assertEqual(clf(np.array([0.0])), 1)
        self.assertEqual(clf(np.array([1.0])), -1)
        self.assertNotIsInstance(clf, MajorityVoteClassifier)

    def test_multi_draw_votes(self):
        cfg = CostingConfig(draws=5)
        clf = costing_train(self.examples, table_learner, cfg, seed_entropy=(0, 0))
        self.assertIsInstance(clf, MajorityVoteClassifier)
        self.assertEqual(len(clf.members), 5)
        self.assertEqual(clf(np.array([1.0])), -1)

    def test_share_classifier_tags_resample_index(self):
        cfg = CostingConfig(draws=3, share_classifier=True)
        clf = costing_train(self.examples, table_learner, cfg, seed_entropy=(0, 0))
        self.assertIsInstance(clf, IndexTaggedVoteClassifier)
        self.assertEqual(clf(np.array([0.0])), 1)
        self.assertEqual(clf(np.array([1.0])), -1)

    def test_empty_training_set(self):
        clf = costing_train([], table_learner, CostingConfig(), seed_entropy=(0, 0))
        self.assertEqual(clf(np.zeros(1)), 1)


class TestAcceptanceFrequency(unittest.TestCase):
    def test_frequency_tracks_weight_over_normalizer(self):
        # seeded loop over a few weights, 20k draws each
        cfg = CostingConfig(draws=20000, rng_seed=3)
        for w, target in ((0.25, 0.25), (0.5, 0.5), (0.75, 0.75)):
            masks = np.array(acceptance_masks([w, 1.0], cfg, seed_entropy=(3, 0)))
            self.assertAlmostEqual(masks[:, 0].mean(), target, delta=0.02)


if __name__ == "__main__":
    unittest.main()

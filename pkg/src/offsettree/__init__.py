"""Learning and evaluating policies from partial (bandit) feedback.

The central algorithm reduces the k-action partial-label problem to binary
classification over a balanced tree of actions, with a policy-regret
guarantee of (k - 1) times the binary regret; the two-action special case,
the costing rejection-sampling layer, two classical baselines (reward
regression and importance-weighted all-pairs), exact bound-checking suites,
and an experiment harness round it out.
"""

from .baselines import (AllPairsModel, RegressionModel, allpairs_predict,
                        argmax_policy, train_iwc, train_regression)
from .binary_offset import (BinaryOffsetModel, induced_Q, offset_map,
                            train_binary_offset)
from .core import (Context, ExactProblem, PartialLabelExample,
                   WeightedBinaryExample, best_action, best_value,
                   deterministic_problem, estimate_value_ips, policy_regret,
                   policy_value)
from .costing import (CostingConfig, LabelDistribution, costing_train,
                      expected_importance, induced_distribution,
                      rejection_sample, weighted_error, weighted_regret)
from .dataio import (BanditLog, DataFormatError, MulticlassDataset,
                     read_bandit_log, read_multiclass, write_bandit_log,
                     write_multiclass)
from .harness import (ExperimentConfig, ExplorationSchedule, banditify,
                      banditify_dataset, exhaustive_log, lower_bound_problem,
                      run_offline_experiment, run_online_epoch_greedy,
                      sample_complexity_bounds, sample_complexity_trial)
from .learners import (BINARY_LEARNER_NAMES, REGRESSOR_NAMES,
                       averaged_perceptron, decision_stump, least_squares,
                       make_binary_learner, make_regressor, table_learner,
                       table_regressor)
from .offset_tree import (ActionTree, OffsetTreeModel, build_tree,
                          induced_Q_tree, max_queries, node_example,
                          node_example_counts, node_importances,
                          train_offset_tree)
from .serialize import load_model, model_from_json, model_to_json, save_model

__version__ = "0.1.0"

__all__ = [
    "AllPairsModel", "RegressionModel", "allpairs_predict", "argmax_policy",
    "train_iwc", "train_regression",
    "BinaryOffsetModel", "induced_Q", "offset_map", "train_binary_offset",
    "Context", "ExactProblem", "PartialLabelExample", "WeightedBinaryExample",
    "best_action", "best_value", "deterministic_problem", "estimate_value_ips",
    "policy_regret", "policy_value",
    "CostingConfig", "LabelDistribution", "costing_train", "expected_importance",
    "induced_distribution", "rejection_sample", "weighted_error", "weighted_regret",
    "BanditLog", "DataFormatError", "MulticlassDataset", "read_bandit_log",
    "read_multiclass", "write_bandit_log", "write_multiclass",
    "ExperimentConfig", "ExplorationSchedule", "banditify", "banditify_dataset",
    "exhaustive_log", "lower_bound_problem", "run_offline_experiment",
    "run_online_epoch_greedy", "sample_complexity_bounds", "sample_complexity_trial",
    "BINARY_LEARNER_NAMES", "REGRESSOR_NAMES", "averaged_perceptron",
    "decision_stump", "least_squares", "make_binary_learner", "make_regressor",
    "table_learner", "table_regressor",
    "ActionTree", "OffsetTreeModel", "build_tree", "induced_Q_tree",
    "max_queries", "node_example", "node_example_counts", "node_importances",
    "train_offset_tree",
    "load_model", "model_from_json", "model_to_json", "save_model",
    "__version__",
]

"""The offset tree: k-action partial feedback via a tournament of binary tests.

Actions sit at the leaves of a maximally balanced binary tree.  Each internal
node learns to predict which of its two input actions has the larger expected
reward, using the same offsetting trick as the two-action reduction but with
the conditional propensity of the observed action among the node's pair:

    weight = ((p(a) + p(a')) / p(a)) * |r_a - 1/2|

where a is the observed action and a' the node's other input.  A low reward
labels the example for the sibling's side, a high reward for the observed
action's side; rewards exactly at 1/2 yield nothing.  Nodes train from leaves
to root, and an example only reaches node v if every already-trained
classifier between its action's leaf and v routes that action upward.

Prediction walks root to leaf, so choosing among k actions costs exactly
(depth of the chosen leaf) <= ceil(log2 k) classifier queries, and the policy
regret is at most (k - 1) times the binary regret on the induced distribution
computed by `induced_Q_tree`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .core import ExactProblem, PartialLabelExample, WeightedBinaryExample, append_tags
from .costing import CostingConfig, LabelDistribution, costing_train
from .learners import ConstantClassifier

OFFSET = 0.5

LEFT, RIGHT = 1, -1


class TreeNode:
    """Internal tree node; children are TreeNode instances or leaf actions (int)."""

    __slots__ = ("left", "right", "index", "depth", "left_actions", "right_actions")

    def __init__(self, left, right):
        self.left = left
        self.right = right
        self.index = -1
        self.depth = 0
        self.left_actions = frozenset(_actions_below(left))
        self.right_actions = frozenset(_actions_below(right))

    @property
    def actions(self):
        return self.left_actions | self.right_actions

    def side_of(self, action: int) -> int:
        """LEFT or RIGHT depending on which child subtree holds `action`."""
        if action in self.left_actions:
            return LEFT
        if action in self.right_actions:
            return RIGHT
        raise ValueError(f"action {action} is not below this node")

    def __repr__(self):
        return f"TreeNode(index={self.index}, actions={sorted(self.actions)})"


def _actions_below(child) -> list[int]:
    if isinstance(child, TreeNode):
        return sorted(child.actions)
    return [child]


def _split_sizes(n: int) -> int:
    """Leaves assigned to the left child: deepest leaves leftmost."""
    if n == 2:
        return 1
    depth = (n - 1).bit_length()  # ceil(log2 n)
    half = 1 << (depth - 1)
    quarter = 1 << (depth - 2)
    return min(half, max(quarter, n - quarter))


@dataclass(frozen=True, eq=False)
class ActionTree:
    """Maximally balanced binary tree over actions 1..k.

    Leaf depths take at most two adjacent values and never decrease from left
    to right, so with k not a power of two the shallow leaves sit rightmost.
    `nodes` lists internal nodes in training order: leaves to root, and left
    to right within a depth; node indices follow that order (root is last).
    """

    k: int
    leaf_order: tuple[int, ...]
    root: TreeNode
    nodes: tuple[TreeNode, ...]
    routes: dict = field(repr=False)  # action -> ((node, side), ...) bottom-up

    def leaf_depths(self) -> dict[int, int]:
        """Depth of each action's leaf (root = depth 0)."""
        out: dict[int, int] = {}

        def walk(child, depth):
            if isinstance(child, TreeNode):
                walk(child.left, depth + 1)
                walk(child.right, depth + 1)
            else:
                out[child] = depth

        walk(self.root, 0)
        return out


def build_tree(k: int, leaf_order: Sequence[int] | None = None) -> ActionTree:
    """Deterministic balanced tree over k actions.

    leaf_order permutes which action sits at which leaf position (default
    identity); pairing actions with similar rewards can tighten the bound.
    """
    if k < 2:
        raise ValueError(f"need at least 2 actions, got k={k}")
    if leaf_order is None:
        order = tuple(range(1, k + 1))
    else:
        order = tuple(int(a) for a in leaf_order)
        if sorted(order) != list(range(1, k + 1)):
            raise ValueError(f"leaf_order must be a permutation of 1..{k}, got {leaf_order!r}")

    def build(leaves: Sequence[int], depth: int):
        if len(leaves) == 1:
            return leaves[0]
        cut = _split_sizes(len(leaves))
        node = TreeNode(build(leaves[:cut], depth + 1), build(leaves[cut:], depth + 1))
        node.depth = depth
        return node

    root = build(order, 0)
    # breadth-first, then deepest-first for the training order
    bfs: list[TreeNode] = []
    frontier = [root]
    while frontier:
        node = frontier.pop(0)
        bfs.append(node)
        frontier.extend(c for c in (node.left, node.right) if isinstance(c, TreeNode))
    bfs_order = {id(nd): j for j, nd in enumerate(bfs)}
    nodes = tuple(sorted(bfs, key=lambda nd: (-nd.depth, bfs_order[id(nd)])))
    for i, node in enumerate(nodes):
        node.index = i

    routes: dict[int, tuple] = {}
    for action in order:
        path = []
        for node in bfs:  # top-down ancestors of the leaf
            if action in node.actions:
                path.append((node, node.side_of(action)))
        path.reverse()  # bottom-up
        routes[action] = tuple(path)
    return ActionTree(k, order, root, nodes, routes)


def node_example(e: PartialLabelExample, v: TreeNode, a_prime: int,
                 use_propensities: bool = True) -> WeightedBinaryExample | None:
    """Binary example a logged interaction contributes at node v.

    `a_prime` is the node's other input (the tournament winner of the child
    subtree that does not contain e.action).  Label +1 means the left child
    side wins.  Returns None when the reward sits exactly at the offset.
    """
    a = e.action
    a_side = v.side_of(a)
    ap_side = v.side_of(a_prime)
    if a_side == ap_side:
        raise ValueError(f"actions {a} and {a_prime} come from the same side of the node")
    gap = e.reward - OFFSET
    if gap == 0.0:
        return None
    label = ap_side if gap < 0.0 else a_side
    if use_propensities:
        p_a = e.propensity(a)
        weight = ((p_a + e.propensity(a_prime)) / p_a) * abs(gap)
    else:
        weight = abs(gap)
    return WeightedBinaryExample(e.x, label, weight)


def subtree_winner(child, decide: Callable[[TreeNode, np.ndarray], int], x) -> int:
    """Tournament winner of a subtree: descend by classifier preference."""
    while isinstance(child, TreeNode):
        child = child.left if decide(child, x) == LEFT else child.right
    return child


def _routes_up(tree: ActionTree, decide, v: TreeNode, action: int, x) -> bool:
    """True when every trained node strictly below v routes `action` toward v."""
    for node, side in tree.routes[action]:
        if node is v:
            return True
        if decide(node, x) != side:
            return False
    raise ValueError(f"node {v!r} is not an ancestor of action {action}")


@dataclass(frozen=True, eq=False)
class OffsetTreeModel:
    """Trained offset tree policy.

    Per-node mode keeps one classifier per internal node.  Single-shared mode
    keeps one classifier consulted with the node index appended as a feature
    (the analysis-friendly variant; useful for bound checks).
    """

    tree: ActionTree
    node_classifiers: dict[int, Callable] | None = None
    shared_classifier: Callable | None = None
    n_features: int | None = None

    def __post_init__(self):
        if (self.node_classifiers is None) == (self.shared_classifier is None):
            raise ValueError("provide exactly one of node_classifiers / shared_classifier")

    def decide(self, node: TreeNode, x) -> int:
        if self.shared_classifier is not None:
            return int(self.shared_classifier(append_tags(x, node.index)))
        return int(self.node_classifiers[node.index](x))

    def predict(self, x) -> int:
        return subtree_winner(self.tree.root, self.decide, x)

    def __call__(self, x) -> int:
        return self.predict(x)


def train_offset_tree(examples: Sequence[PartialLabelExample], learner: Callable,
                      cfg: CostingConfig = CostingConfig(),
                      leaf_order: Sequence[int] | None = None,
                      use_propensities: bool = True,
                      share_nodes: bool = False) -> OffsetTreeModel:
    """Train node classifiers from leaves to root.

    Each node's weighted set holds only examples whose observed action the
    already-trained deeper classifiers route up to that node; the sibling
    input a' is recomputed per example from those same classifiers.  Costing
    turns each weighted set into unweighted sets for the learner, seeded per
    node so runs are reproducible.  With share_nodes, one classifier is
    instead trained on the union of all node sets tagged with the node index.
    """
    if not examples:
        raise ValueError("cannot train on an empty dataset")
    k = examples[0].k
    if any(e.k != k for e in examples):
        raise ValueError("all examples must agree on k")
    tree = build_tree(k, leaf_order)
    classifiers: dict[int, Callable] = {}

    def decide(node, x):
        return int(classifiers[node.index](x))

    tagged_union: list[WeightedBinaryExample] = []
    for v in tree.nodes:
        weighted = []
        for e in examples:
            if e.action not in v.actions:
                continue
            if not _routes_up(tree, decide, v, e.action, e.x):
                continue
            other_child = v.right if v.side_of(e.action) == LEFT else v.left
            a_prime = subtree_winner(other_child, decide, e.x)
            we = node_example(e, v, a_prime, use_propensities)
            if we is not None:
                weighted.append(we)
        if share_nodes:
            tagged_union.extend(
                WeightedBinaryExample(append_tags(w.x, v.index), w.label, w.weight)
                for w in weighted)
        if weighted:
            classifiers[v.index] = costing_train(
                weighted, learner, cfg, seed_entropy=(cfg.rng_seed, v.index))
        else:
            classifiers[v.index] = ConstantClassifier(LEFT)
    n_features = len(examples[0].x)
    if share_nodes:
        shared = costing_train(tagged_union, learner, cfg,
                               seed_entropy=(cfg.rng_seed, len(tree.nodes)))
        return OffsetTreeModel(tree, None, shared, n_features)
    return OffsetTreeModel(tree, classifiers, None, n_features)


def max_queries(k: int) -> int:
    """Classifier queries needed to pick among k actions: ceil(log2 k)."""
    return math.ceil(math.log2(k))


def node_example_counts(model: OffsetTreeModel,
                        examples: Sequence[PartialLabelExample]) -> list[int]:
    """Node examples each interaction contributed during training.

    Recomputed from the final classifiers; identical to the training pass
    because each node's routing only consults strictly deeper nodes, which
    never change afterwards.  Bounded by each action's leaf depth, hence by
    ceil(log2 k).
    """
    tree = model.tree
    counts = []
    for e in examples:
        c = 0
        for v in tree.nodes:
            if e.action not in v.actions:
                continue
            if not _routes_up(tree, model.decide, v, e.action, e.x):
                continue
            other_child = v.right if v.side_of(e.action) == LEFT else v.left
            a_prime = subtree_winner(other_child, model.decide, e.x)
            if node_example(e, v, a_prime) is not None:
                c += 1
        counts.append(c)
    return counts


def induced_Q_tree(problem: ExactProblem, tree: ActionTree,
                   node_classifiers: dict[int, Callable]) -> LabelDistribution:
    """Exact induced binary distribution over node-tagged examples.

    Enumerates (context, reward draw, node, observed input).  A node's two
    inputs under the given classifiers' routing are its tournament winners;
    the observed one is drawn with its conditional propensity
    p(b) / (p(a)+p(a')), nodes weigh equally, and each emission carries the
    offset weight.  Points are (context index, node index) pairs; labels are
    LEFT/RIGHT (+1/-1).  The masses do not depend on the propensities (the
    conditional-propensity factors cancel), which the tests verify.
    """
    decide = lambda node, x: int(node_classifiers[node.index](x))
    p = problem.propensities
    masses: dict[tuple, float] = {}
    total = 0.0
    n_nodes = len(tree.nodes)
    for i, ctx in enumerate(problem.contexts):
        for v in tree.nodes:
            left_in = subtree_winner(v.left, decide, ctx.x)
            right_in = subtree_winner(v.right, decide, ctx.x)
            psum = float(p[left_in - 1] + p[right_in - 1])
            for b, b_side, o_side in ((left_in, LEFT, RIGHT), (right_in, RIGHT, LEFT)):
                cond = float(p[b - 1]) / psum
                for q, rvec in ctx.rewards:
                    gap = float(rvec[b - 1]) - OFFSET
                    if gap == 0.0:
                        continue
                    label = o_side if gap < 0.0 else b_side
                    weight = (psum / float(p[b - 1])) * abs(gap)
                    mass = ctx.probability * (1.0 / n_nodes) * cond * q * weight
                    key = ((i, v.index), label)
                    masses[key] = masses.get(key, 0.0) + mass
                    total += mass
    if total <= 0.0:
        raise ValueError("induced distribution has no mass (every reward equals the offset)")
    return LabelDistribution({k_: m / total for k_, m in masses.items()},
                             expected_importance=total)


def node_importances(problem: ExactProblem, tree: ActionTree,
                     node_classifiers: dict[int, Callable]) -> tuple[dict, float]:
    """Per-(context, node) expected importance and its problem-wide sum.

    The per-node value is E[|r_a - 1/2| + |r_a' - 1/2|] over the reward draw,
    with (a, a') the node's inputs under the classifiers' routing; each is at
    most 1.  The returned total, E_D[sum over nodes], is the refined factor
    multiplying binary regret in the tree bound, itself at most k - 1.
    """
    decide = lambda node, x: int(node_classifiers[node.index](x))
    per_point: dict[tuple, float] = {}
    total = 0.0
    for i, ctx in enumerate(problem.contexts):
        for v in tree.nodes:
            left_in = subtree_winner(v.left, decide, ctx.x)
            right_in = subtree_winner(v.right, decide, ctx.x)
            imp = 0.0
            for q, rvec in ctx.rewards:
                imp += q * (abs(float(rvec[left_in - 1]) - OFFSET)
                            + abs(float(rvec[right_in - 1]) - OFFSET))
            per_point[(i, v.index)] = imp
            total += ctx.probability * imp
    return per_point, total

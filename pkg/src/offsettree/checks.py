"""Exhaustive and seeded verification suites for the regret bounds.

Every guarantee the library makes is checked here against brute-force
enumeration on small exact problems: the two-action bound (with its
tightness fixture and the offset-0 comparison), the tree bound in both its
(k-1) and refined per-node-importance forms, the regression and all-pairs
baseline bounds, propensity-independence of the induced distributions, and
the rejection-sampling reweighting identity.  The test suite and the
`regret-check` CLI subcommand both run these functions; they are written so
a reported violation pinpoints the failing case.

The two-action sweeps cover every problem with uniform context masses and
deterministic grid rewards by recombining per-context tables in numpy; the
tables themselves come from the library's own induced-distribution code on
single-context problems, and a seeded sample of cases is re-checked against
the literal enumeration path.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .baselines import AllPairsModel
from .binary_offset import classifier_policy, induced_Q
from .core import ExactProblem, deterministic_problem, policy_regret
from .costing import (CostingConfig, LabelDistribution, acceptance_masks,
                      induced_distribution, weighted_error)
from .offset_tree import (OffsetTreeModel, build_tree, induced_Q_tree,
                          node_importances)

REWARD_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)


@dataclass(frozen=True)
class BoundReport:
    """Outcome of one inequality suite.

    max_violation is max(lhs - bound) over all cases; negative means every
    case satisfied the bound with room to spare.  max_ratio is max(lhs/bound)
    over cases whose bound exceeds 1e-12.
    """

    name: str
    cases: int
    skipped: int
    max_violation: float
    max_ratio: float
    tol: float
    cross_check_diff: float | None = None

    @property
    def passed(self) -> bool:
        return self.max_violation <= self.tol

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = ""
        if self.cross_check_diff is not None:
            extra = f"  cross-check diff {self.cross_check_diff:.3g}"
        return (f"{status}  {self.name}: {self.cases} cases ({self.skipped} degenerate), "
                f"max ratio {self.max_ratio:.6f}, max violation {self.max_violation:.3g}{extra}")


@dataclass(frozen=True)
class AgreementReport:
    """Outcome of an exact-equality suite (two quantities must coincide)."""

    name: str
    cases: int
    max_diff: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_diff <= self.tol

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name}: {self.cases} cases, max diff {self.max_diff:.3g}"


class IndexClassifier:
    """A +-1 labeling of contexts identified by their index feature."""

    def __init__(self, signs):
        self.signs = tuple(int(s) for s in signs)

    def __call__(self, x) -> int:
        return self.signs[int(round(float(x[0])))]


class NodeSideClassifier:
    """One tree node's decision as a row of LEFT/RIGHT values per context."""

    def __init__(self, sides):
        self.sides = tuple(int(s) for s in sides)

    def __call__(self, x) -> int:
        return self.sides[int(round(float(x[0])))]


def index_problem(reward_vectors, propensities=None) -> ExactProblem:
    """Uniform-mass deterministic problem whose contexts are index features."""
    xs = [[float(i)] for i in range(len(reward_vectors))]
    return deterministic_problem(reward_vectors, xs=xs, propensities=propensities)


def all_sign_vectors(n: int):
    return list(itertools.product((1, -1), repeat=n))


def _pair_tables(offset: float) -> tuple[np.ndarray, ...]:
    """Per-(r1, r2) masses toward +1 and -1, from the library's induced_Q.

    Entry [i, j] describes the single-context problem with rewards
    (grid[i], grid[j]).  Masses are unnormalized (scaled by the expected
    importance), which is what the recombination over contexts needs.
    """
    g = len(REWARD_GRID)
    toward_plus = np.zeros((g, g))
    toward_minus = np.zeros((g, g))
    for i, r1 in enumerate(REWARD_GRID):
        for j, r2 in enumerate(REWARD_GRID):
            problem = index_problem([(r1, r2)])
            try:
                Q = induced_Q(problem, offset)
            except ValueError:
                continue  # no mass: both rewards equal the offset
            wbar = Q.expected_importance
            toward_plus[i, j] = Q.masses.get((0, 1), 0.0) * wbar
            toward_minus[i, j] = Q.masses.get((0, -1), 0.0) * wbar
    return toward_plus, toward_minus


def two_action_sweep(max_contexts: int = 4, offset: float = 0.5,
                     bound_factor: float = 1.0, tol: float = 1e-9,
                     cross_checks: int = 200, seed: int = 0) -> BoundReport:
    """Policy regret vs. bound_factor * binary regret, exhaustively.

    Covers every uniform-mass deterministic problem with 1..max_contexts
    contexts and grid rewards, against all 2^n context labelings.  Problems
    whose induced distribution has no mass must have zero policy regret and
    are counted as degenerate.
    """
    A_tab, B_tab = _pair_tables(offset)
    grid = np.array(REWARD_GRID)
    g = len(grid)
    max_violation = -np.inf
    max_ratio = 0.0
    cases = 0
    skipped = 0
    rng = np.random.default_rng(np.random.SeedSequence([seed, 41]))
    recheck: list[tuple] = []
    for n in range(1, max_contexts + 1):
        ids = np.stack(np.meshgrid(*([np.arange(g * g)] * n), indexing="ij"),
                       axis=-1).reshape(-1, n)
        i1, i2 = ids // g, ids % g
        r1, r2 = grid[i1], grid[i2]
        A = A_tab[i1, i2]
        B = B_tab[i1, i2]
        wbar = (A + B).mean(axis=1)
        best = np.maximum(r1, r2)
        eta_plus, eta_minus = best - r1, best - r2
        q_plus, q_minus = np.clip(B - A, 0.0, None), np.clip(A - B, 0.0, None)
        eta_base = eta_minus.sum(axis=1)
        eta_diff = eta_plus - eta_minus
        q_base = q_minus.sum(axis=1)
        q_diff = q_plus - q_minus
        degenerate = wbar == 0.0
        for signs in all_sign_vectors(n):
            mask = np.array(signs) == 1
            reg_eta = (eta_base + eta_diff[:, mask].sum(axis=1)) / n
            reg_q = (q_base + q_diff[:, mask].sum(axis=1)) / n
            if np.any(degenerate):
                if np.max(reg_eta[degenerate], initial=0.0) > tol:
                    raise AssertionError(
                        "zero-mass problem with positive policy regret")
            reg_e = np.divide(reg_q, wbar, out=np.zeros_like(reg_q),
                              where=~degenerate)
            bound = bound_factor * reg_e
            viol = reg_eta - bound
            max_violation = max(max_violation, float(viol[~degenerate].max()))
            pos = bound > 1e-12
            if np.any(pos):
                max_ratio = max(max_ratio, float((reg_eta[pos] / bound[pos]).max()))
            cases += int((~degenerate).sum())
            skipped += int(degenerate.sum())
            take = rng.random(len(ids)) < (cross_checks / (len(ids) * (2 ** n) * 4.0))
            for row in np.flatnonzero(take):
                recheck.append((list(zip(r1[row], r2[row])), signs,
                                float(reg_eta[row]), float(reg_e[row]),
                                bool(degenerate[row])))
    cross_diff = 0.0
    for rvs, signs, reg_eta_fast, reg_e_fast, degen in recheck:
        problem = index_problem(rvs)
        c = IndexClassifier(signs)
        reg_eta_lib = policy_regret(classifier_policy(c), problem)
        if degen:
            reg_e_lib = 0.0
        else:
            Q = induced_Q(problem, offset)
            reg_e_lib = Q.regret(lambda i: c.signs[i])
        cross_diff = max(cross_diff, abs(reg_eta_lib - reg_eta_fast),
                         abs(reg_e_lib - reg_e_fast))
    name = f"policy regret <= {bound_factor:g} * binary regret (offset {offset:g})"
    return BoundReport(name, cases, skipped, max_violation, max_ratio, tol,
                       cross_check_diff=cross_diff)


def tightness_fixture(v: float) -> tuple[float, float]:
    """(policy regret, binary regret) of the equality construction.

    Four uniform contexts, rewards (1, 0) everywhere, and a classifier wrong
    on a fraction v of the contexts: both regrets equal v exactly.
    """
    quarters = round(v * 4)
    if not (0 <= quarters <= 4 and abs(quarters - v * 4) < 1e-12):
        raise ValueError(f"v must be a multiple of 0.25 in [0, 1], got {v!r}")
    problem = index_problem([(1.0, 0.0)] * 4)
    c = IndexClassifier([-1] * quarters + [1] * (4 - quarters))
    reg_eta = policy_regret(classifier_policy(c), problem)
    reg_e = induced_Q(problem).regret(lambda i: c.signs[i])
    return reg_eta, reg_e


@dataclass(frozen=True)
class OffsetComparison:
    """Both offsets' bound values on one problem/classifier pair."""

    policy_regret: float
    bound_offset_half: float
    bound_offset_zero: float


def offset_comparison_fixture() -> OffsetComparison:
    """A case where the offset-1/2 bound is strictly tighter than offset-0.

    Rewards (1, 0) at four uniform contexts and the always-wrong classifier:
    the offset-1/2 bound equals the true regret 1, while dropping the offset
    doubles the bound to 2.
    """
    problem = index_problem([(1.0, 0.0)] * 4)
    c = IndexClassifier([-1] * 4)
    reg_eta = policy_regret(classifier_policy(c), problem)
    reg_half = induced_Q(problem, 0.5).regret(lambda i: c.signs[i])
    reg_zero = induced_Q(problem, 0.0).regret(lambda i: c.signs[i])
    return OffsetComparison(reg_eta, 1.0 * reg_half, 2.0 * reg_zero)


def _random_problem(rng, k: int, max_contexts: int) -> ExactProblem:
    n = int(rng.integers(1, max_contexts + 1))
    grid = np.array(REWARD_GRID)
    rvs = grid[rng.integers(0, len(grid), size=(n, k))]
    return index_problem([tuple(row) for row in rvs])


def tree_sweep(ks=(2, 3, 4, 8), problems_per_k: int = 25,
               assignments_per_problem: int = 40, max_contexts: int = 3,
               tol: float = 1e-9, seed: int = 0) -> BoundReport:
    """Tree policy regret vs. both forms of its binary-regret bound.

    For each k, seeded random grid problems and random node labelings; checks
    reg_eta <= (k-1) * reg_e and the refined per-node-importance form
    reg_eta <= (sum of expected node importances) * reg_e.
    """
    rng = np.random.default_rng(np.random.SeedSequence([seed, 7]))
    max_violation = -np.inf
    max_ratio = 0.0
    cases = 0
    skipped = 0
    for k in ks:
        tree = build_tree(k)
        for _ in range(problems_per_k):
            problem = _random_problem(rng, k, max_contexts)
            n_ctx = len(problem.contexts)
            for _ in range(assignments_per_problem):
                sides = rng.integers(0, 2, size=(k - 1, n_ctx)) * 2 - 1
                node_classifiers = {
                    v.index: NodeSideClassifier(sides[v.index]) for v in tree.nodes}
                model = OffsetTreeModel(tree, node_classifiers, None, 1)
                reg_eta = policy_regret(model, problem)
                try:
                    Q = induced_Q_tree(problem, tree, node_classifiers)
                except ValueError:
                    if reg_eta > tol:
                        raise AssertionError(
                            "zero-mass tree problem with positive policy regret")
                    skipped += 1
                    continue
                reg_e = Q.regret(lambda pt: int(sides[pt[1], pt[0]]))
                _, refined = node_importances(problem, tree, node_classifiers)
                for factor in (float(k - 1), refined):
                    bound = factor * reg_e
                    max_violation = max(max_violation, reg_eta - bound)
                    if bound > 1e-12:
                        max_ratio = max(max_ratio, reg_eta / bound)
                cases += 1
    return BoundReport("tree policy regret <= (k-1) and refined bounds",
                       cases, skipped, max_violation, max_ratio, tol)


def regression_regret(problem: ExactProblem, values: np.ndarray) -> float:
    """Squared-error regret of a value table under uniform logging.

    `values[i, a-1]` is the regressor's output at context i for action a.
    The Bayes regressor is the conditional mean reward, so the regret is the
    mean squared gap to it over D(x) times the uniform action draw.
    """
    total = 0.0
    for i, ctx in enumerate(problem.contexts):
        mean = ctx.mean_rewards
        total += ctx.probability * float(np.mean((values[i] - mean) ** 2))
    return total


def _argmax_table_policy(values: np.ndarray):
    def policy(x):
        return int(np.argmax(values[int(round(float(x[0])))])) + 1
    return policy


def regression_sweep(ks=(2, 3, 4), problems_per_k: int = 60,
                     tables_per_problem: int = 6, max_contexts: int = 3,
                     tol: float = 1e-9, seed: int = 0) -> BoundReport:
    """Argmax-policy regret vs. sqrt(2k * squared-error regret)."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, 13]))
    max_violation = -np.inf
    max_ratio = 0.0
    cases = 0
    for k in ks:
        for _ in range(problems_per_k):
            problem = _random_problem(rng, k, max_contexts)
            n_ctx = len(problem.contexts)
            for _ in range(tables_per_problem):
                values = rng.random((n_ctx, k))
                reg_eta = policy_regret(_argmax_table_policy(values), problem)
                bound = float(np.sqrt(2 * k * regression_regret(problem, values)))
                max_violation = max(max_violation, reg_eta - bound)
                if bound > 1e-12:
                    max_ratio = max(max_ratio, reg_eta / bound)
                cases += 1
    return BoundReport("argmax policy regret <= sqrt(2k * regression regret)",
                       cases, 0, max_violation, max_ratio, tol)


def midpoint_fixture(true_values=(0.5, 1.0, 0.0, 0.0), hedged: int = 1) -> tuple[float, float]:
    """(policy regret, bound) for the adversarial equality construction.

    The regressor answers the midpoint (v_a + v_a*)/2 on the hedged action a
    and the best action a*, and the truth elsewhere; the tie then resolves to
    the hedged action, and the bound holds with equality.
    """
    v = np.array(true_values, dtype=float)
    k = len(v)
    a_star = int(np.argmax(v)) + 1
    if hedged == a_star or v[hedged - 1] >= v[a_star - 1]:
        raise ValueError("hedged action must be strictly worse than the best")
    mid = (v[hedged - 1] + v[a_star - 1]) / 2.0
    others = np.delete(v, [hedged - 1, a_star - 1])
    if others.size and mid < others.max():
        raise ValueError("midpoint construction needs the hedged pair on top")
    if hedged > a_star:
        raise ValueError("hedged action must precede the best so the tie picks it")
    f = v.copy()
    f[hedged - 1] = mid
    f[a_star - 1] = mid
    problem = index_problem([tuple(v)])
    values = f[None, :]
    reg_eta = policy_regret(_argmax_table_policy(values), problem)
    bound = float(np.sqrt(2 * k * regression_regret(problem, values)))
    return reg_eta, bound


def _allpairs_binary_regret(problem: ExactProblem, prefs: np.ndarray) -> tuple[float, float]:
    """(binary regret on the induced pairwise distribution, multiclass mass).

    The induced distribution draws (x, y) with mass proportional to
    D(x) * E[r_y | x] (the importance weight 1/p cancels the draw of the
    logged action), then one of the k-1 pairs containing y uniformly; the
    binary label says whether y is the pair's smaller-index action.
    `prefs[q, i]` is the classifier's answer (+1: smaller index wins) for
    pair q at context i.
    """
    k = problem.k
    pairs = list(itertools.combinations(range(1, k + 1), 2))
    total = 0.0
    err = 0.0
    bayes = 0.0
    for i, ctx in enumerate(problem.contexts):
        mean = ctx.mean_rewards
        for q, (a, b) in enumerate(pairs):
            m_plus = ctx.probability * float(mean[a - 1]) / (k - 1)
            m_minus = ctx.probability * float(mean[b - 1]) / (k - 1)
            total += m_plus + m_minus
            err += m_minus if prefs[q, i] == 1 else m_plus
            bayes += min(m_plus, m_minus)
    if total <= 0.0:
        return 0.0, 0.0
    return (err - bayes) / total, total


class PairPrefClassifier:
    """One action pair's preference per context index (+1: smaller index)."""

    def __init__(self, row):
        self.row = tuple(int(s) for s in row)

    def __call__(self, x) -> int:
        return self.row[int(round(float(x[0])))]


def allpairs_sweep(ks=(2, 3), sampled_problems: int = 300,
                   sampled_contexts: int = 2, tol: float = 1e-9, seed: int = 0,
                   grid=(0.0, 0.5, 1.0)) -> BoundReport:
    """Pairwise-vote policy regret vs. k(k-1) * binary regret.

    Exhausts single-context grid problems against every pair labeling, then
    adds seeded multi-context problems.  The policy is the library's
    pairwise-vote model; the induced-distribution regret is computed in
    closed form.
    """
    max_violation = -np.inf
    max_ratio = 0.0
    cases = 0
    skipped = 0
    rng = np.random.default_rng(np.random.SeedSequence([seed, 19]))

    def run_case(problem: ExactProblem, prefs: np.ndarray, k: int):
        nonlocal max_violation, max_ratio, cases, skipped
        pairs = list(itertools.combinations(range(1, k + 1), 2))
        classifiers = {pair: PairPrefClassifier(prefs[q])
                       for q, pair in enumerate(pairs)}
        model = AllPairsModel(k, classifiers, 1)
        reg_eta = policy_regret(model, problem)
        reg_e, total = _allpairs_binary_regret(problem, prefs)
        if total == 0.0:
            if reg_eta > tol:
                raise AssertionError("zero-mass all-pairs problem with positive regret")
            skipped += 1
            return
        bound = k * (k - 1) * reg_e
        max_violation = max(max_violation, reg_eta - bound)
        if bound > 1e-12:
            max_ratio = max(max_ratio, reg_eta / bound)
        cases += 1

    grid = np.array(grid)
    for k in ks:
        n_pairs = k * (k - 1) // 2
        # exhaustive single-context family
        for rv in itertools.product(grid, repeat=k):
            problem = index_problem([tuple(float(r) for r in rv)])
            for signs in itertools.product((1, -1), repeat=n_pairs):
                prefs = np.array(signs).reshape(n_pairs, 1)
                run_case(problem, prefs, k)
        # seeded multi-context family
        for _ in range(sampled_problems):
            n_ctx = int(rng.integers(2, sampled_contexts + 1)) \
                if sampled_contexts >= 2 else 1
            rvs = grid[rng.integers(0, len(grid), size=(n_ctx, k))]
            problem = index_problem([tuple(row) for row in rvs])
            prefs = rng.integers(0, 2, size=(n_pairs, n_ctx)) * 2 - 1
            run_case(problem, prefs, k)
    return BoundReport("pairwise-vote policy regret <= k(k-1) * binary regret",
                       cases, skipped, max_violation, max_ratio, tol)


def _max_mass_diff(a: LabelDistribution, b: LabelDistribution) -> float:
    keys = set(a.masses) | set(b.masses)
    return max(abs(a.masses.get(key, 0.0) - b.masses.get(key, 0.0)) for key in keys)


def propensity_independence_report(seed: int = 0, tol: float = 1e-12) -> AgreementReport:
    """Induced distributions must not move when the logging policy changes.

    Two-action case: every grid problem with 1..2 contexts plus a seeded
    sample with 3..4 contexts, compared under two skewed propensity vectors.
    Tree case: seeded problems and node labelings for k in {2, 3, 4}.
    """
    rng = np.random.default_rng(np.random.SeedSequence([seed, 23]))
    max_diff = 0.0
    cases = 0
    grid = np.array(REWARD_GRID)

    def compare_binary(problem: ExactProblem):
        nonlocal max_diff, cases
        variants = [problem.with_propensities((0.3, 0.7)),
                    problem.with_propensities((0.85, 0.15))]
        try:
            base = induced_Q(problem)
        except ValueError:
            for alt in variants:
                try:
                    induced_Q(alt)
                    raise AssertionError("mass appeared under a different propensity")
                except ValueError:
                    pass
            return
        for alt in variants:
            max_diff = max(max_diff, _max_mass_diff(base, induced_Q(alt)))
            cases += 1

    for n in (1, 2):
        for flat in itertools.product(range(len(grid)), repeat=2 * n):
            rvs = [(float(grid[flat[2 * i]]), float(grid[flat[2 * i + 1]]))
                   for i in range(n)]
            compare_binary(index_problem(rvs))
    for n in (3, 4):
        for _ in range(100):
            rvs = grid[rng.integers(0, len(grid), size=(n, 2))]
            compare_binary(index_problem([tuple(row) for row in rvs]))

    for k in (2, 3, 4):
        tree = build_tree(k)
        base_p = np.arange(1, k + 1, dtype=float)
        p1 = tuple(base_p / base_p.sum())
        p2 = tuple(base_p[::-1] / base_p.sum())
        for _ in range(100):
            problem = _random_problem(rng, k, 3)
            n_ctx = len(problem.contexts)
            sides = rng.integers(0, 2, size=(k - 1, n_ctx)) * 2 - 1
            ncs = {v.index: NodeSideClassifier(sides[v.index]) for v in tree.nodes}
            try:
                base = induced_Q_tree(problem.with_propensities(p1), tree, ncs)
            except ValueError:
                continue
            alt = induced_Q_tree(problem.with_propensities(p2), tree, ncs)
            max_diff = max(max_diff, _max_mass_diff(base, alt))
            cases += 1
    return AgreementReport("induced distributions are propensity-independent",
                           cases, max_diff, tol)


def reweighting_identity_report(n_pairs: int = 120, seed: int = 0,
                                tol: float = 1e-12) -> AgreementReport:
    """error(Q) * expected importance == importance-weighted loss, exactly.

    Random finite weighted distributions (including zero weights and merged
    points) against random labelings of their points.
    """
    rng = np.random.default_rng(np.random.SeedSequence([seed, 29]))
    weight_grid = (0.0, 0.25, 0.5, 1.0, 1.5, 3.0)
    max_diff = 0.0
    cases = 0
    while cases < n_pairs:
        n_points = int(rng.integers(1, 7))
        atoms = []
        masses = rng.random(2 * n_points)
        masses /= masses.sum()
        m_idx = 0
        for pt in range(n_points):
            for label in (1, -1):
                w = float(weight_grid[rng.integers(0, len(weight_grid))])
                atoms.append((float(masses[m_idx]), pt, label, w))
                m_idx += 1
        if sum(m * w for m, _, _, w in atoms) <= 0.0:
            continue
        signs = rng.integers(0, 2, size=n_points) * 2 - 1
        classify = lambda pt: int(signs[pt])
        Q = induced_distribution(atoms)
        lhs = Q.error_rate(classify) * Q.expected_importance
        rhs = weighted_error(classify, atoms)
        max_diff = max(max_diff, abs(lhs - rhs))
        cases += 1
    return AgreementReport("error on Q times mean importance equals weighted loss",
                           cases, max_diff, tol)


def acceptance_frequency_report(draws: int = 100_000, seed: int = 0,
                                tol: float = 0.01) -> AgreementReport:
    """Empirical rejection-sampling acceptance rates vs. weight/normalizer."""
    weights = (0.0, 0.25, 0.5, 0.75, 1.0, 1.6, 2.0)
    cfg = CostingConfig(draws=draws, rng_seed=seed)
    masks = np.array(acceptance_masks(weights, cfg))
    freq = masks.mean(axis=0)
    target = np.array(weights) / max(weights)
    return AgreementReport("acceptance frequency matches weight / normalizer",
                           len(weights), float(np.max(np.abs(freq - target))), tol)


def run_all(seed: int = 0) -> list:
    """Every suite at its default size, in a stable order."""
    return [
        two_action_sweep(seed=seed),
        two_action_sweep(offset=0.0, bound_factor=2.0, seed=seed),
        tree_sweep(seed=seed),
        regression_sweep(seed=seed),
        allpairs_sweep(seed=seed),
        propensity_independence_report(seed=seed),
        reweighting_identity_report(seed=seed),
        acceptance_frequency_report(seed=seed),
    ]

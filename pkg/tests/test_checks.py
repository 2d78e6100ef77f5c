import numpy as np
import pytest

from offsettree.checks import (
    AgreementReport,
    BoundReport,
    IndexClassifier,
    all_sign_vectors,
    index_problem,
    midpoint_fixture,
    offset_comparison_fixture,
    regression_regret,
    tightness_fixture,
    two_action_sweep,
)


def test_report_pass_fail_logic():
    good = BoundReport("b", 10, 0, -1e-12, 0.9, 1e-9)
    bad = BoundReport("b", 10, 0, 1e-6, 1.1, 1e-9)
    assert good.passed and not bad.passed
    assert good.line().startswith("PASS")
    assert bad.line().startswith("FAIL")
    agree = AgreementReport("a", 5, 1e-13, 1e-12)
    assert agree.passed
    assert "max diff" in agree.line()


def test_index_classifier_reads_the_index_feature():
    c = IndexClassifier([1, -1, 1])
    assert c(np.array([0.0])) == 1
    assert c(np.array([1.0])) == -1


def test_index_problem_and_sign_vectors():
    prob = index_problem([(1.0, 0.0), (0.0, 1.0)])
    assert [tuple(c.x) for c in prob.contexts] == [(0.0,), (1.0,)]
    assert len(all_sign_vectors(3)) == 8


def test_tightness_fixture_hits_equality():
    for v in (0.0, 0.25, 0.5, 1.0):
        reg_eta, reg_e = tightness_fixture(v)
        assert reg_eta == pytest.approx(v, abs=1e-12)
        assert reg_eta == pytest.approx(reg_e, abs=1e-12)
    with pytest.raises(ValueError):
        tightness_fixture(0.3)


def test_offset_comparison_half_is_strictly_tighter():
    cmp = offset_comparison_fixture()
    assert cmp.policy_regret == pytest.approx(1.0)
    assert cmp.bound_offset_half == pytest.approx(1.0)
    assert cmp.bound_offset_zero == pytest.approx(2.0)
    assert cmp.bound_offset_half < cmp.bound_offset_zero


def test_regression_regret_of_exact_predictor_is_zero():
    prob = index_problem([(1.0, 0.0), (0.25, 0.75)])
    values = np.array([c.mean_rewards for c in prob.contexts])
    assert regression_regret(prob, values) == pytest.approx(0.0, abs=1e-15)
    off = values + 0.1
    assert regression_regret(prob, off) == pytest.approx(0.01, abs=1e-12)


def test_midpoint_fixture_equality():
    reg_eta, bound = midpoint_fixture()
    assert reg_eta == pytest.approx(0.5, abs=1e-12)
    assert bound == pytest.approx(reg_eta, abs=1e-9)


def test_small_sweep_passes():
    report = two_action_sweep(max_contexts=2, cross_checks=20, seed=1)
    assert report.passed
    assert report.cases > 0
    assert report.max_ratio <= 1.0 + 1e-9
    assert report.cross_check_diff <= 1e-9

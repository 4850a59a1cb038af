import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import multivariate_normal

from causaltree import GenerativeModel, llr, loglik, roc_curve, run_experiment
from causaltree.errors import ValidationError
from causaltree.io import reference_model
from causaltree.roc import approximations, trapezoid_auc
from conftest import cofactor_det, cofactor_inverse, random_model


def check_curve(c):
    assert c.thresholds[0] == -np.inf and c.thresholds[-1] == np.inf
    assert (c.fpr[0], c.tpr[0]) == (1.0, 1.0)
    assert (c.fpr[-1], c.tpr[-1]) == (0.0, 0.0)
    assert np.all(np.diff(c.thresholds) > 0)
    assert np.all(np.diff(c.fpr) <= 0) and np.all(np.diff(c.tpr) <= 0)
    assert c.auc == pytest.approx(trapezoid_auc(c.fpr, c.tpr), abs=1e-12)
    assert 0.0 <= c.auc <= 1.0


class TestLoglik:
    def test_standard_normal_mode(self):
        assert loglik(np.eye(1), [0.0]) == pytest.approx(-0.5 * math.log(2 * math.pi), rel=1e-14)
        assert loglik(np.eye(1), [0.0]) == pytest.approx(-0.9189385332, rel=1e-9)

    def test_two_dim(self):
        assert loglik(np.eye(2), [1.0, 1.0]) == pytest.approx(-1 - math.log(2 * math.pi), rel=1e-14)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_cofactor_oracle(self, rng, n):
        for _ in range(5):
            G = rng.normal(size=(n, n))
            K = G @ G.T + 0.3 * np.eye(n)
            x, y = rng.normal(size=n), rng.normal(size=n)
            Kinv = cofactor_inverse(K)
            direct = -0.5 * (x @ Kinv @ x + math.log(cofactor_det(K)) + n * math.log(2 * math.pi))
            assert loglik(K, x) == pytest.approx(direct, rel=1e-10)
            ratio = math.exp(-0.5 * (x @ Kinv @ x - y @ Kinv @ y))
            assert math.exp(loglik(K, x) - loglik(K, y)) == pytest.approx(ratio, rel=1e-10)

    def test_batch(self, rng):
        G = rng.normal(size=(4, 4))
        K = G @ G.T + np.eye(4)
        X = rng.normal(size=(7, 4))
        np.testing.assert_allclose(loglik(K, X), multivariate_normal(np.zeros(4), K).logpdf(X),
                                   rtol=1e-12)

    def test_dimension_check(self):
        with pytest.raises(ValidationError):
            loglik(np.eye(2), [1.0, 2.0, 3.0])


class TestLLR:
    def test_equal_models(self, rng):
        K = np.diag([1.0, 2.0])
        assert np.all(llr(rng.normal(size=(5, 2)), K, K) == 0.0)

    def test_antisymmetric(self, rng):
        A, B = np.diag([1.0, 2.0]), np.array([[1.0, 0.4], [0.4, 3.0]])
        x = rng.normal(size=2)
        assert llr(x, A, B) == pytest.approx(-llr(x, B, A), abs=1e-15)

    def test_scalar(self):
        assert llr([0.0], np.eye(1), 4 * np.eye(1)) == pytest.approx(-0.5 * math.log(4), rel=1e-14)


class TestRocCurve:
    def test_perfect_separation(self):
        c = roc_curve([0.0, 1.0], [2.0, 3.0])
        check_curve(c)
        assert c.auc == 1.0

    def test_ties(self):
        c = roc_curve([1.0, 1.0], [1.0, 1.0])
        check_curve(c)
        assert c.auc == 0.5

    @given(st.lists(st.floats(-5, 5), min_size=1, max_size=40),
           st.lists(st.floats(-5, 5), min_size=1, max_size=40))
    def test_invariants(self, s0, s1):
        c = roc_curve(s0, s1)
        check_curve(c)
        # AUC of a step ROC equals P(s1 > s0) + P(s1 == s0) / 2
        a, b = np.array(s0)[:, None], np.array(s1)[None, :]
        assert c.auc == pytest.approx(np.mean(b > a) + 0.5 * np.mean(b == a), abs=1e-12)

    @given(st.lists(st.integers(-4, 4), min_size=1, max_size=30),
           st.lists(st.integers(-4, 4), min_size=1, max_size=30))
    def test_label_swap(self, s0, s1):
        c = roc_curve(s0, s1)
        swapped = roc_curve(-np.array(s1, float), -np.array(s0, float))
        mapped = {(round(1 - t, 12), round(1 - f, 12)) for f, t in zip(c.fpr, c.tpr)}
        assert {(round(f, 12), round(t, 12)) for f, t in zip(swapped.fpr, swapped.tpr)} == mapped
        assert swapped.auc == pytest.approx(c.auc, abs=1e-12)

    def test_tpr_at(self):
        c = roc_curve([0.0, 1.0, 2.0, 3.0], [1.5, 2.5, 3.5, 4.5])
        assert c.tpr_at(0.0)[0] == 0.5
        assert c.tpr_at(0.5)[0] == 1.0
        assert c.tpr_at(1.0)[0] == 1.0

    def test_empty(self):
        with pytest.raises(ValidationError):
            roc_curve([], [1.0])


class TestExperiment:
    def test_identical_models(self, rng):
        model = random_model(rng, 3, 3)
        curves = run_experiment(model, model, trials=10_000, seed=0)
        assert list(curves) == ["full", "causal", "chowliu"]
        for c in curves.values():
            check_curve(c)
            assert 0.48 <= c.auc <= 0.52

    def test_deterministic(self, rng):
        m0, m1 = random_model(rng, 3, 2), random_model(rng, 3, 2)
        a = run_experiment(m0, m1, trials=500, seed=3)
        b = run_experiment(m0, m1, trials=500, seed=3)
        for k in a:
            np.testing.assert_array_equal(a[k].thresholds, b[k].thresholds)
            np.testing.assert_array_equal(a[k].tpr, b[k].tpr)
            assert a[k].auc == b[k].auc

    def test_own_tree_per_hypothesis(self):
        _, trees = approximations(reference_model("h0"), reference_model("h1"))
        t0, t1 = trees["causal"]
        assert t0.skeleton() != t1.skeleton()
        assert trees["chowliu"][0].node_count == 60

    def test_full_llr_dominates(self, rng):
        m0, m1 = random_model(rng, 3, 3, scale=0.5), random_model(rng, 3, 3, scale=0.5)
        curves = run_experiment(m0, m1, trials=10_000, seed=1)
        grid = np.linspace(0, 1, 101)
        full = curves["full"].tpr_at(grid)
        for name in ("causal", "chowliu"):
            assert np.all(full >= curves[name].tpr_at(grid) - 0.02), name

    def test_layout_mismatch(self, rng):
        with pytest.raises(ValidationError):
            run_experiment(random_model(rng, 2, 2), random_model(rng, 2, 3), trials=10)

    def test_zero_trials(self):
        m = GenerativeModel.lagged(2, 2, {1: [[0, 0.5], [0, 0]]})
        with pytest.raises(ValidationError):
            run_experiment(m, m, trials=0)

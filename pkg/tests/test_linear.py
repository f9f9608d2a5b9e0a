import numpy as np
import pytest

import wsnepi.regression.linear as linear_mod
from wsnepi.errors import ConfigInvalid, NonConvergence, SingularSystem
from wsnepi.regression import RegressorSpec, fit_linear_family


def soft_threshold_oracle(z, a):
    # Independent of the package's helper.
    if z > a:
        return z - a
    if z < -a:
        return z + a
    return 0.0


def orthonormal_design(rng, n=64, p=5):
    """Zero-mean columns with (1/n) X^T X = I."""
    A = rng.normal(size=(n, p))
    A -= A.mean(axis=0)
    Q, _ = np.linalg.qr(A)
    return np.sqrt(n) * Q


class TestOls:
    def test_exact_line_recovered(self):
        x = np.linspace(-3, 7, 25).reshape(-1, 1)
        y = 2.0 * x[:, 0]
        model = fit_linear_family(RegressorSpec("ols"), x, y)
        assert model.coef[0] == pytest.approx(2.0, abs=1e-10)
        assert model.intercept == pytest.approx(0.0, abs=1e-10)

    def test_matches_normal_equation_oracle(self, rng):
        X = rng.normal(size=(80, 4))
        y = rng.normal(size=80)
        model = fit_linear_family(RegressorSpec("ols"), X, y)
        # Oracle: solve the normal equations on an intercept-augmented design.
        A = np.column_stack([np.ones(80), X])
        beta = np.linalg.solve(A.T @ A, A.T @ y)
        assert model.intercept == pytest.approx(beta[0], abs=1e-8)
        assert np.allclose(model.coef, beta[1:], atol=1e-8)

    def test_weighted_fit_matches_weighted_normal_equations(self, rng):
        X = rng.normal(size=(60, 3))
        y = rng.normal(size=60)
        w = rng.uniform(0.2, 4.0, size=60)
        model = fit_linear_family(RegressorSpec("ols"), X, y, w)
        A = np.column_stack([np.ones(60), X])
        beta = np.linalg.solve(A.T @ (w[:, None] * A), A.T @ (w * y))
        assert model.intercept == pytest.approx(beta[0], abs=1e-8)
        assert np.allclose(model.coef, beta[1:], atol=1e-8)

    def test_rank_deficiency_raises_and_suggests_ridge(self, rng):
        x = rng.normal(size=(30, 1))
        X = np.column_stack([x, x])  # duplicated column
        with pytest.raises(SingularSystem, match="ridge"):
            fit_linear_family(RegressorSpec("ols"), X, x[:, 0])


class TestFamilyCollapses:
    def test_elastic_net_at_zero_l1_matches_closed_form_ridge(self, rng):
        for trial in range(5):
            X = rng.normal(size=(200, 6))
            y = X @ rng.normal(size=6) + rng.normal(scale=0.5, size=200)
            for alpha in (0.1, 0.5, 2.0):
                ridge = fit_linear_family(RegressorSpec("ridge", alpha=alpha), X, y)
                enet = fit_linear_family(
                    RegressorSpec("elastic_net", alpha=alpha, l1_ratio=0.0), X, y
                )
                assert np.max(np.abs(ridge.coef - enet.coef)) <= 1e-6
                assert abs(ridge.intercept - enet.intercept) <= 1e-6

    def test_elastic_net_at_full_l1_matches_lasso(self, rng):
        X = rng.normal(size=(100, 5))
        y = X @ np.array([1.0, 0.0, -2.0, 0.0, 0.5]) + rng.normal(scale=0.2, size=100)
        for alpha in (0.05, 0.3):
            lasso = fit_linear_family(RegressorSpec("lasso", alpha=alpha), X, y)
            enet = fit_linear_family(RegressorSpec("elastic_net", alpha=alpha, l1_ratio=1.0), X, y)
            assert np.max(np.abs(lasso.coef - enet.coef)) <= 1e-12
            assert lasso.intercept == enet.intercept

    def test_zero_alpha_lasso_matches_ols(self, rng):
        X = rng.normal(size=(50, 3))
        y = X @ np.array([2.0, -1.0, 0.5]) + rng.normal(scale=0.1, size=50)
        ols = fit_linear_family(RegressorSpec("ols"), X, y)
        lasso = fit_linear_family(RegressorSpec("lasso", alpha=0.0), X, y)
        assert np.max(np.abs(ols.coef - lasso.coef)) <= 1e-5


class TestLassoSoftThreshold:
    def test_orthonormal_design_closed_form(self, rng):
        X = orthonormal_design(rng)
        y = rng.normal(size=len(X)) * 3.0 + 1.0
        yc = y - y.mean()
        ols_coef = X.T @ yc / len(X)
        for alpha in (0.05, 0.2, 1.0):
            model = fit_linear_family(RegressorSpec("lasso", alpha=alpha), X, y)
            expected = [soft_threshold_oracle(z, alpha) for z in ols_coef]
            assert np.max(np.abs(model.coef - np.array(expected))) <= 1e-6

    def test_large_alpha_zeroes_everything(self, rng):
        X = rng.normal(size=(40, 4))
        y = rng.normal(size=40)
        model = fit_linear_family(RegressorSpec("lasso", alpha=1e6), X, y)
        assert np.all(model.coef == 0.0)
        assert model.intercept == pytest.approx(y.mean())

    def test_objective_non_increasing_across_sweeps(self, rng):
        X = rng.normal(size=(60, 8))
        y = X @ rng.normal(size=8) + rng.normal(size=60)
        model = fit_linear_family(RegressorSpec("lasso", alpha=0.2), X, y)
        hist = np.array(model.objective_history)
        assert np.all(np.diff(hist) <= 1e-12)


class TestWeights:
    @pytest.mark.parametrize("kind,alpha,l1", [
        ("ols", 0.0, 0.0), ("ridge", 0.7, 0.0), ("lasso", 0.1, 1.0), ("elastic_net", 0.3, 0.4),
    ])
    def test_doubling_weights_changes_nothing(self, rng, kind, alpha, l1):
        X = rng.normal(size=(70, 4))
        y = X @ rng.normal(size=4) + rng.normal(scale=0.3, size=70)
        w = rng.uniform(0.5, 2.0, size=70)
        spec = RegressorSpec(kind, alpha=alpha, l1_ratio=l1)
        a = fit_linear_family(spec, X, y, w)
        b = fit_linear_family(spec, X, y, 2.0 * w)
        assert np.max(np.abs(a.coef - b.coef)) <= 1e-12
        assert abs(a.intercept - b.intercept) <= 1e-12


class TestGuards:
    def test_non_convergence_raises_past_sweep_cap(self, rng, monkeypatch):
        monkeypatch.setattr(linear_mod, "CD_MAX_SWEEPS", 1)
        X = rng.normal(size=(50, 6))
        y = X @ rng.normal(size=6)
        with pytest.raises(NonConvergence):
            fit_linear_family(RegressorSpec("lasso", alpha=0.01), X, y)

    def test_negative_alpha_rejected(self, rng):
        with pytest.raises(ConfigInvalid, match="alpha"):
            fit_linear_family(RegressorSpec("ridge", alpha=-1.0), rng.normal(size=(5, 1)), np.ones(5))

    def test_wrong_kind_rejected(self, rng):
        with pytest.raises(ConfigInvalid, match="kind"):
            fit_linear_family(RegressorSpec("knn"), rng.normal(size=(5, 1)), np.ones(5))

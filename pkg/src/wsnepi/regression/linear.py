"""Penalized linear regression: OLS, ridge, lasso, elastic net.

One shared objective with (1/(2n)) data scaling:

    (1/(2n)) * sum_i w_i (y_i - b - x_i . beta)^2
        + alpha * (l1_ratio * ||beta||_1 + (1 - l1_ratio)/2 * ||beta||^2)

The intercept b is never penalized. Sample weights are normalized to mean
one, so scaling all weights by a constant changes nothing. OLS and ridge
solve directly (SVD least squares, ridge via penalty-augmented rows);
lasso and elastic net run cyclic coordinate descent with soft
thresholding.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigInvalid, NonConvergence, SingularSystem
from .specs import FittedModel, RegressorSpec

__all__ = ["LinearModel", "fit_linear_family", "soft_threshold"]

CD_TOL = 1e-6
CD_MAX_SWEEPS = 10_000


class LinearModel(FittedModel):
    def __init__(self, spec, coef: np.ndarray, intercept: float, objective_history=None):
        self.kind = spec.kind
        self.spec = spec
        self.coef = coef
        self.intercept = float(intercept)
        self.objective_history = objective_history or []

    def predict(self, X: np.ndarray) -> np.ndarray:
        return np.asarray(X, dtype=float) @ self.coef + self.intercept


def soft_threshold(z: float, threshold: float) -> float:
    return float(np.sign(z) * max(abs(z) - threshold, 0.0))


def _prepare(X, y, w):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n = len(y)
    w = np.ones(n) if w is None else np.asarray(w, dtype=float)
    w = w / w.mean()
    x_mean = (w @ X) / n
    y_mean = float(w @ y) / n
    return X - x_mean, y - y_mean, w, x_mean, y_mean


def fit_linear_family(spec: RegressorSpec, X, y, w=None) -> LinearModel:
    spec.check()
    Xc, yc, w, x_mean, y_mean = _prepare(X, y, w)
    n, p = Xc.shape
    history = None

    if spec.kind == "ols":
        coef = _solve_least_squares(Xc, yc, w, alpha_l2=0.0, require_full_rank=True)
    elif spec.kind == "ridge":
        coef = _solve_least_squares(Xc, yc, w, alpha_l2=spec.alpha, require_full_rank=False)
    elif spec.kind in ("lasso", "elastic_net"):
        l1_ratio = 1.0 if spec.kind == "lasso" else spec.l1_ratio
        coef, history = _coordinate_descent(Xc, yc, w, spec.alpha, l1_ratio)
    else:
        raise ConfigInvalid("kind", f"{spec.kind} is not a linear-family kind")

    intercept = y_mean - x_mean @ coef
    return LinearModel(spec, coef, intercept, history)


def _solve_least_squares(Xc, yc, w, alpha_l2: float, require_full_rank: bool) -> np.ndarray:
    n, p = Xc.shape
    sw = np.sqrt(w / n)
    A = sw[:, None] * Xc
    b = sw * yc
    if alpha_l2 > 0:
        A = np.vstack([A, np.sqrt(alpha_l2) * np.eye(p)])
        b = np.concatenate([b, np.zeros(p)])
    coef, _, rank, _ = np.linalg.lstsq(A, b, rcond=None)
    if require_full_rank and rank < p:
        raise SingularSystem(
            f"design is rank deficient ({rank} < {p}); add a ridge penalty (alpha > 0)"
        )
    return coef


def _objective(resid, w, coef, alpha, l1_ratio, n):
    data = float(w @ (resid * resid)) / (2.0 * n)
    pen = alpha * (l1_ratio * np.abs(coef).sum() + 0.5 * (1.0 - l1_ratio) * coef @ coef)
    return data + pen


def _coordinate_descent(Xc, yc, w, alpha, l1_ratio):
    n, p = Xc.shape
    WX = Xc * w[:, None]
    col_sq = (WX * Xc).sum(axis=0) / n
    shrink = alpha * l1_ratio
    denom = col_sq + alpha * (1.0 - l1_ratio)

    coef = np.zeros(p)
    resid = yc.copy()
    history = [_objective(resid, w, coef, alpha, l1_ratio, n)]
    for _ in range(CD_MAX_SWEEPS):
        max_delta = 0.0
        for j in range(p):
            old = coef[j]
            rho = WX[:, j] @ resid / n + col_sq[j] * old
            new = 0.0 if denom[j] == 0.0 else soft_threshold(rho, shrink) / denom[j]
            if new != old:
                resid -= (new - old) * Xc[:, j]
                coef[j] = new
                max_delta = max(max_delta, abs(new - old))
        history.append(_objective(resid, w, coef, alpha, l1_ratio, n))
        if max_delta <= CD_TOL:
            return coef, history
    raise NonConvergence(
        f"coordinate descent did not converge in {CD_MAX_SWEEPS} sweeps "
        f"(last max step {max_delta:.3e})"
    )

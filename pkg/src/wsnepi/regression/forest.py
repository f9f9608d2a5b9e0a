"""Random forest: bagged CART trees with per-split feature subsampling."""

from __future__ import annotations

import numpy as np

from .._rng import rng_for
from .specs import FittedModel, RegressorSpec
from .tree import grow_tree, predict_tree

__all__ = ["ForestModel", "fit_forest"]


class ForestModel(FittedModel):
    def __init__(self, spec, roots):
        self.kind = spec.kind
        self.spec = spec
        self.roots = roots

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        acc = np.zeros(len(X))
        for root in self.roots:
            acc += predict_tree(root, X)
        return acc / len(self.roots)


def fit_forest(spec: RegressorSpec, X, y, w=None) -> ForestModel:
    spec.check()
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = X.shape
    w = np.ones(n) if w is None else np.asarray(w, dtype=float)
    max_features = spec.feature_subsample if spec.feature_subsample is not None else max(1, p // 3)

    roots = []
    for t in range(spec.n_trees):
        rng = rng_for(spec.seed, t)
        if spec.bootstrap:
            idx = rng.integers(0, n, size=n)
            Xt, yt, wt = X[idx], y[idx], w[idx]
        else:
            Xt, yt, wt = X, y, w
        roots.append(grow_tree(Xt, yt, wt, spec, rng=rng, max_features=max_features))
    return ForestModel(spec, roots)

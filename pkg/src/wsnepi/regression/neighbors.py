"""k-nearest-neighbor regression (unweighted mean of neighbor targets)."""

from __future__ import annotations

import numpy as np

from ..errors import KTooLarge
from .specs import FittedModel, RegressorSpec

__all__ = ["KnnModel", "fit_knn"]


class KnnModel(FittedModel):
    def __init__(self, spec, X: np.ndarray, y: np.ndarray):
        self.kind = spec.kind
        self.spec = spec
        self.X = X
        self.y = y

    def predict(self, Q: np.ndarray) -> np.ndarray:
        Q = np.asarray(Q, dtype=float)
        # Squared Euclidean distances, queries by training rows.
        d2 = ((Q[:, None, :] - self.X[None, :, :]) ** 2).sum(axis=2)
        # Stable argsort breaks distance ties in favor of lower row index.
        order = np.argsort(d2, axis=1, kind="stable")[:, : self.spec.k]
        return self.y[order].mean(axis=1)


def fit_knn(spec: RegressorSpec, X, y) -> KnnModel:
    spec.check()
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if spec.k > len(y):
        raise KTooLarge(f"k={spec.k} exceeds {len(y)} training rows")
    return KnnModel(spec, X.copy(), y.copy())

"""CART regression trees.

Each node picks the (feature, threshold) minimizing the summed weighted
squared error of the two children; thresholds sit midway between
consecutive distinct sorted feature values. Ties resolve to the lowest
feature index, then the smallest threshold. Leaves predict the weighted
mean of their targets.
"""

from __future__ import annotations

import numpy as np

from .specs import FittedModel, RegressorSpec

__all__ = ["Node", "TreeModel", "fit_tree", "grow_tree", "predict_tree"]


class Node:
    __slots__ = ("feature", "threshold", "left", "right", "value")

    def __init__(self, value: float = 0.0):
        self.feature = -1
        self.threshold = 0.0
        self.left: Node | None = None
        self.right: Node | None = None
        self.value = value

    @property
    def is_leaf(self) -> bool:
        return self.left is None


def _best_split(X, y, w, features, min_leaf):
    """Least weighted-SSE split over the candidate features, or None."""
    n = len(y)
    best_score = np.inf
    best = None
    for j in features:
        order = np.argsort(X[:, j], kind="stable")
        xs = X[order, j]
        ys = y[order]
        ws = w[order]
        cw = np.cumsum(ws)
        cwy = np.cumsum(ws * ys)
        cwyy = np.cumsum(ws * ys * ys)
        total_w, total_wy, total_wyy = cw[-1], cwy[-1], cwyy[-1]

        cut = np.flatnonzero(xs[:-1] < xs[1:])  # split after sorted position i
        if min_leaf > 1:
            cut = cut[(cut + 1 >= min_leaf) & (n - cut - 1 >= min_leaf)]
        if cut.size == 0:
            continue
        lw, lwy, lwyy = cw[cut], cwy[cut], cwyy[cut]
        rw, rwy, rwyy = total_w - lw, total_wy - lwy, total_wyy - lwyy
        with np.errstate(divide="ignore", invalid="ignore"):
            score = (lwyy - lwy * lwy / lw) + (rwyy - rwy * rwy / rw)
        score = np.where((lw > 0) & (rw > 0), score, np.inf)
        k = int(np.argmin(score))  # first minimum: smallest threshold wins ties
        if score[k] < best_score:
            best_score = float(score[k])
            i = cut[k]
            best = (j, 0.5 * (xs[i] + xs[i + 1]))
    return best


def grow_tree(X, y, w, spec: RegressorSpec, depth: int = 0, rng=None, max_features=None) -> Node:
    n, p = X.shape
    node = Node(value=float(np.average(y, weights=w)))
    if spec.max_depth is not None and depth >= spec.max_depth:
        return node
    if n < spec.min_samples_split or n < 2:
        return node
    if np.all(y == y[0]):  # zero variance, exactly
        return node

    if max_features is not None and max_features < p:
        features = np.sort(rng.choice(p, size=max_features, replace=False))
    else:
        features = range(p)
    best = _best_split(X, y, w, features, spec.min_samples_leaf)
    if best is None:
        return node

    node.feature, node.threshold = best
    go_left = X[:, node.feature] <= node.threshold
    node.left = grow_tree(X[go_left], y[go_left], w[go_left], spec, depth + 1, rng, max_features)
    node.right = grow_tree(X[~go_left], y[~go_left], w[~go_left], spec, depth + 1, rng, max_features)
    return node


def predict_tree(root: Node, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    out = np.empty(len(X))

    def descend(node: Node, idx: np.ndarray):
        if node.is_leaf:
            out[idx] = node.value
            return
        go_left = X[idx, node.feature] <= node.threshold
        descend(node.left, idx[go_left])
        descend(node.right, idx[~go_left])

    descend(root, np.arange(len(X)))
    return out


class TreeModel(FittedModel):
    def __init__(self, spec, root: Node):
        self.kind = spec.kind
        self.spec = spec
        self.root = root

    def predict(self, X: np.ndarray) -> np.ndarray:
        return predict_tree(self.root, X)


def fit_tree(spec: RegressorSpec, X, y, w=None) -> TreeModel:
    spec.check()
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    w = np.ones(len(y)) if w is None else np.asarray(w, dtype=float)
    return TreeModel(spec, grow_tree(X, y, w, spec))

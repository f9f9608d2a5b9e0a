"""Gradient-boosted trees for squared loss with histogram split finding.

Features are pre-binned once into at most 256 quantile bins; each round
fits a shallow CART tree (default depth 3) to the current residuals using
per-bin histograms, then adds learning_rate times the tree. When a feature
has no more distinct values than bins, every distinct value gets its own
bin and split finding is exactly equivalent to unbinned CART: candidate
thresholds are midpoints between adjacent occupied bins' true value
ranges, so fitted trees carry real-valued thresholds and predict straight
from raw features.
"""

from __future__ import annotations

import numpy as np

from .specs import FittedModel, RegressorSpec
from .tree import Node, predict_tree

__all__ = ["GbtModel", "fit_gbt", "MAX_BINS"]

MAX_BINS = 256
DEFAULT_GBT_DEPTH = 3


class _BinnedFeatures:
    def __init__(self, X: np.ndarray, max_bins: int = MAX_BINS):
        n, p = X.shape
        self.codes = np.empty((n, p), dtype=np.int32)
        self.n_bins = np.empty(p, dtype=np.int64)
        self.bin_min = []
        self.bin_max = []
        for j in range(p):
            x = X[:, j]
            distinct = np.unique(x)
            if len(distinct) <= max_bins:
                edges = 0.5 * (distinct[:-1] + distinct[1:])
            else:
                qs = np.quantile(x, np.arange(1, max_bins) / max_bins)
                edges = np.unique(qs)
            codes = np.searchsorted(edges, x, side="left")
            nb = len(edges) + 1
            lo = np.full(nb, np.inf)
            hi = np.full(nb, -np.inf)
            np.minimum.at(lo, codes, x)
            np.maximum.at(hi, codes, x)
            self.codes[:, j] = codes
            self.n_bins[j] = nb
            self.bin_min.append(lo)
            self.bin_max.append(hi)


def _grow_histogram_tree(binned: _BinnedFeatures, X, r, w, idx, depth, max_depth, spec):
    node = Node(value=float(np.average(r[idx], weights=w[idx])))
    if depth >= max_depth or len(idx) < max(2, spec.min_samples_split):
        return node
    if np.all(r[idx] == r[idx[0]]):
        return node

    n_node = len(idx)
    wn = w[idx]
    rn = r[idx]
    best_score = np.inf
    best = None
    for j in range(binned.codes.shape[1]):
        b = binned.codes[idx, j]
        nb = int(binned.n_bins[j])
        cnt = np.bincount(b, minlength=nb)
        occ = np.flatnonzero(cnt)
        if occ.size < 2:
            continue
        sw = np.bincount(b, weights=wn, minlength=nb)
        swy = np.bincount(b, weights=wn * rn, minlength=nb)
        swyy = np.bincount(b, weights=wn * rn * rn, minlength=nb)
        ccnt = np.cumsum(cnt)
        cw = np.cumsum(sw)
        cwy = np.cumsum(swy)
        cwyy = np.cumsum(swyy)

        lefts = occ[:-1]
        nexts = occ[1:]
        lcnt = ccnt[lefts]
        valid = (lcnt >= spec.min_samples_leaf) & (n_node - lcnt >= spec.min_samples_leaf)
        if not np.any(valid):
            continue
        lw, lwy, lwyy = cw[lefts], cwy[lefts], cwyy[lefts]
        rw, rwy, rwyy = cw[-1] - lw, cwy[-1] - lwy, cwyy[-1] - lwyy
        with np.errstate(divide="ignore", invalid="ignore"):
            score = (lwyy - lwy * lwy / lw) + (rwyy - rwy * rwy / rw)
        score = np.where(valid & (lw > 0) & (rw > 0), score, np.inf)
        k = int(np.argmin(score))  # first minimum: smallest threshold on ties
        if score[k] < best_score:
            best_score = float(score[k])
            best = (j, 0.5 * (binned.bin_max[j][lefts[k]] + binned.bin_min[j][nexts[k]]))
    if best is None:
        return node

    node.feature, node.threshold = best
    go_left = X[idx, node.feature] <= node.threshold
    node.left = _grow_histogram_tree(binned, X, r, w, idx[go_left], depth + 1, max_depth, spec)
    node.right = _grow_histogram_tree(binned, X, r, w, idx[~go_left], depth + 1, max_depth, spec)
    return node


class GbtModel(FittedModel):
    def __init__(self, spec, base_value: float, stages, learning_rate: float, train_mse_history):
        self.kind = spec.kind
        self.spec = spec
        self.base_value = base_value
        self.stages = stages
        self.learning_rate = learning_rate
        self.train_mse_history = train_mse_history

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        out = np.full(len(X), self.base_value)
        for root in self.stages:
            out += self.learning_rate * predict_tree(root, X)
        return out


def fit_gbt(spec: RegressorSpec, X, y, w=None) -> GbtModel:
    spec.check()
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n = len(y)
    w = np.ones(n) if w is None else np.asarray(w, dtype=float)
    max_depth = spec.max_depth if spec.max_depth is not None else DEFAULT_GBT_DEPTH

    binned = _BinnedFeatures(X)
    base = float(np.average(y, weights=w))
    pred = np.full(n, base)
    idx_all = np.arange(n)
    stages = []
    history = []
    for _ in range(spec.n_rounds):
        resid = y - pred
        root = _grow_histogram_tree(binned, X, resid, w, idx_all, 0, max_depth, spec)
        pred = pred + spec.learning_rate * predict_tree(root, X)
        stages.append(root)
        history.append(float(np.mean((y - pred) ** 2)))
    return GbtModel(spec, base, stages, spec.learning_rate, history)

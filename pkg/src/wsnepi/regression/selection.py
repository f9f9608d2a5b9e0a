"""Model fitting dispatch, k-fold grid search, and the benchmark driver."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .._rng import rng_for
from ..dataset import Dataset
from ..dataprep import split_and_weight
from ..errors import ConfigInvalid, FitFailed, WsnEpiError
from .boosting import fit_gbt
from .forest import fit_forest
from .linear import fit_linear_family
from .metrics import EvalReport, evaluate
from .neighbors import fit_knn
from .specs import FittedModel, RegressorSpec
from .tree import fit_tree

__all__ = ["fit_model", "kfold_validation_indices", "CvEntry", "GridSearchResult",
           "grid_search", "benchmark"]


def fit_model(spec: RegressorSpec, X, y, w=None) -> FittedModel:
    """Fit one model, timing the fit alone (no data loading, no scoring).

    KNN has no use for sample weights and ignores them.
    """
    spec.check()
    start = time.perf_counter()
    if spec.kind in ("ols", "ridge", "lasso", "elastic_net"):
        model = fit_linear_family(spec, X, y, w)
    elif spec.kind == "knn":
        model = fit_knn(spec, X, y)
    elif spec.kind == "tree":
        model = fit_tree(spec, X, y, w)
    elif spec.kind == "forest":
        model = fit_forest(spec, X, y, w)
    elif spec.kind == "gbt":
        model = fit_gbt(spec, X, y, w)
    else:
        raise ConfigInvalid("kind", f"unknown regressor kind {spec.kind!r}")
    model.training_time_s = time.perf_counter() - start
    return model


def kfold_validation_indices(n: int, folds: int, seed: int) -> list[np.ndarray]:
    """Seeded shuffle split into `folds` near-equal validation chunks."""
    perm = rng_for(seed).permutation(n)
    return [np.sort(chunk) for chunk in np.array_split(perm, folds)]


@dataclass
class CvEntry:
    spec: RegressorSpec
    fold_mses: list[float]
    mean_mse: float


@dataclass
class GridSearchResult:
    best_spec: RegressorSpec
    best_model: FittedModel
    table: list[CvEntry]


def grid_search(grid: list[RegressorSpec], X, y, folds: int = 5, seed: int = 0) -> GridSearchResult:
    """Score every spec by mean validation MSE over a seeded k-fold
    partition; ties go to the earliest grid position. The winner is refit
    on all of X, y."""
    if not grid:
        raise ConfigInvalid("grid", "grid must not be empty")
    if folds < 2:
        raise ConfigInvalid("folds", "must be >= 2")
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    parts = kfold_validation_indices(len(y), folds, seed)

    table = []
    for spec in grid:
        fold_mses = []
        for fold, val_idx in enumerate(parts):
            mask = np.ones(len(y), dtype=bool)
            mask[val_idx] = False
            try:
                model = fit_model(spec, X[mask], y[mask])
            except WsnEpiError as e:
                raise FitFailed(spec, fold, e) from e
            err = y[val_idx] - model.predict(X[val_idx])
            fold_mses.append(float(np.mean(err * err)))
        table.append(CvEntry(spec=spec, fold_mses=fold_mses, mean_mse=float(np.mean(fold_mses))))

    best = 0
    for k, entry in enumerate(table):
        if entry.mean_mse < table[best].mean_mse:
            best = k
    best_spec = table[best].spec
    return GridSearchResult(best_spec=best_spec, best_model=fit_model(best_spec, X, y), table=table)


def benchmark(
    data: Dataset,
    target: str,
    roster: list[RegressorSpec],
    val_fraction: float = 0.2,
    seed: int = 0,
    weighting: str = "none",
    identifiers: tuple[str, ...] = ("run_id",),
    feature_columns: list[str] | None = None,
) -> list[EvalReport]:
    """Fit every roster entry on one shared train/validation split of the
    dataset and report timed train and validation metrics, in roster order.

    Features default to every column that is neither the target nor an
    identifier.
    """
    data.index(target)
    if feature_columns is None:
        skip = set(identifiers) | {target}
        feature_columns = [c for c in data.columns if c not in skip]
    else:
        for c in feature_columns:
            data.index(c)
    if target in feature_columns:
        raise ConfigInvalid("target", "target cannot also be a feature")

    train, val = split_and_weight(data, val_fraction, seed, weighting=weighting, target=target)
    X_train = train.take_columns(feature_columns).values
    X_val = val.take_columns(feature_columns).values
    y_train = train.col(target)
    y_val = val.col(target)

    reports = []
    for spec in roster:
        model = fit_model(spec, X_train, y_train, train.weights)
        reports.append(
            EvalReport(
                algorithm=spec.display_name,
                spec=spec,
                training_time_s=model.training_time_s,
                train=evaluate(model, X_train, y_train),
                val=evaluate(model, X_val, y_val),
            )
        )
    return reports

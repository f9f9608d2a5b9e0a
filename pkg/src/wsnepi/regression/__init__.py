"""From-scratch regression algorithms, metrics, and model selection."""

from .boosting import GbtModel, fit_gbt
from .forest import ForestModel, fit_forest
from .linear import LinearModel, fit_linear_family, soft_threshold
from .metrics import EvalReport, MetricBlock, evaluate, metric_block
from .neighbors import KnnModel, fit_knn
from .selection import (
    CvEntry,
    GridSearchResult,
    benchmark,
    fit_model,
    grid_search,
    kfold_validation_indices,
)
from .specs import KINDS, FittedModel, RegressorSpec
from .tree import TreeModel, fit_tree

__all__ = [
    "KINDS",
    "RegressorSpec",
    "FittedModel",
    "LinearModel",
    "KnnModel",
    "TreeModel",
    "ForestModel",
    "GbtModel",
    "MetricBlock",
    "EvalReport",
    "CvEntry",
    "GridSearchResult",
    "fit_linear_family",
    "fit_knn",
    "fit_tree",
    "fit_forest",
    "fit_gbt",
    "fit_model",
    "soft_threshold",
    "evaluate",
    "metric_block",
    "grid_search",
    "kfold_validation_indices",
    "benchmark",
]

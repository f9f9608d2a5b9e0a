"""Regressor specifications and the fitted-model interface."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from ..errors import ConfigInvalid

__all__ = ["KINDS", "RegressorSpec", "FittedModel"]

KINDS = ("ols", "ridge", "lasso", "elastic_net", "knn", "tree", "forest", "gbt")


@dataclass(frozen=True)
class RegressorSpec:
    """One algorithm plus its hyperparameters.

    Fields irrelevant to a kind are simply ignored by its fitter (alpha
    means nothing to a tree), which keeps grids and rosters uniform.
    """

    kind: str
    alpha: float = 0.0
    l1_ratio: float = 0.0
    k: int = 5
    max_depth: int | None = None
    min_samples_leaf: int = 1
    min_samples_split: int = 2
    n_trees: int = 100
    learning_rate: float = 0.1
    n_rounds: int = 100
    feature_subsample: int | None = None
    bootstrap: bool = True
    seed: int = 0
    label: str | None = None

    def check(self) -> None:
        if self.kind not in KINDS:
            raise ConfigInvalid("kind", f"unknown regressor kind {self.kind!r}")
        if self.alpha < 0:
            raise ConfigInvalid("alpha", "must be >= 0")
        if not 0.0 <= self.l1_ratio <= 1.0:
            raise ConfigInvalid("l1_ratio", "must be in [0, 1]")
        if self.k < 1:
            raise ConfigInvalid("k", "must be >= 1")
        if self.max_depth is not None and self.max_depth < 1:
            raise ConfigInvalid("max_depth", "must be >= 1 or unset")
        if self.min_samples_leaf < 1:
            raise ConfigInvalid("min_samples_leaf", "must be >= 1")
        if self.min_samples_split < 1:
            raise ConfigInvalid("min_samples_split", "must be >= 1")
        if self.n_trees < 1:
            raise ConfigInvalid("n_trees", "must be >= 1")
        # 0 is admitted as the degenerate frozen ensemble (predicts the mean).
        if not 0.0 <= self.learning_rate <= 1.0:
            raise ConfigInvalid("learning_rate", "must be in [0, 1]")
        if self.n_rounds < 1:
            raise ConfigInvalid("n_rounds", "must be >= 1")
        if self.feature_subsample is not None and self.feature_subsample < 1:
            raise ConfigInvalid("feature_subsample", "must be >= 1 or unset")

    @property
    def display_name(self) -> str:
        return self.label if self.label else self.kind

    def to_dict(self) -> dict:
        return asdict(self)


class FittedModel:
    """Base for fitted regressors: immutable after fit, deterministic
    predictions, wall-clock fit time recorded by the dispatcher."""

    kind: str = ""
    spec: RegressorSpec | None = None
    training_time_s: float = 0.0

    def predict(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

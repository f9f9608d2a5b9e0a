"""Regression error metrics and the per-algorithm evaluation report."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import TooFewRows
from .specs import FittedModel, RegressorSpec

__all__ = ["MetricBlock", "EvalReport", "evaluate", "metric_block"]


@dataclass
class MetricBlock:
    """Error metrics for one (model, split) pair.

    r2 is None when the target is constant (the statistic is undefined
    there; a flag travels with the report instead of a NaN). mape_pct
    averages over rows with nonzero targets only; the excluded row count is
    reported.
    """

    r2: float | None
    mae: float
    mse: float
    rmse: float
    mape_pct: float | None
    n: int
    zero_target_rows: int
    constant_target: bool

    def to_dict(self) -> dict:
        return dict(vars(self))


@dataclass
class EvalReport:
    algorithm: str
    spec: RegressorSpec
    training_time_s: float
    train: MetricBlock
    val: MetricBlock

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "spec": self.spec.to_dict(),
            "training_time_s": self.training_time_s,
            "train": self.train.to_dict(),
            "val": self.val.to_dict(),
        }

    @staticmethod
    def from_dict(doc: dict) -> "EvalReport":
        return EvalReport(
            algorithm=doc["algorithm"],
            spec=RegressorSpec(**doc["spec"]),
            training_time_s=doc["training_time_s"],
            train=MetricBlock(**doc["train"]),
            val=MetricBlock(**doc["val"]),
        )


def metric_block(y: np.ndarray, y_hat: np.ndarray) -> MetricBlock:
    y = np.asarray(y, dtype=float)
    y_hat = np.asarray(y_hat, dtype=float)
    if len(y) < 2:
        raise TooFewRows("evaluation needs at least 2 rows")
    err = y - y_hat
    mae = float(np.mean(np.abs(err)))
    sse = float(err @ err)
    mse = sse / len(y)
    rmse = math.sqrt(mse)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    constant = ss_tot == 0.0
    r2 = None if constant else 1.0 - sse / ss_tot
    nonzero = y != 0.0
    zero_rows = int(np.sum(~nonzero))
    if np.any(nonzero):
        # Near-denormal targets can push single ratios to inf; that is an
        # honest huge percentage error, not an invalid state.
        with np.errstate(over="ignore"):
            mape = float(100.0 * np.mean(np.abs(err[nonzero]) / np.abs(y[nonzero])))
    else:
        mape = None
    return MetricBlock(
        r2=r2, mae=mae, mse=mse, rmse=rmse, mape_pct=mape,
        n=len(y), zero_target_rows=zero_rows, constant_target=constant,
    )


def evaluate(model: FittedModel, X: np.ndarray, y: np.ndarray) -> MetricBlock:
    return metric_block(y, model.predict(X))

"""Dataset cleaning, profiling, and transformation.

Everything here is a pure function over immutable datasets: the input is
never mutated and the same input with the same arguments always produces
the same output. Fitted transforms (scaler, power transform) serialize to
JSON so they can be fitted on training data and replayed on validation
data.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from ._rng import rng_for
from .dataset import Dataset
from .errors import (
    ConfigInvalid,
    DegenerateColumn,
    EmptySplit,
    SchemaMismatch,
    TooFewRows,
    UnknownColumn,
)

__all__ = [
    "ColumnProfile",
    "Alert",
    "ProfileReport",
    "Scaler",
    "PowerTransform",
    "merge_and_rename",
    "profile",
    "clean",
    "standard_scale",
    "yeo_johnson",
    "zscore_filter",
    "split_and_weight",
    "inverse_decile_weights",
    "transform_from_dict",
]


# ---------------------------------------------------------------------------
# merging

def merge_and_rename(sheets: list[Dataset], renames: dict[str, str]) -> Dataset:
    """Apply the column renames to every sheet, then concatenate rows in
    sheet order. All sheets must share one column set after renaming."""
    if not sheets:
        raise SchemaMismatch("no sheets to merge")
    renamed = [
        Dataset([renames.get(c, c) for c in sheet.columns], sheet.values)
        for sheet in sheets
    ]
    first = renamed[0]
    want = set(first.columns)
    for k, sheet in enumerate(renamed[1:], start=1):
        have = set(sheet.columns)
        if have != want:
            odd = sorted(want.symmetric_difference(have))
            raise SchemaMismatch(f"sheet {k} column set differs: {odd}")
    aligned = [first.values] + [sheet.take_columns(first.columns).values for sheet in renamed[1:]]
    return Dataset(list(first.columns), np.vstack(aligned))


# ---------------------------------------------------------------------------
# profiling

@dataclass
class ColumnProfile:
    name: str
    count: int
    mean: float
    std: float
    skewness: float
    zero_fraction: float
    missing_count: int
    constant: bool


@dataclass
class Alert:
    kind: str  # high_correlation | high_skew | constant_column
    columns: tuple[str, ...]
    value: float | None


@dataclass
class ProfileReport:
    columns: list[ColumnProfile]
    correlation: np.ndarray
    alerts: list[Alert]

    def to_dict(self) -> dict:
        return {
            "columns": [vars(c) for c in self.columns],
            "correlation": [[float(x) for x in row] for row in self.correlation],
            "alerts": [
                {"kind": a.kind, "columns": list(a.columns), "value": a.value}
                for a in self.alerts
            ],
        }


def _skewness(x: np.ndarray) -> float:
    centered = x - x.mean()
    m2 = float(np.mean(centered**2))
    if m2 == 0.0:
        return 0.0
    m3 = float(np.mean(centered**3))
    return m3 / m2**1.5


def profile(d: Dataset, corr_threshold: float = 0.9, skew_threshold: float = 2.0) -> ProfileReport:
    """Column statistics, pairwise Pearson correlations, and alerts.

    Constant columns get correlation 0 against everything (never NaN) plus
    a constant_column note.
    """
    if d.n_rows < 2:
        raise TooFewRows(f"profile needs >= 2 rows, got {d.n_rows}")
    values = d.values
    n, p = values.shape
    means = values.mean(axis=0)
    stds = values.std(axis=0)
    constant = stds == 0.0

    centered = values - means
    cov = centered.T @ centered / n
    denom = np.outer(stds, stds)
    with np.errstate(divide="ignore", invalid="ignore"):
        corr = np.where(denom > 0, cov / np.where(denom > 0, denom, 1.0), 0.0)
    corr = np.clip(corr, -1.0, 1.0)
    np.fill_diagonal(corr, 1.0)

    columns = [
        ColumnProfile(
            name=d.columns[j],
            count=n,
            mean=float(means[j]),
            std=float(stds[j]),
            skewness=_skewness(values[:, j]),
            zero_fraction=float(np.mean(values[:, j] == 0.0)),
            missing_count=0,
            constant=bool(constant[j]),
        )
        for j in range(p)
    ]

    alerts: list[Alert] = []
    for i in range(p):
        for j in range(i + 1, p):
            if abs(corr[i, j]) >= corr_threshold and not (constant[i] or constant[j]):
                alerts.append(Alert("high_correlation", (d.columns[i], d.columns[j]), float(corr[i, j])))
    for c in columns:
        if abs(c.skewness) >= skew_threshold:
            alerts.append(Alert("high_skew", (c.name,), c.skewness))
    for c in columns:
        if c.constant:
            alerts.append(Alert("constant_column", (c.name,), None))
    return ProfileReport(columns=columns, correlation=corr, alerts=alerts)


# ---------------------------------------------------------------------------
# cleaning

def _round_half_away(values: np.ndarray, decimals: int) -> np.ndarray:
    scale = 10.0**decimals
    return np.copysign(np.floor(np.abs(values) * scale + 0.5), values) / scale


def clean(d: Dataset, ops: list[dict]) -> Dataset:
    """Apply cleaning ops in the given order.

    Supported ops: drop_columns(columns), drop_all_zero_rows,
    round(decimals), drop_rows_where(column, predicate in {is_zero}).
    """
    out = d
    for op in ops:
        name = op.get("op")
        if name == "drop_columns":
            targets = list(op["columns"])
            for c in targets:
                out.index(c)  # raises UnknownColumn
            keep = [c for c in out.columns if c not in set(targets)]
            out = out.take_columns(keep)
        elif name == "drop_all_zero_rows":
            keep_rows = np.flatnonzero(np.any(out.values != 0.0, axis=1))
            out = out.take_rows(keep_rows)
        elif name == "round":
            decimals = int(op["decimals"])
            out = Dataset(list(out.columns), _round_half_away(out.values, decimals), out.weights)
        elif name == "drop_rows_where":
            predicate = op.get("predicate", "is_zero")
            if predicate != "is_zero":
                raise ConfigInvalid("predicate", f"unsupported predicate {predicate!r}")
            col = out.col(op["column"])
            out = out.take_rows(np.flatnonzero(col != 0.0))
        else:
            raise ConfigInvalid("op", f"unknown clean op {name!r}")
    return out


# ---------------------------------------------------------------------------
# scaling

@dataclass
class Scaler:
    """Per-column standardization z = (x - mean) / std with population std.

    Constant columns scale with divisor 1 (so they map to 0) and are noted
    at fit time with a warning.
    """

    columns: list[str]
    means: np.ndarray
    scales: np.ndarray

    def apply(self, d: Dataset) -> Dataset:
        values = d.values.copy()
        for j, name in enumerate(self.columns):
            k = d.index(name)
            values[:, k] = (values[:, k] - self.means[j]) / self.scales[j]
        return Dataset(list(d.columns), values, d.weights)

    def invert(self, d: Dataset) -> Dataset:
        values = d.values.copy()
        for j, name in enumerate(self.columns):
            k = d.index(name)
            values[:, k] = values[:, k] * self.scales[j] + self.means[j]
        return Dataset(list(d.columns), values, d.weights)

    def to_dict(self) -> dict:
        return {
            "kind": "standard_scale",
            "columns": list(self.columns),
            "means": [float(x) for x in self.means],
            "scales": [float(x) for x in self.scales],
        }


def standard_scale(fit: Dataset, columns: list[str] | None = None) -> Scaler:
    columns = list(fit.columns) if columns is None else list(columns)
    means = np.empty(len(columns))
    scales = np.empty(len(columns))
    for j, name in enumerate(columns):
        x = fit.col(name)
        means[j] = x.mean()
        std = x.std()
        if std == 0.0:
            warnings.warn(f"column {name!r} is constant; scaling it to 0", stacklevel=2)
            std = 1.0
        scales[j] = std
    return Scaler(columns=columns, means=means, scales=scales)


# ---------------------------------------------------------------------------
# power transform

_LAMBDA_LO, _LAMBDA_HI = -5.0, 5.0
_LAMBDA_TOL = 1e-5
_EPS = 1e-12


def _yj_forward(x: np.ndarray, lam: float) -> np.ndarray:
    out = np.empty_like(x, dtype=float)
    pos = x >= 0
    if abs(lam) > _EPS:
        out[pos] = (np.power(x[pos] + 1.0, lam) - 1.0) / lam
    else:
        out[pos] = np.log1p(x[pos])
    two = 2.0 - lam
    if abs(two) > _EPS:
        out[~pos] = -(np.power(1.0 - x[~pos], two) - 1.0) / two
    else:
        out[~pos] = -np.log1p(-x[~pos])
    return out


def _yj_inverse(y: np.ndarray, lam: float) -> np.ndarray:
    out = np.empty_like(y, dtype=float)
    pos = y >= 0
    if abs(lam) > _EPS:
        out[pos] = np.power(y[pos] * lam + 1.0, 1.0 / lam) - 1.0
    else:
        out[pos] = np.expm1(y[pos])
    two = 2.0 - lam
    if abs(two) > _EPS:
        out[~pos] = 1.0 - np.power(1.0 - y[~pos] * two, 1.0 / two)
    else:
        out[~pos] = -np.expm1(-y[~pos])
    return out


def _yj_loglik(x: np.ndarray, lam: float) -> float:
    psi = _yj_forward(x, lam)
    var = float(psi.var())
    if not np.isfinite(var) or var <= 0.0:
        return -math.inf
    n = len(x)
    return -0.5 * n * math.log(var) + (lam - 1.0) * float(np.sum(np.sign(x) * np.log1p(np.abs(x))))


def _golden_max(f, lo: float, hi: float, tol: float) -> float:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


@dataclass
class PowerTransform:
    """Yeo-Johnson transform with per-column lambda fitted by maximizing
    the profile log-likelihood over [-5, 5]."""

    columns: list[str]
    lambdas: np.ndarray

    def apply(self, d: Dataset) -> Dataset:
        values = d.values.copy()
        for j, name in enumerate(self.columns):
            k = d.index(name)
            values[:, k] = _yj_forward(values[:, k], float(self.lambdas[j]))
        return Dataset(list(d.columns), values, d.weights)

    def invert(self, d: Dataset) -> Dataset:
        values = d.values.copy()
        for j, name in enumerate(self.columns):
            k = d.index(name)
            values[:, k] = _yj_inverse(values[:, k], float(self.lambdas[j]))
        return Dataset(list(d.columns), values, d.weights)

    def to_dict(self) -> dict:
        return {
            "kind": "yeo_johnson",
            "columns": list(self.columns),
            "lambdas": [float(x) for x in self.lambdas],
        }


def yeo_johnson(fit: Dataset, columns: list[str] | None = None) -> PowerTransform:
    columns = list(fit.columns) if columns is None else list(columns)
    lambdas = np.empty(len(columns))
    for j, name in enumerate(columns):
        x = fit.col(name)
        if len(x) < 3:
            raise TooFewRows(f"column {name!r} needs >= 3 values to fit a power transform")
        if x.std() == 0.0:
            raise DegenerateColumn(name)
        lambdas[j] = _golden_max(lambda lam: _yj_loglik(x, lam), _LAMBDA_LO, _LAMBDA_HI, _LAMBDA_TOL)
    return PowerTransform(columns=columns, lambdas=lambdas)


def transform_from_dict(doc: dict) -> Scaler | PowerTransform:
    kind = doc.get("kind")
    if kind == "standard_scale":
        return Scaler(
            columns=list(doc["columns"]),
            means=np.asarray(doc["means"], dtype=float),
            scales=np.asarray(doc["scales"], dtype=float),
        )
    if kind == "yeo_johnson":
        return PowerTransform(
            columns=list(doc["columns"]),
            lambdas=np.asarray(doc["lambdas"], dtype=float),
        )
    raise ConfigInvalid("kind", f"unknown transform kind {kind!r}")


# ---------------------------------------------------------------------------
# outliers and splitting

def zscore_filter(d: Dataset, columns: list[str] | None = None, threshold: float = 3.0) -> Dataset:
    """Drop rows where any listed column sits more than `threshold`
    population standard deviations from its mean.

    Single pass: means and deviations come from the data before any removal.
    A constant column removes nothing.
    """
    columns = list(d.columns) if columns is None else list(columns)
    keep = np.ones(d.n_rows, dtype=bool)
    for name in columns:
        x = d.col(name)
        mu = x.mean()
        sigma = x.std()
        keep &= np.abs(x - mu) <= threshold * sigma
    return d.take_rows(np.flatnonzero(keep))


def inverse_decile_weights(values: np.ndarray) -> np.ndarray:
    """Row weights n / (10 * count of the row's bin), with the value range
    cut into 10 equal-width bins. Rare target ranges weigh more."""
    values = np.asarray(values, dtype=float)
    n = len(values)
    lo = values.min()
    hi = values.max()
    if hi == lo:
        idx = np.zeros(n, dtype=np.int64)
    else:
        width = (hi - lo) / 10.0
        idx = np.clip(np.floor((values - lo) / width).astype(np.int64), 0, 9)
    counts = np.bincount(idx, minlength=10)
    return n / (10.0 * counts[idx])


def split_and_weight(
    d: Dataset,
    val_fraction: float,
    seed: int,
    weighting: str = "none",
    target: str | None = None,
) -> tuple[Dataset, Dataset]:
    """Seeded shuffle, then split: the last round(n * val_fraction) shuffled
    rows become the validation set. Optional inverse-frequency decile
    weights on the training target attach to the train side only."""
    if not 0.0 < val_fraction < 1.0:
        raise ConfigInvalid("val_fraction", "must be in (0, 1)")
    if weighting not in ("none", "inverse_frequency_deciles"):
        raise ConfigInvalid("weighting", f"unknown weighting {weighting!r}")
    n = d.n_rows
    n_val = int(math.floor(n * val_fraction + 0.5))
    if n_val < 1 or n_val > n - 1:
        raise EmptySplit(f"val_fraction {val_fraction} leaves an empty side for n={n}")
    perm = rng_for(seed).permutation(n)
    train = d.take_rows(perm[: n - n_val])
    val = d.take_rows(perm[n - n_val:])
    if weighting == "inverse_frequency_deciles":
        if target is None:
            raise ConfigInvalid("target", "weighting needs a target column")
        train = Dataset(list(train.columns), train.values, inverse_decile_weights(train.col(target)))
    val = Dataset(list(val.columns), val.values, None)
    return train, val

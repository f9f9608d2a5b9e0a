"""Rectangular named-column numeric tables.

The table is the unit of exchange between the sweep harness, the
preprocessing operations, and the regression suite. Cells are float64;
optional per-row sample weights ride along in memory but are never
serialized.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from ._text import format_cell
from .errors import DatasetError, UnknownColumn

__all__ = ["Dataset", "load_dataset"]


@dataclass
class Dataset:
    columns: list[str]
    values: np.ndarray
    weights: np.ndarray | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2:
            raise DatasetError("values must be a 2-D array")
        if len(self.columns) != self.values.shape[1]:
            raise DatasetError(
                f"{len(self.columns)} column names for {self.values.shape[1]} value columns"
            )
        if len(set(self.columns)) != len(self.columns):
            seen, dupes = set(), set()
            for c in self.columns:
                (dupes if c in seen else seen).add(c)
            raise DatasetError(f"duplicate column names: {sorted(dupes)}")
        if self.weights is not None:
            self.weights = np.asarray(self.weights, dtype=float)
            if self.weights.shape != (self.values.shape[0],):
                raise DatasetError("weights length must match row count")

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]

    def index(self, name: str) -> int:
        try:
            return self.columns.index(name)
        except ValueError:
            raise UnknownColumn(name) from None

    def col(self, name: str) -> np.ndarray:
        return self.values[:, self.index(name)]

    def take_rows(self, idx: np.ndarray) -> "Dataset":
        w = self.weights[idx] if self.weights is not None else None
        return Dataset(list(self.columns), self.values[idx], w)

    def take_columns(self, names: list[str]) -> "Dataset":
        cols = [self.index(n) for n in names]
        return Dataset(list(names), self.values[:, cols], self.weights)

    def copy(self) -> "Dataset":
        w = self.weights.copy() if self.weights is not None else None
        return Dataset(list(self.columns), self.values.copy(), w)

    def to_csv(self, path: str) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(self.columns)
            for row in self.values:
                writer.writerow([format_cell(x) for x in row])


def load_dataset(path: str) -> Dataset:
    """Read a one-header CSV (comma separated, dot decimals) into a Dataset.

    Every cell must parse as a finite number.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetError(f"{path}: empty file") from None
        rows = []
        for lineno, raw in enumerate(reader, start=2):
            if not raw:
                continue
            if len(raw) != len(header):
                raise DatasetError(f"{path}:{lineno}: expected {len(header)} cells, got {len(raw)}")
            try:
                rows.append([float(x) for x in raw])
            except ValueError as e:
                raise DatasetError(f"{path}:{lineno}: {e}") from None
    values = np.array(rows, dtype=float) if rows else np.empty((0, len(header)))
    if not np.all(np.isfinite(values)):
        bad = np.argwhere(~np.isfinite(values))[0]
        raise DatasetError(f"{path}: non-finite cell at row {bad[0] + 1}, column {header[bad[1]]}")
    return Dataset(columns=header, values=values)

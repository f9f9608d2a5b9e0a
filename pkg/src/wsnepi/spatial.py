"""Binned radius search over 2-D points.

Points are hashed into square cells with side equal to the query radius, so
every point within the radius of a query lies in the query's own cell or one
of its eight neighbors. Behavior is required to match a brute-force all-pairs
scan exactly; binning only prunes candidates, never rejects them.
"""

from __future__ import annotations

import numpy as np

__all__ = ["SpatialHash"]

_OFFSETS = [(dx, dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1)]


class SpatialHash:
    def __init__(self, points: np.ndarray, cell_size: float):
        if cell_size <= 0:
            raise ValueError("cell_size must be positive")
        self.points = np.asarray(points, dtype=float).reshape(-1, 2)
        self.cell_size = float(cell_size)
        cells = np.floor(self.points / self.cell_size).astype(np.int64)
        if len(cells):
            self._origin = cells.min(axis=0)
            shifted = cells - self._origin
            self._nx = int(shifted[:, 0].max()) + 1
            self._ny = int(shifted[:, 1].max()) + 1
            keys = shifted[:, 0] * self._ny + shifted[:, 1]
            self._order = np.argsort(keys, kind="stable")
            self._sorted_keys = keys[self._order]
        else:
            self._origin = np.zeros(2, dtype=np.int64)
            self._nx = self._ny = 0
            self._order = np.empty(0, dtype=np.int64)
            self._sorted_keys = np.empty(0, dtype=np.int64)

    def pairs_within(self, queries: np.ndarray, radius: float) -> tuple[np.ndarray, np.ndarray]:
        """All (query index, point index) pairs with distance <= radius.

        Requires radius <= cell_size, otherwise the 3x3 cell neighborhood
        could miss points.
        """
        if radius > self.cell_size:
            raise ValueError("radius exceeds cell size")
        queries = np.asarray(queries, dtype=float).reshape(-1, 2)
        nq = len(queries)
        if nq == 0 or len(self.points) == 0:
            return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)

        qcells = np.floor(queries / self.cell_size).astype(np.int64) - self._origin
        r2 = float(radius) * float(radius)
        owners_out = []
        points_out = []
        for dx, dy in _OFFSETS:
            cx = qcells[:, 0] + dx
            cy = qcells[:, 1] + dy
            valid = (cx >= 0) & (cx < self._nx) & (cy >= 0) & (cy < self._ny)
            keys = np.where(valid, cx * self._ny + cy, 0)
            left = np.searchsorted(self._sorted_keys, keys, side="left")
            right = np.searchsorted(self._sorted_keys, keys, side="right")
            lens = np.where(valid, right - left, 0)
            total = int(lens.sum())
            if total == 0:
                continue
            # Expand [left_i, left_i + lens_i) ranges into one flat index vector.
            owners = np.repeat(np.arange(nq), lens)
            flat = np.repeat(left, lens) + np.arange(total) - np.repeat(np.cumsum(lens) - lens, lens)
            cand = self._order[flat]
            d2 = (queries[owners, 0] - self.points[cand, 0]) ** 2 + (
                queries[owners, 1] - self.points[cand, 1]
            ) ** 2
            keep = d2 <= r2
            owners_out.append(owners[keep])
            points_out.append(cand[keep])
        if not owners_out:
            return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
        return np.concatenate(owners_out), np.concatenate(points_out)

    def counts_within(self, queries: np.ndarray, radius: float) -> np.ndarray:
        """Number of stored points within radius of each query point."""
        owners, _ = self.pairs_within(queries, radius)
        return np.bincount(owners, minlength=len(np.asarray(queries).reshape(-1, 2)))

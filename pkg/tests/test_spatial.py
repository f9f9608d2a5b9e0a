import numpy as np
import pytest

from wsnepi.spatial import SpatialHash


def brute_force_pairs(queries, points, radius):
    out = set()
    for qi, q in enumerate(queries):
        for pi, p in enumerate(points):
            if (q[0] - p[0]) ** 2 + (q[1] - p[1]) ** 2 <= radius * radius:
                out.add((qi, pi))
    return out


def as_pair_set(owners, cands):
    return set(zip(owners.tolist(), cands.tolist()))


class TestSpatialHash:
    def test_matches_brute_force_on_random_worlds(self, rng):
        for _ in range(40):
            n = int(rng.integers(1, 120))
            radius = float(rng.uniform(0.5, 5.0))
            points = rng.uniform(-20, 20, size=(n, 2))
            queries = rng.uniform(-22, 22, size=(int(rng.integers(1, 80)), 2))
            grid = SpatialHash(points, cell_size=radius)
            got = as_pair_set(*grid.pairs_within(queries, radius))
            assert got == brute_force_pairs(queries, points, radius)

    def test_boundary_distance_is_inclusive(self):
        grid = SpatialHash(np.array([[0.0, 0.0]]), cell_size=2.0)
        owners, cands = grid.pairs_within(np.array([[2.0, 0.0]]), 2.0)
        assert as_pair_set(owners, cands) == {(0, 0)}

    def test_empty_points(self):
        grid = SpatialHash(np.empty((0, 2)), cell_size=1.0)
        owners, cands = grid.pairs_within(np.array([[0.0, 0.0]]), 1.0)
        assert owners.size == 0 and cands.size == 0

    def test_counts_within(self):
        points = np.array([[0.0, 0.0], [0.5, 0.0], [5.0, 5.0]])
        grid = SpatialHash(points, cell_size=1.0)
        counts = grid.counts_within(np.array([[0.0, 0.1], [5.0, 5.0], [-9.0, -9.0]]), 1.0)
        assert counts.tolist() == [2, 1, 0]

    def test_radius_larger_than_cell_rejected(self):
        grid = SpatialHash(np.array([[0.0, 0.0]]), cell_size=1.0)
        with pytest.raises(ValueError):
            grid.pairs_within(np.array([[0.0, 0.0]]), 1.5)

    def test_identical_points_all_found(self):
        points = np.zeros((7, 2))
        grid = SpatialHash(points, cell_size=1.0)
        counts = grid.counts_within(np.zeros((1, 2)), 1.0)
        assert counts.tolist() == [7]

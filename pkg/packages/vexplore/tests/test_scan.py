"""Tests for ray marching and scan integration."""

import math

import numpy as np
import pytest
from vexplore.core.exceptions import GridBoundsError
from vexplore.geometry import Pose
from vexplore.mapping.raycast import march_rays, supercover_cells
from vexplore.mapping.scan import integrate_scan
from vexplore.mapping.types import CellState, OccupancyGrid
from vexplore.sim.sensor import DepthScan

FOV = math.pi / 2


def single_ray(range_m: float, hit: bool, bearing: float = 0.0, fov: float = FOV) -> DepthScan:
    return DepthScan.from_rays([(bearing, range_m, hit)], fov=fov, max_range=5.0)


class TestMarchRays:
    def test_axis_aligned_ray(self):
        march = march_rays(0.5, 0.5, np.array([0.0]), np.array([3.0]))
        cells = list(zip(march.ix[march.valid], march.iy[march.valid], strict=True))
        assert cells == [(0, 0), (1, 0), (2, 0), (3, 0)]
        assert march.t[march.valid].tolist() == pytest.approx([0.0, 0.5, 1.5, 2.5])

    def test_counts_per_ray(self):
        march = march_rays(0.5, 0.5, np.array([0.0, math.pi / 2]), np.array([1.0, 2.0]))
        assert march.counts.tolist() == [2, 3]

    def test_valid_is_a_prefix(self, rng):
        angles = rng.uniform(-math.pi, math.pi, size=50)
        lengths = rng.uniform(0.0, 6.0, size=50)
        march = march_rays(3.3, 2.7, angles, lengths)
        for column in march.valid.T:
            n = int(column.sum())
            assert column[:n].all() and not column[n:].any()

    def test_consecutive_cells_are_4_adjacent(self, rng):
        angles = rng.uniform(-math.pi, math.pi, size=40)
        march = march_rays(5.2, 5.9, angles, np.full(40, 4.0))
        for r in range(40):
            n = int(march.counts[r])
            steps = np.abs(np.diff(march.ix[:n, r])) + np.abs(np.diff(march.iy[:n, r]))
            assert np.all(steps == 1)


class TestSupercover:
    def test_diagonal_includes_both_corner_neighbours(self):
        cells = supercover_cells(0.5, 0.5, 1.5, 1.5)
        assert set(cells) == {(0, 0), (1, 0), (0, 1), (1, 1)}

    def test_segment_on_grid_line_touches_both_sides(self):
        cells = set(supercover_cells(0.5, 1.0, 2.5, 1.0))
        assert {(0, 1), (1, 1), (2, 1), (0, 0), (1, 0), (2, 0)} <= cells


class TestIntegrateScan:
    def test_single_hit_carves_free_then_occupied(self):
        grid = OccupancyGrid.empty(10, 10, resolution=1.0)
        updated = integrate_scan(grid, Pose(4.5, 4.5, 0.0), single_ray(3.0, hit=True))
        row = updated.cells[4]
        assert row[4:7].tolist() == [CellState.FREE] * 3
        assert row[7] == CellState.OCCUPIED
        assert row[8] == CellState.UNKNOWN
        assert updated.known_count == 4

    def test_miss_frees_the_endpoint(self):
        grid = OccupancyGrid.empty(10, 10, resolution=1.0)
        updated = integrate_scan(grid, Pose(4.5, 4.5, 0.0), single_ray(3.0, hit=False))
        assert updated.cells[4, 4:8].tolist() == [CellState.FREE] * 4
        assert not np.any(updated.cells == CellState.OCCUPIED)

    def test_occupied_cells_are_never_freed(self):
        cells = np.full((10, 10), CellState.UNKNOWN, dtype=np.int8)
        cells[4, 5] = CellState.OCCUPIED
        grid = OccupancyGrid(cells, resolution=1.0)
        updated = integrate_scan(grid, Pose(4.5, 4.5, 0.0), single_ray(3.0, hit=False))
        assert updated.cells[4, 5] == CellState.OCCUPIED
        assert updated.cells[4, 6] == CellState.FREE

    def test_empty_scan_leaves_grid_untouched(self):
        grid = OccupancyGrid.empty(5, 5, resolution=1.0)
        empty = DepthScan.from_rays([], fov=FOV, max_range=5.0)
        assert integrate_scan(grid, Pose(2.5, 2.5), empty) is grid

    def test_pose_outside_grid(self):
        grid = OccupancyGrid.empty(5, 5, resolution=1.0)
        with pytest.raises(GridBoundsError):
            integrate_scan(grid, Pose(7.0, 2.5), single_ray(1.0, hit=True))

    def test_grid_grows_for_long_rays(self):
        grid = OccupancyGrid.empty(4, 4, resolution=1.0)
        updated = integrate_scan(grid, Pose(1.5, 1.5, 0.0), single_ray(4.0, hit=True))
        assert updated.width > grid.width
        assert updated.state(updated.world_to_cell(5.5, 1.5)) == CellState.OCCUPIED
        assert updated.state(updated.world_to_cell(3.5, 1.5)) == CellState.FREE

    def test_full_circle_frees_the_disc(self):
        n = 360
        bearings = np.linspace(-math.pi, math.pi, n, endpoint=False)
        scan = DepthScan(bearings, np.full(n, 5.0), np.zeros(n, dtype=bool), 2 * math.pi, 5.0)
        grid = OccupancyGrid.empty(20, 20, resolution=1.0)
        updated = integrate_scan(grid, Pose(10.5, 10.5, 0.3), scan)
        assert not np.any(updated.cells == CellState.OCCUPIED)
        for iy in range(20):
            for ix in range(20):
                if math.hypot(ix - 10, iy - 10) <= 4.0:
                    assert updated.cells[iy, ix] == CellState.FREE, (ix, iy)
                elif math.hypot(ix - 10, iy - 10) > 6.5:
                    assert updated.cells[iy, ix] == CellState.UNKNOWN, (ix, iy)

    def test_input_grid_is_not_mutated(self):
        grid = OccupancyGrid.empty(10, 10, resolution=1.0)
        integrate_scan(grid, Pose(4.5, 4.5, 0.0), single_ray(3.0, hit=True))
        assert grid.known_count == 0

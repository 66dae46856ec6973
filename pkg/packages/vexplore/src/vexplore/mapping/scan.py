"""Depth-scan integration into the agent's occupancy grid."""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

import numpy as np

from vexplore.core.exceptions import GridBoundsError
from vexplore.geometry import Pose
from vexplore.mapping.raycast import RayMarch, march_rays
from vexplore.mapping.types import CellState, OccupancyGrid

if TYPE_CHECKING:
    from vexplore.sim.sensor import DepthScan

logger = logging.getLogger(__name__)

# Slack on the ray length so an endpoint computed as t * resolution lands back
# in the cell it was measured from.
_ENDPOINT_SLACK = 1e-9


def integrate_scan(grid: OccupancyGrid, pose: Pose, scan: DepthScan) -> OccupancyGrid:
    """Carve a scan into the grid.

    Every cell from the robot's cell up to (not including) a ray's endpoint
    cell becomes Free. The endpoint cell becomes Occupied for a hit and Free
    otherwise. Occupied cells are never demoted to Free.
    """
    if not grid.contains(pose.x, pose.y):
        raise GridBoundsError(f"pose ({pose.x:.3f}, {pose.y:.3f}) is outside the map")
    if scan.size == 0:
        return grid

    angles = pose.heading + scan.bearings
    ex = pose.x + scan.ranges * np.cos(angles)
    ey = pose.y + scan.ranges * np.sin(angles)
    margin = grid.resolution
    grown = grid.grown_to_include(
        float(min(ex.min(), pose.x)) - margin,
        float(min(ey.min(), pose.y)) - margin,
        float(max(ex.max(), pose.x)) + margin,
        float(max(ey.max(), pose.y)) + margin,
    )
    if grown is not grid:
        logger.debug(
            "Map grew from %dx%d to %dx%d", grid.width, grid.height, grown.width, grown.height
        )

    march = _march(grown, pose, scan)
    last = march.counts - 1
    rays = np.arange(scan.size)

    before_end = march.valid & (np.arange(march.t.shape[0])[:, None] < last[None, :])
    end_x = march.ix[last, rays]
    end_y = march.iy[last, rays]
    free_x = np.concatenate([march.ix[before_end], end_x[~scan.hits]])
    free_y = np.concatenate([march.iy[before_end], end_y[~scan.hits]])

    cells = grown.cells.copy()
    current = cells[free_y, free_x]
    cells[free_y, free_x] = np.where(current == CellState.OCCUPIED, current, CellState.FREE)
    cells[end_y[scan.hits], end_x[scan.hits]] = CellState.OCCUPIED
    return grown.with_cells(cells)


def scan_endpoint_cells(
    grid: OccupancyGrid, pose: Pose, scan: DepthScan
) -> tuple[np.ndarray, np.ndarray]:
    """(ix, iy) of the cell each ray ends in, as ``integrate_scan`` would mark it.

    Cells may fall outside ``grid``; the grid is not grown.
    """
    march = _march(grid, pose, scan)
    last = march.counts - 1
    rays = np.arange(scan.size)
    return march.ix[last, rays], march.iy[last, rays]


def _march(grid: OccupancyGrid, pose: Pose, scan: DepthScan) -> RayMarch:
    gx, gy = grid.world_to_grid(pose.x, pose.y)
    angles = pose.heading + scan.bearings
    return march_rays(gx, gy, angles, scan.ranges / grid.resolution + _ENDPOINT_SLACK)

"""Map post-processing: max-pool downsampling, obstacle inflation, bump marks."""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy.ndimage import binary_dilation, generate_binary_structure

from vexplore.core.exceptions import ParameterError
from vexplore.geometry import Pose
from vexplore.mapping.types import CellState, OccupancyGrid

logger = logging.getLogger(__name__)


def downsample_maxpool(grid: OccupancyGrid, factor: int) -> OccupancyGrid:
    """Reduce resolution by ``factor``; each block takes its most conservative state.

    Blocks are padded with Unknown, so the order Unknown < Free < Occupied
    turns into a plain integer max.
    """
    if factor <= 0:
        raise ParameterError(f"pooling factor must be >= 1, got {factor}")
    if factor == 1:
        return grid.copy()

    h = -(-grid.height // factor) * factor
    w = -(-grid.width // factor) * factor
    padded = np.full((h, w), CellState.UNKNOWN, dtype=np.int8)
    padded[: grid.height, : grid.width] = grid.cells
    pooled = padded.reshape(h // factor, factor, w // factor, factor).max(axis=(1, 3))
    return OccupancyGrid(pooled, grid.origin, grid.resolution * factor)


def inflate_obstacles(grid: OccupancyGrid, radius_cells: int = 1) -> OccupancyGrid:
    """Mark every cell within Chebyshev distance ``radius_cells`` of an obstacle Occupied."""
    if radius_cells < 0:
        raise ParameterError(f"inflation radius must be >= 0, got {radius_cells}")
    if radius_cells == 0:
        return grid.copy()

    dilated = binary_dilation(
        grid.cells == CellState.OCCUPIED,
        structure=generate_binary_structure(2, 2),
        iterations=radius_cells,
    )
    return grid.with_cells(np.where(dilated, CellState.OCCUPIED, grid.cells).astype(np.int8))


def postprocess(grid: OccupancyGrid, factor: int, radius_cells: int) -> OccupancyGrid:
    """Pool then inflate: the planner-facing view of the SLAM map."""
    return inflate_obstacles(downsample_maxpool(grid, factor), radius_cells)


def mark_cell_ahead(grid: OccupancyGrid, pose: Pose) -> tuple[OccupancyGrid, bool]:
    """Mark the cell one cell-length ahead of the robot as Occupied.

    Returns the new grid and whether the mark was applied; an ahead cell
    outside the map leaves the grid unchanged.
    """
    ahead_x = pose.x + grid.resolution * math.cos(pose.heading)
    ahead_y = pose.y + grid.resolution * math.sin(pose.heading)
    cell = grid.world_to_cell(ahead_x, ahead_y)
    if not grid.in_bounds(cell):
        logger.warning(
            "Cell ahead of (%.2f, %.2f) is outside the map; bump ignored", pose.x, pose.y
        )
        return grid, False
    cells = grid.cells.copy()
    cells[cell[1], cell[0]] = CellState.OCCUPIED
    return grid.with_cells(cells), True

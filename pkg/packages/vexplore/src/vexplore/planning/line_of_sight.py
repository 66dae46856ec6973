"""Supercover line of sight over an occupancy grid."""

from __future__ import annotations

import numpy as np

from vexplore.geometry import Point
from vexplore.mapping.raycast import supercover_cells
from vexplore.mapping.types import CellState, OccupancyGrid


def line_of_sight(grid: OccupancyGrid, a: Point, b: Point) -> bool:
    """True iff every cell the segment ab touches is Free."""
    ax, ay = grid.world_to_grid(*a)
    bx, by = grid.world_to_grid(*b)
    return grid_line_of_sight(grid.cells, ax, ay, bx, by)


def grid_line_of_sight(cells: np.ndarray, x0: float, y0: float, x1: float, y1: float) -> bool:
    """Line of sight between two points given in cell units."""
    h, w = cells.shape
    for cx, cy in supercover_cells(x0, y0, x1, y1):
        if not (0 <= cx < w and 0 <= cy < h) or cells[cy, cx] != CellState.FREE:
            return False
    return True


def free_line_of_sight(free: list[list[bool]], x0: float, y0: float, x1: float, y1: float) -> bool:
    """``grid_line_of_sight`` over a nested-list Free mask, for search inner loops."""
    h = len(free)
    w = len(free[0]) if h else 0
    for cx, cy in supercover_cells(x0, y0, x1, y1):
        if not (0 <= cx < w and 0 <= cy < h) or not free[cy][cx]:
            return False
    return True

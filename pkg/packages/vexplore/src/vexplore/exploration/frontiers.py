"""Frontier detection: Free cells bordering Unknown space, grouped into chains."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import binary_dilation, generate_binary_structure

from vexplore.core.exceptions import FrontierDetectionError
from vexplore.geometry import Point
from vexplore.mapping.connectivity import flood_fill, label_components
from vexplore.mapping.types import Cell, CellState, OccupancyGrid

logger = logging.getLogger(__name__)

DEFAULT_SNAP_RADIUS = 5


@dataclass(frozen=True)
class Frontier:
    """One connected chain of frontier cells."""

    points: tuple[Cell, ...]
    centroid: Point
    centres: tuple[Point, ...] = field(default=(), compare=False, repr=False)

    @property
    def size(self) -> int:
        return len(self.points)

    @classmethod
    def from_cells(cls, grid: OccupancyGrid, cells: list[Cell]) -> Frontier:
        """Build a frontier whose centroid is the mean of its cell centres."""
        centres = [grid.cell_to_world(c) for c in cells]
        cx, cy = np.mean(np.array(centres, dtype=float), axis=0)
        return cls(tuple(cells), (float(cx), float(cy)), tuple(centres))

    def target_cells(self, grid: OccupancyGrid) -> list[Cell]:
        """Cells of ``grid`` under this frontier, nearest the centroid first.

        ``grid`` may be coarser than the map the frontier was found on.
        Without stored centres the points are taken as cells of ``grid``.
        """
        if self.centres:
            cells = {grid.world_to_cell(x, y) for x, y in self.centres}
        else:
            cells = set(self.points)
        cx, cy = self.centroid

        def key(cell: Cell) -> tuple[float, Cell]:
            x, y = grid.cell_to_world(cell)
            return (x - cx) ** 2 + (y - cy) ** 2, cell

        return sorted((c for c in cells if grid.in_bounds(c)), key=key)


def frontier_mask(grid: OccupancyGrid) -> np.ndarray:
    """Free cells with at least one Unknown 8-neighbour; outside the map counts as Unknown."""
    unknown = np.pad(grid.cells == CellState.UNKNOWN, 1, constant_values=True)
    near_unknown = binary_dilation(unknown, structure=generate_binary_structure(2, 2))[1:-1, 1:-1]
    return (grid.cells == CellState.FREE) & near_unknown


def detect_frontiers(
    grid: OccupancyGrid, robot_cell: Cell, snap_radius: int = DEFAULT_SNAP_RADIUS
) -> list[Frontier]:
    """All frontiers reachable from the robot through Free cells.

    The search and the grouping are both 8-connected. Frontiers are ordered
    by their first cell in row-major order.
    """
    start = grid.nearest_free(robot_cell, snap_radius)
    if start is None:
        raise FrontierDetectionError(
            f"no Free cell within {snap_radius} cells of robot cell {robot_cell}"
        )
    reachable = flood_fill(grid.cells == CellState.FREE, start, diagonal=True)
    candidates = frontier_mask(grid) & reachable
    labels, count = label_components(candidates, diagonal=True)
    if not count:
        return []

    ys, xs = np.nonzero(labels)
    groups: list[list[Cell]] = [[] for _ in range(count)]
    for x, y, label in zip(xs.tolist(), ys.tolist(), labels[ys, xs].tolist(), strict=True):
        groups[label - 1].append((x, y))
    frontiers = [Frontier.from_cells(grid, cells) for cells in groups]
    logger.debug("Found %d frontiers (%d cells)", len(frontiers), int(xs.size))
    return frontiers

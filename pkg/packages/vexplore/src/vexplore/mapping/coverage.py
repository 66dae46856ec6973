"""Absolute and relative coverage of an agent map against ground truth."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from vexplore.core.exceptions import UndefinedCoverageError
from vexplore.mapping.types import CellState, OccupancyGrid


@dataclass(frozen=True)
class CoverageSample:
    """Coverage at simulated time ``t`` (seconds)."""

    t: float
    abs_cells: int
    abs_area: float
    rel: float


def coverage(grid: OccupancyGrid, gt: OccupancyGrid, t: float) -> CoverageSample:
    """Count known cells of ``grid`` and the explored fraction of ``gt``.

    ``abs_cells`` counts every known cell of the agent map. ``rel`` samples
    the agent map at the centre of each explorable ground-truth cell, so the
    two grids may differ in extent, origin and resolution.
    """
    abs_cells = grid.known_count
    explorable = gt.cells >= CellState.FREE
    total = int(np.count_nonzero(explorable))
    if total == 0:
        raise UndefinedCoverageError("ground truth has no explorable cells")

    gy, gx = np.nonzero(explorable)
    wx = gt.origin[0] + (gx + 0.5) * gt.resolution
    wy = gt.origin[1] + (gy + 0.5) * gt.resolution
    ax = np.floor((wx - grid.origin[0]) / grid.resolution).astype(np.int64)
    ay = np.floor((wy - grid.origin[1]) / grid.resolution).astype(np.int64)
    inside = (ax >= 0) & (ax < grid.width) & (ay >= 0) & (ay < grid.height)
    known = grid.cells[ay[inside], ax[inside]] >= CellState.FREE
    rel = min(1.0, max(0.0, int(np.count_nonzero(known)) / total))
    return CoverageSample(
        t=float(t),
        abs_cells=abs_cells,
        abs_area=abs_cells * grid.resolution**2,
        rel=rel,
    )

"""PPM renders of an agent map with the robot and its path."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from vexplore.core.exceptions import VexploreError
from vexplore.geometry import Pose
from vexplore.mapping.pgm import encode_ppm
from vexplore.mapping.raycast import supercover_cells
from vexplore.mapping.types import CellState, OccupancyGrid
from vexplore.planning.path import Path as PlanPath

UNKNOWN_RGB = (205, 205, 205)
FREE_RGB = (255, 255, 255)
OCCUPIED_RGB = (0, 0, 0)
PATH_RGB = (220, 40, 40)
ROBOT_RGB = (40, 80, 220)
HEADING_RGB = (40, 170, 220)


def map_image(
    grid: OccupancyGrid, pose: Pose | None = None, paths: list[tuple[PlanPath, tuple]] | None = None
) -> np.ndarray:
    """H x W x 3 image, north up."""
    rgb = np.empty((*grid.shape, 3), dtype=np.uint8)
    rgb[...] = UNKNOWN_RGB
    rgb[grid.cells == CellState.FREE] = FREE_RGB
    rgb[grid.cells == CellState.OCCUPIED] = OCCUPIED_RGB

    for path, color in paths or []:
        pts = [grid.world_to_grid(x, y) for x, y in path.points]
        for (x0, y0), (x1, y1) in zip(pts, pts[1:], strict=False):
            _paint(rgb, grid, supercover_cells(x0, y0, x1, y1), color)
        if len(pts) == 1:
            _paint(rgb, grid, [(math.floor(pts[0][0]), math.floor(pts[0][1]))], color)

    if pose is not None:
        ahead = grid.world_to_cell(
            pose.x + grid.resolution * math.cos(pose.heading),
            pose.y + grid.resolution * math.sin(pose.heading),
        )
        _paint(rgb, grid, [ahead], HEADING_RGB)
        _paint(rgb, grid, [grid.world_to_cell(pose.x, pose.y)], ROBOT_RGB)
    return rgb[::-1]


def render_map(
    grid: OccupancyGrid,
    pose: Pose | None,
    path: PlanPath | None,
    out: Path,
    extra_paths: list[tuple[PlanPath, tuple]] | None = None,
) -> Path:
    """Write a binary PPM; identical input gives identical bytes."""
    paths = ([(path, PATH_RGB)] if path is not None else []) + (extra_paths or [])
    out = Path(out)
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_bytes(encode_ppm(map_image(grid, pose, paths)))
    except OSError as e:
        raise VexploreError(f"cannot write render {out}: {e}") from e
    return out


def _paint(rgb: np.ndarray, grid: OccupancyGrid, cells, color: tuple) -> None:
    for x, y in cells:
        if grid.in_bounds((x, y)):
            rgb[y, x] = color

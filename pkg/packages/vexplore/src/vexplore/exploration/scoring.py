"""Cost every frontier for one exploration decision."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import StrEnum

from vexplore.exploration.costs import CostParams, CostTerms, baseline_terms, enhanced_terms
from vexplore.exploration.frontiers import DEFAULT_SNAP_RADIUS, Frontier
from vexplore.geometry import Point, Pose
from vexplore.mapping.types import OccupancyGrid
from vexplore.planning.grid_search import DistanceField, dijkstra_sweep, shortcut
from vexplore.planning.path import Path

logger = logging.getLogger(__name__)


class DistanceMode(StrEnum):
    EUCLIDEAN = "euclidean"
    PATH = "path"


@dataclass(frozen=True)
class ScoredFrontier:
    index: int
    frontier: Frontier
    terms: CostTerms
    path: Path | None = None

    @property
    def cost(self) -> float:
        return self.terms.total

    def to_dict(self) -> dict:
        return {
            "id": self.index,
            "size": self.frontier.size,
            "centroid": list(self.frontier.centroid),
            **self.terms.to_dict(),
        }


def score_frontiers(
    grid: OccupancyGrid,
    frontiers: list[Frontier],
    robot: Pose,
    params: CostParams,
    *,
    distance_mode: DistanceMode = DistanceMode.EUCLIDEAN,
    orientation: bool = False,
    snap_radius: int = DEFAULT_SNAP_RADIUS,
) -> list[ScoredFrontier]:
    """Cost each frontier, in input order.

    Euclidean mode without the orientation term is the baseline cost. Any
    other combination uses the enhanced cost, with ``gamma`` zeroed when
    orientation is off. In path mode every frontier is reached through one
    shortest-path sweep from the robot, shortcut by line of sight; a
    frontier the sweep cannot reach gets an infinite cost.
    """
    if distance_mode is DistanceMode.EUCLIDEAN and not orientation:
        return [
            ScoredFrontier(i, f, baseline_terms(f, robot, params)) for i, f in enumerate(frontiers)
        ]

    weights = params if orientation else params.model_copy(update={"gamma": 0.0})
    if distance_mode is DistanceMode.EUCLIDEAN:
        paths = [Path((robot.position, f.centroid)) for f in frontiers]
    else:
        paths = _swept_paths(grid, frontiers, robot, snap_radius)
    return [
        ScoredFrontier(i, f, enhanced_terms(f, robot, p, weights), p)
        for i, (f, p) in enumerate(zip(frontiers, paths, strict=True))
    ]


def _swept_paths(
    grid: OccupancyGrid, frontiers: list[Frontier], robot: Pose, snap_radius: int
) -> list[Path | None]:
    source = grid.nearest_free(grid.world_to_cell(*robot.position), snap_radius)
    if source is None:
        logger.warning("Robot has no Free planner cell nearby; all frontiers unreachable")
        return [None] * len(frontiers)
    field = dijkstra_sweep(grid, source)
    return [_path_to(grid, field, f, robot) for f in frontiers]


def _path_to(
    grid: OccupancyGrid, field: DistanceField, frontier: Frontier, robot: Pose
) -> Path | None:
    """Shortcut sweep path to the reachable frontier cell nearest the centroid."""
    target = next((c for c in frontier.target_cells(grid) if field.reachable(c)), None)
    if target is None:
        return None
    cells = field.cells_to(target)
    waypoints = [_to_world(grid, p) for p in shortcut(grid, cells)]
    return Path((robot.position, *waypoints[1:-1], grid.cell_to_world(target)))


def _to_world(grid: OccupancyGrid, p: tuple[float, float]) -> Point:
    return (grid.origin[0] + p[0] * grid.resolution, grid.origin[1] + p[1] * grid.resolution)

"""Basic Theta*: A* over cell centres with line-of-sight parent shortcuts.

Every cell keeps the cheapest known any-angle path from the start. When a
neighbour is relaxed from ``cell`` the planner first tries to connect it
straight to ``cell``'s parent, falling back to the grid edge from ``cell``.
Neighbours are the same 8-connected moves A* uses, so the returned path is
never longer than the A* path on the same grid.
"""

from __future__ import annotations

import heapq
import itertools
import logging
import math

from vexplore.core.exceptions import PlanningError
from vexplore.geometry import Point, distance
from vexplore.mapping.types import Cell, OccupancyGrid
from vexplore.planning.grid_search import DEFAULT_SNAP_RADIUS, FreeMap, unwind
from vexplore.planning.line_of_sight import line_of_sight
from vexplore.planning.path import Path

logger = logging.getLogger(__name__)


def plan_theta_star(
    grid: OccupancyGrid, start: Point, goal: Point, snap_radius: int = DEFAULT_SNAP_RADIUS
) -> Path | None:
    """Any-angle path from ``start`` to ``goal`` (world points), or None.

    The goal is moved to the nearest Free cell centre within ``snap_radius``
    cells when it does not lie in a Free cell itself.
    """
    start_cell = grid.world_to_cell(*start)
    if not grid.is_free(start_cell):
        raise PlanningError(f"start {start} lies in a non-Free cell")
    goal_cell = grid.world_to_cell(*goal)
    snapped = grid.nearest_free(goal_cell, snap_radius)
    if snapped is None:
        return None
    if snapped != goal_cell:
        goal = grid.cell_to_world(snapped)

    if snapped == start_cell:
        points = (start,) if start == goal else (start, goal)
        return Path(points)

    cells, expansions = _search(FreeMap(grid), start_cell, snapped)
    if cells is None:
        return None
    centres = [grid.cell_to_world(c) for c in cells]
    return Path(tuple(_attach_endpoints(grid, centres, start, goal)), expansions=expansions)


def _search(fm: FreeMap, start: Cell, goal: Cell) -> tuple[list[Cell] | None, int]:
    visible = fm.visible

    def h(c: Cell) -> float:
        return math.hypot(c[0] - goal[0], c[1] - goal[1])

    counter = itertools.count()
    g: dict[Cell, float] = {start: 0.0}
    parent: dict[Cell, Cell] = {start: start}
    closed: set[Cell] = set()
    heap = [(h(start), next(counter), start)]
    while heap:
        _, _, cell = heapq.heappop(heap)
        if cell in closed:
            continue
        if cell == goal:
            return unwind(parent, cell), len(closed)
        closed.add(cell)
        up = parent[cell]
        for nx, ny, cost in fm.neighbors(*cell):
            nxt = (nx, ny)
            if nxt in closed:
                continue
            if up != cell and visible(up, nxt):
                via, candidate = up, g[up] + math.hypot(nx - up[0], ny - up[1])
            else:
                via, candidate = cell, g[cell] + cost
            if candidate < g.get(nxt, math.inf):
                g[nxt] = candidate
                parent[nxt] = via
                heapq.heappush(heap, (candidate + h(nxt), next(counter), nxt))
    logger.debug("Theta* exhausted %d cells without reaching %s", len(closed), goal)
    return None, len(closed)


def _attach_endpoints(
    grid: OccupancyGrid, centres: list[Point], start: Point, goal: Point
) -> list[Point]:
    """Swap the first/last cell centres for the exact start and goal points."""
    points = list(centres)
    if start != points[0]:
        if len(points) > 1 and line_of_sight(grid, start, points[1]):
            points[0] = start
        else:
            points.insert(0, start)
    if goal != points[-1]:
        if len(points) > 1 and line_of_sight(grid, points[-2], goal):
            points[-1] = goal
        else:
            points.append(goal)
    return [p for i, p in enumerate(points) if i == 0 or distance(p, points[i - 1]) > 0.0]

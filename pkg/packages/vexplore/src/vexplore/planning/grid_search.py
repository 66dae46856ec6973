"""8-connected grid search: A*, a full uniform-cost sweep, and path shortcutting.

Moves cost 1 (straight) or sqrt(2) (diagonal) cells. A diagonal move is only
allowed when both cells it squeezes between are Free, which is exactly the
condition for the centre-to-centre segment to have supercover line of sight.
"""

from __future__ import annotations

import heapq
import itertools
import math
from collections.abc import Iterator
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from vexplore.core.exceptions import PlanningError
from vexplore.mapping.types import Cell, CellState, OccupancyGrid
from vexplore.planning.line_of_sight import free_line_of_sight
from vexplore.planning.path import Path

SQRT2 = math.sqrt(2.0)
DEFAULT_SNAP_RADIUS = 5

_MOVES: tuple[tuple[int, int, float], ...] = (
    (1, 0, 1.0),
    (-1, 0, 1.0),
    (0, 1, 1.0),
    (0, -1, 1.0),
    (1, 1, SQRT2),
    (1, -1, SQRT2),
    (-1, 1, SQRT2),
    (-1, -1, SQRT2),
)


class FreeMap:
    """Row-major nested-list view of the Free cells, cheap to index in loops."""

    def __init__(self, grid: OccupancyGrid) -> None:
        self.grid = grid
        self.width = grid.width
        self.height = grid.height
        self.free: list[list[bool]] = (grid.cells == CellState.FREE).tolist()

    def is_free(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height and self.free[y][x]

    def neighbors(self, x: int, y: int) -> Iterator[tuple[int, int, float]]:
        free = self.free
        for dx, dy, cost in _MOVES:
            nx, ny = x + dx, y + dy
            if not (0 <= nx < self.width and 0 <= ny < self.height) or not free[ny][nx]:
                continue
            if dx and dy and not (free[y][nx] and free[ny][x]):
                continue
            yield nx, ny, cost

    def visible(self, a: Cell, b: Cell) -> bool:
        """Line of sight between the centres of cells ``a`` and ``b``."""
        return free_line_of_sight(self.free, a[0] + 0.5, a[1] + 0.5, b[0] + 0.5, b[1] + 0.5)


def octile(a: Cell, b: Cell) -> float:
    dx, dy = abs(a[0] - b[0]), abs(a[1] - b[1])
    return dx + dy + (SQRT2 - 2.0) * min(dx, dy)


def cells_to_path(grid: OccupancyGrid, cells: list[Cell], expansions: int = 0) -> Path:
    return Path(tuple(grid.cell_to_world(c) for c in cells), expansions=expansions)


def plan_astar(
    grid: OccupancyGrid, start: Cell, goal: Cell, snap_radius: int = DEFAULT_SNAP_RADIUS
) -> Path | None:
    """Optimal 8-connected path between cell centres, or None if unreachable."""
    if not grid.is_free(start):
        raise PlanningError(f"start cell {start} is not Free")
    snapped = grid.nearest_free(goal, snap_radius)
    if snapped is None:
        return None
    if snapped == start:
        return cells_to_path(grid, [start])

    fm = FreeMap(grid)
    counter = itertools.count()
    g: dict[Cell, float] = {start: 0.0}
    parent: dict[Cell, Cell] = {start: start}
    closed: set[Cell] = set()
    heap = [(octile(start, snapped), next(counter), start)]
    while heap:
        _, _, cell = heapq.heappop(heap)
        if cell in closed:
            continue
        if cell == snapped:
            return cells_to_path(grid, unwind(parent, cell), expansions=len(closed))
        closed.add(cell)
        base = g[cell]
        for nx, ny, cost in fm.neighbors(*cell):
            nxt = (nx, ny)
            if nxt in closed:
                continue
            candidate = base + cost
            if candidate < g.get(nxt, math.inf):
                g[nxt] = candidate
                parent[nxt] = cell
                heapq.heappush(heap, (candidate + octile(nxt, snapped), next(counter), nxt))
    return None


@dataclass(frozen=True)
class DistanceField:
    """Shortest 8-connected distances (meters) from one source cell."""

    grid: OccupancyGrid
    source: Cell
    distance: np.ndarray
    parent: np.ndarray

    def reachable(self, cell: Cell) -> bool:
        return self.grid.in_bounds(cell) and math.isfinite(self.distance[cell[1], cell[0]])

    def cells_to(self, cell: Cell) -> list[Cell] | None:
        """Cell chain from the source to ``cell``."""
        if not self.reachable(cell):
            return None
        w = self.grid.width
        chain = [cell]
        flat = int(self.parent[cell[1], cell[0]])
        while flat >= 0:
            chain.append((flat % w, flat // w))
            flat = int(self.parent[flat // w, flat % w])
        chain.reverse()
        return chain


def dijkstra_sweep(grid: OccupancyGrid, source: Cell) -> DistanceField:
    """One uniform-cost sweep over the Free cells reachable from ``source``."""
    if not grid.is_free(source):
        raise PlanningError(f"sweep source {source} is not Free")
    w = grid.width
    dist, pred = dijkstra(
        move_graph(grid),
        directed=True,
        indices=source[1] * w + source[0],
        return_predecessors=True,
    )
    parent = np.where(pred < 0, -1, pred).astype(np.int64).reshape(grid.shape)
    return DistanceField(grid, source, dist.reshape(grid.shape) * grid.resolution, parent)


def move_graph(grid: OccupancyGrid) -> csr_matrix:
    """Sparse adjacency of the Free cells, one edge per allowed move, indexed ``y * w + x``."""
    free = grid.cells == CellState.FREE
    h, w = free.shape
    index = np.arange(h * w).reshape(h, w)
    rows, cols, weights = [], [], []
    for dx, dy, cost in _MOVES:
        ys, ys_to = _span(dy, h)
        xs, xs_to = _span(dx, w)
        ok = free[ys, xs] & free[ys_to, xs_to]
        if dx and dy:
            ok &= free[ys, xs_to] & free[ys_to, xs]
        rows.append(index[ys, xs][ok])
        cols.append(index[ys_to, xs_to][ok])
        weights.append(np.full(int(ok.sum()), cost))
    edges = (np.concatenate(rows), np.concatenate(cols))
    return csr_matrix((np.concatenate(weights), edges), shape=(h * w, h * w))


def _span(d: int, n: int) -> tuple[slice, slice]:
    """Source and destination slices of a shift by ``d`` along an axis of length ``n``."""
    return slice(max(0, -d), n - max(0, d)), slice(max(0, d), n - max(0, -d))


def shortcut(grid: OccupancyGrid, cells: list[Cell]) -> list[tuple[float, float]]:
    """Line-of-sight shortcutting of a cell chain into cell-unit waypoints.

    From each waypoint the next one is the furthest chain point it can see,
    searched by doubling then bisection. Every emitted segment has line of
    sight; adjacent chain cells always see each other.
    """
    points = [(c[0] + 0.5, c[1] + 0.5) for c in cells]
    if len(points) <= 2:
        return points
    free = FreeMap(grid).free
    out = [points[0]]
    anchor = 0
    while anchor < len(points) - 1:
        anchor = _furthest_visible(free, points, anchor)
        out.append(points[anchor])
    return out


def _furthest_visible(
    free: list[list[bool]], points: list[tuple[float, float]], anchor: int
) -> int:
    a = points[anchor]

    def seen(i: int) -> bool:
        return free_line_of_sight(free, a[0], a[1], points[i][0], points[i][1])

    last = len(points) - 1
    lo, hi, step = anchor + 1, last + 1, 2
    while lo < last:
        i = min(anchor + step, last)
        if not seen(i):
            hi = i
            break
        lo, step = i, step * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if seen(mid):
            lo = mid
        else:
            hi = mid
    return lo


def unwind(parent: dict[Cell, Cell], cell: Cell) -> list[Cell]:
    chain = [cell]
    while parent[cell] != cell:
        cell = parent[cell]
        chain.append(cell)
    chain.reverse()
    return chain

"""Occupancy grid value types.

The grid is a plain value: operations in this package return new grids and
never mutate their inputs. Cells are addressed as ``(ix, iy)`` (column, row)
and stored row-major as ``cells[iy, ix]``; +x is east and +y is north.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from vexplore.core.exceptions import ParameterError
from vexplore.geometry import Point

Cell = tuple[int, int]


class CellState(IntEnum):
    """Cell alphabet. Integer order is the pooling order."""

    UNKNOWN = -1
    FREE = 0
    OCCUPIED = 1


@dataclass(frozen=True, eq=False)
class OccupancyGrid:
    """H x W matrix of cell states with a world-frame origin and resolution.

    ``origin`` is the world position of the outer corner of cell (0, 0).
    """

    cells: np.ndarray
    origin: Point = (0.0, 0.0)
    resolution: float = 0.05

    def __post_init__(self) -> None:
        cells = np.asarray(self.cells, dtype=np.int8)
        if cells.ndim != 2 or cells.shape[0] < 1 or cells.shape[1] < 1:
            raise ParameterError(f"grid must be a non-empty 2D matrix, got shape {cells.shape}")
        if not self.resolution > 0:
            raise ParameterError(f"resolution must be positive, got {self.resolution}")
        if np.any((cells < CellState.UNKNOWN) | (cells > CellState.OCCUPIED)):
            raise ParameterError("grid cells must be -1 (unknown), 0 (free) or 1 (occupied)")
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "origin", (float(self.origin[0]), float(self.origin[1])))

    @classmethod
    def empty(
        cls,
        width: int,
        height: int,
        resolution: float = 0.05,
        origin: Point = (0.0, 0.0),
    ) -> OccupancyGrid:
        """An all-Unknown grid."""
        if width < 1 or height < 1:
            raise ParameterError(f"grid dimensions must be >= 1, got {width}x{height}")
        cells = np.full((height, width), CellState.UNKNOWN, dtype=np.int8)
        return cls(cells, origin, resolution)

    # --- Shape -------------------------------------------------------------

    @property
    def height(self) -> int:
        return int(self.cells.shape[0])

    @property
    def width(self) -> int:
        return int(self.cells.shape[1])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.height, self.width)

    @property
    def known_count(self) -> int:
        return int(np.count_nonzero(self.cells >= CellState.FREE))

    # --- Coordinates -------------------------------------------------------

    def world_to_cell(self, x: float, y: float) -> Cell:
        return (
            math.floor((x - self.origin[0]) / self.resolution),
            math.floor((y - self.origin[1]) / self.resolution),
        )

    def cell_to_world(self, cell: Cell) -> Point:
        """World position of the cell centre."""
        return (
            self.origin[0] + (cell[0] + 0.5) * self.resolution,
            self.origin[1] + (cell[1] + 0.5) * self.resolution,
        )

    def world_to_grid(self, x: float, y: float) -> Point:
        """Continuous position in cell units."""
        return ((x - self.origin[0]) / self.resolution, (y - self.origin[1]) / self.resolution)

    def in_bounds(self, cell: Cell) -> bool:
        return 0 <= cell[0] < self.width and 0 <= cell[1] < self.height

    def contains(self, x: float, y: float) -> bool:
        return self.in_bounds(self.world_to_cell(x, y))

    def state(self, cell: Cell) -> CellState:
        """State of a cell; anything outside the grid is Unknown."""
        if not self.in_bounds(cell):
            return CellState.UNKNOWN
        return CellState(int(self.cells[cell[1], cell[0]]))

    def is_free(self, cell: Cell) -> bool:
        return self.in_bounds(cell) and self.cells[cell[1], cell[0]] == CellState.FREE

    # --- Derived grids -----------------------------------------------------

    def with_cells(self, cells: np.ndarray) -> OccupancyGrid:
        return OccupancyGrid(cells, self.origin, self.resolution)

    def copy(self) -> OccupancyGrid:
        return self.with_cells(self.cells.copy())

    def translated(self, dx_cells: int, dy_cells: int) -> OccupancyGrid:
        """Same cells, origin shifted by a whole number of cells."""
        return OccupancyGrid(
            self.cells.copy(),
            (
                self.origin[0] + dx_cells * self.resolution,
                self.origin[1] + dy_cells * self.resolution,
            ),
            self.resolution,
        )

    def grown_to_include(self, xmin: float, ymin: float, xmax: float, ymax: float) -> OccupancyGrid:
        """Grow by doubling (Unknown fill) until the world box fits.

        Existing cells keep their world coordinates. Returns ``self`` when the
        box already fits.
        """
        cx0, cy0 = self.world_to_cell(xmin, ymin)
        cx1, cy1 = self.world_to_cell(xmax, ymax)
        pad_left, pad_right = max(0, -cx0), max(0, cx1 - (self.width - 1))
        pad_bottom, pad_top = max(0, -cy0), max(0, cy1 - (self.height - 1))
        if not (pad_left or pad_right or pad_bottom or pad_top):
            return self

        left, new_w = _doubled_padding(self.width, pad_left, pad_right)
        bottom, new_h = _doubled_padding(self.height, pad_bottom, pad_top)
        cells = np.full((new_h, new_w), CellState.UNKNOWN, dtype=np.int8)
        cells[bottom : bottom + self.height, left : left + self.width] = self.cells
        origin = (
            self.origin[0] - left * self.resolution,
            self.origin[1] - bottom * self.resolution,
        )
        return OccupancyGrid(cells, origin, self.resolution)

    def nearest_free(self, cell: Cell, radius: int) -> Cell | None:
        """The Free cell closest to ``cell`` within a Chebyshev ``radius``.

        Ties break on (row, column) so the choice is deterministic.
        """
        if self.is_free(cell):
            return cell
        cx, cy = cell
        x0, x1 = max(0, cx - radius), min(self.width - 1, cx + radius)
        y0, y1 = max(0, cy - radius), min(self.height - 1, cy + radius)
        if x0 > x1 or y0 > y1:
            return None
        window = self.cells[y0 : y1 + 1, x0 : x1 + 1]
        ys, xs = np.nonzero(window == CellState.FREE)
        if ys.size == 0:
            return None
        ys = ys + y0
        xs = xs + x0
        d2 = (xs - cx) ** 2 + (ys - cy) ** 2
        order = np.lexsort((xs, ys, d2))
        best = order[0]
        return (int(xs[best]), int(ys[best]))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OccupancyGrid):
            return NotImplemented
        return (
            self.origin == other.origin
            and self.resolution == other.resolution
            and np.array_equal(self.cells, other.cells)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return (
            f"OccupancyGrid({self.width}x{self.height}, origin={self.origin}, "
            f"resolution={self.resolution}, known={self.known_count})"
        )


def _doubled_padding(size: int, pad_low: int, pad_high: int) -> tuple[int, int]:
    """Return (low offset, new size) for a doubling growth along one axis."""
    new_size = size
    while new_size < size + pad_low + pad_high:
        new_size *= 2
    slack = new_size - size - pad_low - pad_high
    return pad_low + slack // 2, new_size

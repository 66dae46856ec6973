"""Occupancy grid mapping: the agent's map, its post-processing and coverage."""

from .coverage import CoverageSample, coverage
from .pgm import read_map, write_map
from .scan import integrate_scan, scan_endpoint_cells
from .transforms import downsample_maxpool, inflate_obstacles, mark_cell_ahead, postprocess
from .types import Cell, CellState, OccupancyGrid

__all__ = [
    "Cell",
    "CellState",
    "CoverageSample",
    "OccupancyGrid",
    "coverage",
    "downsample_maxpool",
    "inflate_obstacles",
    "integrate_scan",
    "mark_cell_ahead",
    "postprocess",
    "read_map",
    "scan_endpoint_cells",
    "write_map",
]

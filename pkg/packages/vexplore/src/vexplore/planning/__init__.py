"""Path planning over post-processed occupancy grids."""

from .grid_search import DistanceField, dijkstra_sweep, plan_astar, shortcut
from .line_of_sight import line_of_sight
from .path import Path
from .schedule import replan_due
from .theta_star import plan_theta_star

__all__ = [
    "DistanceField",
    "Path",
    "dijkstra_sweep",
    "line_of_sight",
    "plan_astar",
    "plan_theta_star",
    "replan_due",
    "shortcut",
]

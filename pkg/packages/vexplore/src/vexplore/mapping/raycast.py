"""Grid traversal in cell units.

Two traversals live here:

- ``march_rays``: a vectorised Amanatides-Woo walk of many rays from one
  origin, used for sensing, scan integration and swept-motion checks. Each
  visited cell comes with the ray parameter at which the ray enters it. Ties
  at a cell corner step along x first, so a ray squeezing between two
  diagonal obstacles enters one of them.
- ``supercover_cells``: every cell a segment touches, including both side
  cells at a corner crossing. Used for line-of-sight checks.

All coordinates are continuous cell coordinates (world / resolution, relative
to the grid origin).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from vexplore.mapping.types import Cell

_TIE_EPS = 1e-12
_AXIS_EPS = 1e-12


@dataclass(frozen=True)
class RayMarch:
    """Cells visited by a bundle of rays, one column per ray.

    ``ix[k, r], iy[k, r]`` is the k-th cell of ray r, entered at ray
    parameter ``t[k, r]`` (cell units). ``valid`` masks cells entered no later
    than the ray's length; it is a prefix of every column.
    """

    ix: np.ndarray
    iy: np.ndarray
    t: np.ndarray
    valid: np.ndarray

    @property
    def counts(self) -> np.ndarray:
        return self.valid.sum(axis=0)


def march_rays(x0: float, y0: float, angles: np.ndarray, lengths: np.ndarray) -> RayMarch:
    """Walk every ray from (x0, y0) along ``angles`` up to ``lengths`` (cell units)."""
    angles = np.asarray(angles, dtype=float)
    lengths = np.broadcast_to(np.asarray(lengths, dtype=float), angles.shape)
    ux = np.cos(angles)
    uy = np.sin(angles)
    ux[np.abs(ux) < _AXIS_EPS] = 0.0
    uy[np.abs(uy) < _AXIS_EPS] = 0.0

    cx0, cy0 = math.floor(x0), math.floor(y0)
    step_x = np.sign(ux).astype(np.int64)
    step_y = np.sign(uy).astype(np.int64)
    with np.errstate(divide="ignore", invalid="ignore"):
        delta_x = np.where(ux != 0, 1.0 / np.abs(ux), np.inf)
        delta_y = np.where(uy != 0, 1.0 / np.abs(uy), np.inf)
        t_max_x = np.where(
            ux > 0, (cx0 + 1 - x0) / ux, np.where(ux < 0, (x0 - cx0) / -ux, np.inf)
        )
        t_max_y = np.where(
            uy > 0, (cy0 + 1 - y0) / uy, np.where(uy < 0, (y0 - cy0) / -uy, np.inf)
        )

    n = angles.shape[0]
    cur_x = np.full(n, cx0, dtype=np.int64)
    cur_y = np.full(n, cy0, dtype=np.int64)
    xs = [cur_x]
    ys = [cur_y]
    ts = [np.zeros(n)]
    longest = float(lengths.max()) if n else 0.0
    while n:
        use_x = t_max_x <= t_max_y
        t_enter = np.where(use_x, t_max_x, t_max_y)
        if np.all(t_enter > lengths):
            break
        cur_x = cur_x + np.where(use_x, step_x, 0)
        cur_y = cur_y + np.where(use_x, 0, step_y)
        t_max_x = np.where(use_x, t_max_x + delta_x, t_max_x)
        t_max_y = np.where(use_x, t_max_y, t_max_y + delta_y)
        xs.append(cur_x)
        ys.append(cur_y)
        ts.append(t_enter)
        if len(ts) > 4 * longest + 8:  # pragma: no cover - guards against NaN input
            break

    t = np.stack(ts)
    return RayMarch(np.stack(xs), np.stack(ys), t, t <= lengths[None, :])


def supercover_cells(x0: float, y0: float, x1: float, y1: float) -> list[Cell]:
    """All cells touched by the segment (x0, y0) -> (x1, y1), in traversal order."""
    ix, iy = math.floor(x0), math.floor(y0)
    dx, dy = x1 - x0, y1 - y0
    sx = (dx > 0) - (dx < 0)
    sy = (dy > 0) - (dy < 0)
    delta_x = abs(1.0 / dx) if dx else math.inf
    delta_y = abs(1.0 / dy) if dy else math.inf
    if dx > 0:
        t_max_x = (ix + 1 - x0) / dx
    elif dx < 0:
        t_max_x = (x0 - ix) / -dx
    else:
        t_max_x = math.inf
    if dy > 0:
        t_max_y = (iy + 1 - y0) / dy
    elif dy < 0:
        t_max_y = (y0 - iy) / -dy
    else:
        t_max_y = math.inf

    cells: list[Cell] = [(ix, iy)]
    while min(t_max_x, t_max_y) <= 1.0:
        if abs(t_max_x - t_max_y) <= _TIE_EPS:
            cells.append((ix + sx, iy))
            cells.append((ix, iy + sy))
            ix += sx
            iy += sy
            t_max_x += delta_x
            t_max_y += delta_y
        elif t_max_x < t_max_y:
            ix += sx
            t_max_x += delta_x
        else:
            iy += sy
            t_max_y += delta_y
        cells.append((ix, iy))

    # A segment lying on a grid line touches the cells on both sides of it.
    if dy == 0 and y0 == math.floor(y0):
        cells.extend([(cx, cy - 1) for cx, cy in list(cells)])
    if dx == 0 and x0 == math.floor(x0):
        cells.extend([(cx - 1, cy) for cx, cy in list(cells)])
    return cells

"""Planar depth sensing by ray casting against the ground-truth grid.

Ideal depth reports the distance to the first gt cell that is not Free
(Unknown gt cells are opaque, invisible obstacles are not). Rays that leave
the map see open space. Corrupted depth imitates a learned monocular depth
network: ranges get multiplicative noise, and narrow openings such as tight
doorways may be reported as walls. Whether an opening is closed is decided
once per episode, the first time it is seen.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import StrEnum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from vexplore.core.exceptions import ParameterError
from vexplore.geometry import Pose
from vexplore.mapping.connectivity import label_components
from vexplore.mapping.raycast import march_rays
from vexplore.mapping.types import CellState
from vexplore.sim.scene import Scene

logger = logging.getLogger(__name__)

_RANGE_EPS = 1e-12


class DepthMode(StrEnum):
    IDEAL = "ideal_depth"
    CORRUPTED = "corrupted_depth"


class SensorParams(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    fov_deg: float = Field(default=90.0, gt=0, le=360)
    max_range: float = Field(default=5.0, gt=0)
    n_rays: int = Field(default=180, ge=1)
    range_noise_sigma: float = Field(default=0.05, ge=0)
    gap_threshold_m: float = Field(default=0.9, ge=0)
    p_close: float = Field(default=0.5, ge=0, le=1)

    @property
    def fov(self) -> float:
        return math.radians(self.fov_deg)

    def bearings(self) -> np.ndarray:
        if self.n_rays == 1:
            return np.zeros(1)
        return np.linspace(-self.fov / 2, self.fov / 2, self.n_rays)


@dataclass(frozen=True, eq=False)
class DepthScan:
    """Rays as parallel arrays: bearing relative to the heading, range, hit flag."""

    bearings: np.ndarray
    ranges: np.ndarray
    hits: np.ndarray
    fov: float
    max_range: float

    def __post_init__(self) -> None:
        bearings = np.asarray(self.bearings, dtype=float).reshape(-1)
        ranges = np.asarray(self.ranges, dtype=float).reshape(-1)
        hits = np.asarray(self.hits, dtype=bool).reshape(-1)
        if not bearings.size == ranges.size == hits.size:
            raise ParameterError("bearings, ranges and hits must have the same length")
        if np.any(np.abs(bearings) > self.fov / 2 + 1e-9):
            raise ParameterError("ray bearing outside the field of view")
        if np.any(ranges < 0) or np.any(ranges > self.max_range + 1e-9):
            raise ParameterError("ray range outside [0, max_range]")
        if np.any(hits & (ranges >= self.max_range - _RANGE_EPS)):
            raise ParameterError("a ray at max range cannot report a hit")
        object.__setattr__(self, "bearings", bearings)
        object.__setattr__(self, "ranges", ranges)
        object.__setattr__(self, "hits", hits)

    @classmethod
    def from_rays(
        cls, rays: list[tuple[float, float, bool]], fov: float, max_range: float
    ) -> DepthScan:
        if not rays:
            return cls(np.zeros(0), np.zeros(0), np.zeros(0, dtype=bool), fov, max_range)
        bearings, ranges, hits = zip(*rays, strict=True)
        return cls(np.array(bearings), np.array(ranges), np.array(hits), fov, max_range)

    @property
    def size(self) -> int:
        return int(self.bearings.size)

    @property
    def rays(self) -> list[tuple[float, float, bool]]:
        return list(
            zip(self.bearings.tolist(), self.ranges.tolist(), self.hits.tolist(), strict=True)
        )

    def endpoints(self, pose: Pose) -> tuple[np.ndarray, np.ndarray]:
        angles = pose.heading + self.bearings
        return pose.x + self.ranges * np.cos(angles), pose.y + self.ranges * np.sin(angles)


def run_lengths(mask: np.ndarray) -> np.ndarray:
    """For every True cell, the length of the horizontal run of True cells it sits in."""
    out = np.zeros(mask.shape, dtype=np.int32)
    for y, row in enumerate(mask):
        edges = np.flatnonzero(np.diff(np.concatenate(([0], row.astype(np.int8), [0]))))
        for start, stop in zip(edges[::2], edges[1::2], strict=True):
            out[y, start:stop] = stop - start
    return out


def narrow_regions(scene: Scene, gap_threshold_m: float) -> tuple[np.ndarray, int]:
    """Label (4-connected) the Free cells whose row or column opening is under the threshold."""
    free = scene.gt.cells == CellState.FREE
    spans = np.minimum(run_lengths(free), run_lengths(free.T).T)
    narrow = free & (spans * scene.gt.resolution < gap_threshold_m)
    return label_components(narrow)


class DepthCorruption:
    """Per-episode corruption state: RNG stream and the closed/open opening decisions."""

    def __init__(self, scene: Scene, params: SensorParams, rng: np.random.Generator) -> None:
        self.params = params
        self.rng = rng
        self.labels, self.region_count = narrow_regions(scene, params.gap_threshold_m)
        self.decisions: dict[int, bool] = {}
        logger.debug("%s: %d narrow openings", scene.name, self.region_count)

    def closed_labels(self, seen: np.ndarray) -> np.ndarray:
        """Decide any openings seen for the first time; return every closed label."""
        for label in np.unique(seen).tolist():
            if label and label not in self.decisions:
                self.decisions[label] = bool(self.rng.random() < self.params.p_close)
        return np.array([k for k, closed in sorted(self.decisions.items()) if closed], dtype=int)


def sense(
    scene: Scene,
    true_pose: Pose,
    params: SensorParams | None = None,
    corruption: DepthCorruption | None = None,
) -> DepthScan:
    """Cast ``n_rays`` evenly over the field of view from the true pose."""
    params = params or SensorParams()
    gt = scene.gt
    bearings = params.bearings()
    n = bearings.size
    gx, gy = gt.world_to_grid(true_pose.x, true_pose.y)
    march = march_rays(gx, gy, true_pose.heading + bearings, params.max_range / gt.resolution)

    inside = (march.ix >= 0) & (march.ix < gt.width) & (march.iy >= 0) & (march.iy < gt.height)
    cx = np.clip(march.ix, 0, gt.width - 1)
    cy = np.clip(march.iy, 0, gt.height - 1)
    opaque = inside & (gt.cells[cy, cx] != CellState.FREE)
    stop = march.valid & (opaque | ~inside)
    has_stop = stop.any(axis=0)
    first = np.where(has_stop, stop.argmax(axis=0), march.t.shape[0])
    rays = np.arange(n)
    depth = np.arange(march.t.shape[0])[:, None]

    safe_first = np.minimum(first, march.t.shape[0] - 1)
    hits = has_stop & inside[safe_first, rays]
    ranges = np.where(hits, march.t[safe_first, rays] * gt.resolution, params.max_range)

    if corruption is not None:
        robot_label = corruption.labels[gt.world_to_cell(true_pose.x, true_pose.y)[::-1]]
        labels = np.where(inside, corruption.labels[cy, cx], 0)
        ahead = march.valid & (depth < first[None, :]) & (labels > 0) & (labels != robot_label)
        closed = ahead & np.isin(labels, corruption.closed_labels(labels[ahead]))
        blocked = closed.any(axis=0)
        at = closed.argmax(axis=0)
        ranges = np.where(blocked, march.t[at, rays] * gt.resolution, ranges)
        hits = hits | blocked

        noise = corruption.rng.normal(size=n)
        ranges = np.where(hits, ranges * (1.0 + params.range_noise_sigma * noise), ranges)
        ranges = np.clip(ranges, 0.0, params.max_range)

    far = ranges >= params.max_range - _RANGE_EPS
    ranges = np.where(far, params.max_range, ranges)
    return DepthScan(bearings, ranges, hits & ~far, params.fov, params.max_range)

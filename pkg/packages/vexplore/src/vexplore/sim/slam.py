"""vSLAM surrogate: drifting pose estimates and rotation-driven tracking loss.

While tracking, every tick perturbs an accumulated drift offset with
zero-mean Gaussian noise and reports the true pose shifted by it. Each tick
may also lose tracking with probability ``loss_prob_per_rad * |turn|``, so
rotating on the spot is what gets the robot lost. Once lost, no estimate is
produced until ``relocalize`` sees enough of the current view already in
the map.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from enum import StrEnum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from vexplore.control.actions import Action
from vexplore.core.exceptions import ParameterError
from vexplore.geometry import Pose
from vexplore.mapping.scan import scan_endpoint_cells
from vexplore.mapping.types import CellState, OccupancyGrid
from vexplore.sim.sensor import DepthScan

logger = logging.getLogger(__name__)

_CERTAIN = 1.0 - 1e-12


class SlamParams(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    drift_sigma_trans: float = Field(default=0.002, ge=0)
    drift_sigma_rot: float = Field(default=0.001, ge=0)
    loss_prob_per_rad: float = Field(default=0.02, ge=0)
    overlap_threshold: float = Field(default=0.30, ge=0, le=1)


class Tracking(StrEnum):
    OK = "ok"
    LOST = "lost"


@dataclass(frozen=True)
class SlamSurrogateState:
    """Tracking status, noise parameters, loss counter and the RNG stream.

    The generator is owned by this state; states derived by ``slam_update``
    share it, so an older state must not be stepped again.
    """

    tracking: Tracking
    drift_sigma_trans: float
    drift_sigma_rot: float
    loss_prob_per_rad: float
    loss_count: int
    rng_seed: int
    rng: np.random.Generator = field(repr=False, compare=False)
    drift: tuple[float, float, float] = (0.0, 0.0, 0.0)
    last_estimate: Pose | None = None

    def __post_init__(self) -> None:
        if self.drift_sigma_trans < 0 or self.drift_sigma_rot < 0 or self.loss_prob_per_rad < 0:
            raise ParameterError("SLAM noise parameters must be non-negative")
        if self.loss_count < 0:
            raise ParameterError("loss count cannot be negative")

    @property
    def lost(self) -> bool:
        return self.tracking is Tracking.LOST

    def estimate_for(self, true_pose: Pose) -> Pose:
        """The pose SLAM would report for ``true_pose`` with the current drift."""
        dx, dy, dth = self.drift
        return Pose(true_pose.x + dx, true_pose.y + dy, true_pose.heading + dth)


def new_slam_state(
    params: SlamParams | None = None, seed: int = 0, rng: np.random.Generator | None = None
) -> SlamSurrogateState:
    params = params or SlamParams()
    return SlamSurrogateState(
        tracking=Tracking.OK,
        drift_sigma_trans=params.drift_sigma_trans,
        drift_sigma_rot=params.drift_sigma_rot,
        loss_prob_per_rad=params.loss_prob_per_rad,
        loss_count=0,
        rng_seed=seed,
        rng=rng if rng is not None else np.random.default_rng(seed),
    )


def loss_probability(state: SlamSurrogateState, action: Action) -> float:
    return min(1.0, state.loss_prob_per_rad * abs(action.rotation))


def slam_update(
    state: SlamSurrogateState, true_pose: Pose, action: Action, dt: float
) -> tuple[Pose | None, SlamSurrogateState]:
    """Estimate the pose after ``action``; ``None`` means tracking is lost."""
    if dt <= 0:
        raise ParameterError(f"dt must be positive, got {dt}")
    if state.lost:
        return None, state

    # Fixed draw count per tick keeps the stream aligned across configs.
    noise = state.rng.normal(size=3)
    u = float(state.rng.random())
    p = loss_probability(state, action)
    if p >= _CERTAIN or u < p:
        logger.debug("Tracking lost (p=%.4f, loss #%d)", p, state.loss_count + 1)
        return None, replace(state, tracking=Tracking.LOST, loss_count=state.loss_count + 1)

    dx, dy, dth = state.drift
    drift = (
        dx + state.drift_sigma_trans * float(noise[0]),
        dy + state.drift_sigma_trans * float(noise[1]),
        dth + state.drift_sigma_rot * float(noise[2]),
    )
    advanced = replace(state, drift=drift)
    estimate = advanced.estimate_for(true_pose)
    return estimate, replace(advanced, last_estimate=estimate)


def scan_overlap(grid: OccupancyGrid, pose: Pose, scan: DepthScan) -> float:
    """Fraction of scan endpoints that land in already-known map cells.

    Endpoints are the cells ``integrate_scan`` would mark for the same scan,
    so a scan taken from an unchanged pose overlaps its own map fully.
    """
    if scan.size == 0:
        return 0.0
    xs, ys = scan_endpoint_cells(grid, pose, scan)
    inside = (xs >= 0) & (xs < grid.width) & (ys >= 0) & (ys < grid.height)
    known = grid.cells[ys[inside], xs[inside]] >= CellState.FREE
    return int(np.count_nonzero(known)) / scan.size


def relocalize(
    state: SlamSurrogateState, overlap: float, params: SlamParams | None = None
) -> tuple[bool, SlamSurrogateState]:
    """Resume tracking when the view overlaps the map enough."""
    params = params or SlamParams()
    if not state.lost:
        return True, state
    if overlap >= params.overlap_threshold:
        logger.debug("Relocalized with overlap %.2f", overlap)
        return True, replace(state, tracking=Tracking.OK)
    return False, state

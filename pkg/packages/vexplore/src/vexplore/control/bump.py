"""Bump detector: commanded forward motion that the pose estimate never shows."""

from __future__ import annotations

from dataclasses import dataclass, replace

from pydantic import BaseModel, ConfigDict, Field

from vexplore.control.actions import Action
from vexplore.core.exceptions import ParameterError
from vexplore.geometry import Point, Pose, distance

_TIME_SLACK = 1e-9


class BumpParams(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    window: float = Field(default=1.0, gt=0)
    motion_epsilon: float = Field(default=0.02, ge=0)


@dataclass(frozen=True)
class BumpEvent:
    pose: Pose
    stalled_for: float


@dataclass(frozen=True)
class BumpDetectorState:
    """Stall bookkeeping.

    ``last_observed_position`` anchors the current stall window: displacement
    is measured from it, and it moves whenever motion is seen or the window
    resets.
    """

    window: float = 1.0
    commanded_forward_since: float | None = None
    last_observed_position: Point | None = None
    stalled_for: float = 0.0

    def __post_init__(self) -> None:
        if self.window <= 0:
            raise ParameterError(f"bump window must be positive, got {self.window}")

    @classmethod
    def start(cls, params: BumpParams, position: Point | None = None) -> BumpDetectorState:
        return cls(window=params.window, last_observed_position=position)


def bump_update(
    state: BumpDetectorState,
    commanded: Action,
    observed_pose: Pose,
    dt: float,
    params: BumpParams | None = None,
    now: float | None = None,
) -> tuple[BumpEvent | None, BumpDetectorState]:
    """Accumulate stalled Forward time; fire once it reaches the window.

    Any non-Forward command, or displacement of at least ``motion_epsilon``
    from the window anchor, resets the clock. Firing resets it too.
    """
    if dt <= 0:
        raise ParameterError(f"dt must be positive, got {dt}")
    params = params or BumpParams(window=state.window)
    position = observed_pose.position

    if not commanded.is_forward:
        return None, replace(
            state, commanded_forward_since=None, last_observed_position=position, stalled_for=0.0
        )

    since = state.commanded_forward_since
    if since is None and now is not None:
        since = now - dt
    anchor = state.last_observed_position or position
    if distance(anchor, position) >= params.motion_epsilon:
        return None, replace(
            state, commanded_forward_since=since, last_observed_position=position, stalled_for=0.0
        )

    stalled_for = state.stalled_for + dt
    if stalled_for >= state.window - _TIME_SLACK:
        event = BumpEvent(pose=observed_pose, stalled_for=stalled_for)
        return event, replace(
            state, commanded_forward_since=None, last_observed_position=position, stalled_for=0.0
        )
    return None, replace(
        state, commanded_forward_since=since, last_observed_position=anchor, stalled_for=stalled_for
    )

"""Path follower state machine.

The follower runs in one of four modes:

- ``LOOK_AROUND``: turn left on the spot until a full revolution is done.
- ``FOLLOW_PATH``: turn towards the next waypoint until the heading error is
  under the angle threshold, then drive forward.
- ``RECOVERY``: the scripted tracking-loss maneuver (half turn left, a short
  nudge forward, half turn left) followed by a replan request.
- ``IDLE``: the goal has been reached.

All transitions happen in the step functions below; time never enters the
follower, so identical inputs give identical actions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import StrEnum

from pydantic import BaseModel, ConfigDict, Field

from vexplore.control.actions import Action
from vexplore.core.exceptions import ParameterError
from vexplore.geometry import TWO_PI, Pose, bearing, distance, normalize_angle
from vexplore.planning.path import Path

EPS = 1e-9


class FollowerParams(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    turn_step_deg: float = Field(default=10.0, gt=0, le=180)
    forward_step: float = Field(default=0.1, gt=0)
    angle_threshold_deg: float = Field(default=5.0, gt=0, lt=180)
    waypoint_radius: float = Field(default=0.15, ge=0)
    goal_radius: float = Field(default=0.2, ge=0)
    forward_nudge: float = Field(default=0.3, ge=0)

    @property
    def turn_step(self) -> float:
        return math.radians(self.turn_step_deg)

    @property
    def angle_threshold(self) -> float:
        return math.radians(self.angle_threshold_deg)


class FollowerMode(StrEnum):
    LOOK_AROUND = "look_around"
    FOLLOW_PATH = "follow_path"
    RECOVERY = "recovery"
    IDLE = "idle"


class RecoveryStage(StrEnum):
    TURN1 = "turn1"
    FORWARD = "forward"
    TURN2 = "turn2"


@dataclass(frozen=True)
class FollowerState:
    """Follower mode plus the bookkeeping each mode needs.

    ``remaining`` is the rotation left in ``LOOK_AROUND`` and the rotation or
    distance left in the current recovery stage.
    """

    mode: FollowerMode
    angle_threshold: float = math.radians(5.0)
    remaining: float = 0.0
    stage: RecoveryStage | None = None
    forward_stall_clock: float = 0.0
    replan_requested: bool = False
    path: Path | None = None
    waypoint: int = 0
    last_error: str | None = None
    heading_error: float | None = None

    def __post_init__(self) -> None:
        if self.angle_threshold <= 0:
            raise ParameterError(f"angle threshold must be positive, got {self.angle_threshold}")
        if self.mode is FollowerMode.LOOK_AROUND and not 0 <= self.remaining <= TWO_PI + EPS:
            raise ParameterError(f"look-around remaining must be in [0, 2pi], got {self.remaining}")
        if (self.mode is FollowerMode.RECOVERY) != (self.stage is not None):
            raise ParameterError("a recovery stage is set exactly when the mode is recovery")

    @property
    def busy(self) -> bool:
        """True while a scripted maneuver owns the robot."""
        return self.mode in (FollowerMode.LOOK_AROUND, FollowerMode.RECOVERY)


def initial_state(
    params: FollowerParams | None = None, *, look_around: bool = True
) -> FollowerState:
    params = params or FollowerParams()
    if look_around:
        return FollowerState(
            FollowerMode.LOOK_AROUND, angle_threshold=params.angle_threshold, remaining=TWO_PI
        )
    return FollowerState(FollowerMode.FOLLOW_PATH, angle_threshold=params.angle_threshold)


def follow_step(
    state: FollowerState, pose: Pose, path: Path | None, params: FollowerParams | None = None
) -> tuple[Action, FollowerState]:
    """One action towards the next waypoint of ``path``.

    Positive heading error (target counter-clockwise of the heading) turns
    left. An error exactly at the threshold turns.
    """
    params = params or FollowerParams()
    if path is None or len(path) == 0:
        return Action.stay(), replace(
            state,
            mode=FollowerMode.FOLLOW_PATH,
            stage=None,
            last_error="empty path",
            heading_error=None,
        )

    if distance(pose.position, path.goal) <= params.goal_radius + EPS:
        return Action.stay(), replace(
            state,
            mode=FollowerMode.IDLE,
            stage=None,
            path=path,
            waypoint=len(path) - 1,
            last_error=None,
            heading_error=None,
        )

    index = state.waypoint if path is state.path else min(1, len(path) - 1)
    last = len(path) - 1
    while index < last and distance(pose.position, path.points[index]) <= params.waypoint_radius:
        index += 1
    target = path.points[index]

    err = normalize_angle(bearing(pose.position, target) - pose.heading)
    threshold = state.angle_threshold
    if abs(err) < threshold - EPS:
        action = Action.forward(params.forward_step)
    elif err > 0:
        action = Action.turn_left(params.turn_step)
    else:
        action = Action.turn_right(params.turn_step)
    return action, replace(
        state,
        mode=FollowerMode.FOLLOW_PATH,
        stage=None,
        path=path,
        waypoint=index,
        last_error=None,
        heading_error=err,
    )


def look_around_step(
    state: FollowerState, params: FollowerParams | None = None
) -> tuple[Action | None, FollowerState]:
    """Turn left until a full revolution is commanded.

    Returns ``None`` as the action when nothing is left to turn; the state
    then has already moved on to ``FOLLOW_PATH``.
    """
    if state.mode is not FollowerMode.LOOK_AROUND:
        raise ParameterError(f"look-around step in mode {state.mode}")
    params = params or FollowerParams()
    if state.remaining <= EPS:
        return None, replace(state, mode=FollowerMode.FOLLOW_PATH, remaining=0.0)
    remaining = max(0.0, state.remaining - params.turn_step)
    mode = FollowerMode.FOLLOW_PATH if remaining <= EPS else FollowerMode.LOOK_AROUND
    return Action.turn_left(params.turn_step), replace(state, mode=mode, remaining=remaining)


def enter_recovery(state: FollowerState) -> FollowerState:
    """Start the recovery program from its first half turn, even mid-recovery."""
    return replace(
        state,
        mode=FollowerMode.RECOVERY,
        stage=RecoveryStage.TURN1,
        remaining=math.pi,
        replan_requested=False,
        heading_error=None,
    )


def abort_recovery_forward(state: FollowerState) -> FollowerState:
    """Cut the recovery nudge short, e.g. after a bump; other stages are untouched."""
    if state.mode is FollowerMode.RECOVERY and state.stage is RecoveryStage.FORWARD:
        return replace(state, stage=RecoveryStage.TURN2, remaining=math.pi)
    return state


def recovery_step(
    state: FollowerState, params: FollowerParams | None = None
) -> tuple[Action, FollowerState]:
    """Advance the recovery program by one action."""
    if state.mode is not FollowerMode.RECOVERY or state.stage is None:
        raise ParameterError(f"recovery step in mode {state.mode}")
    params = params or FollowerParams()

    if state.stage is RecoveryStage.FORWARD:
        dx = min(params.forward_step, state.remaining)
        remaining = state.remaining - dx
        if remaining <= EPS:
            return Action.forward(dx), replace(state, stage=RecoveryStage.TURN2, remaining=math.pi)
        return Action.forward(dx), replace(state, remaining=remaining)

    action = Action.turn_left(params.turn_step)
    remaining = max(0.0, state.remaining - params.turn_step)
    if remaining > EPS:
        return action, replace(state, remaining=remaining)
    if state.stage is RecoveryStage.TURN1:
        if params.forward_nudge <= EPS:
            return action, replace(state, stage=RecoveryStage.TURN2, remaining=math.pi)
        return action, replace(state, stage=RecoveryStage.FORWARD, remaining=params.forward_nudge)
    return action, replace(
        state,
        mode=FollowerMode.FOLLOW_PATH,
        stage=None,
        remaining=0.0,
        replan_requested=True,
        path=None,
    )


def clear_replan_request(state: FollowerState) -> FollowerState:
    return replace(state, replan_requested=False) if state.replan_requested else state

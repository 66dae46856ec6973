"""Path following, scripted maneuvers and the bump detector."""

from .actions import Action, ActionKind
from .bump import BumpDetectorState, BumpEvent, BumpParams, bump_update
from .follower import (
    FollowerMode,
    FollowerParams,
    FollowerState,
    RecoveryStage,
    abort_recovery_forward,
    clear_replan_request,
    enter_recovery,
    follow_step,
    initial_state,
    look_around_step,
    recovery_step,
)

__all__ = [
    "Action",
    "ActionKind",
    "BumpDetectorState",
    "BumpEvent",
    "BumpParams",
    "FollowerMode",
    "FollowerParams",
    "FollowerState",
    "RecoveryStage",
    "abort_recovery_forward",
    "bump_update",
    "clear_replan_request",
    "enter_recovery",
    "follow_step",
    "initial_state",
    "look_around_step",
    "recovery_step",
]

"""Ground-truth motion under the four-action model."""

from __future__ import annotations

import numpy as np

from vexplore.control.actions import Action, ActionKind
from vexplore.geometry import Pose
from vexplore.mapping.raycast import march_rays
from vexplore.sim.scene import Scene

# Count a cell whose boundary the move ends exactly on as swept.
_SWEEP_SLACK = 1e-9


def forward_blocked(scene: Scene, pose: Pose, dx: float) -> bool:
    """True if any cell swept by moving ``dx`` ahead is outside the map or blocked."""
    gt = scene.gt
    gx, gy = gt.world_to_grid(pose.x, pose.y)
    length = dx / gt.resolution + _SWEEP_SLACK
    march = march_rays(gx, gy, np.array([pose.heading]), np.array([length]))
    xs = march.ix[march.valid[:, 0], 0]
    ys = march.iy[march.valid[:, 0], 0]
    inside = (xs >= 0) & (xs < gt.width) & (ys >= 0) & (ys < gt.height)
    if not inside.all():
        return True
    return bool(scene.blocked[ys, xs].any())


def step_kinematics(scene: Scene, true_pose: Pose, action: Action) -> Pose:
    """Apply one action to the true pose; a blocked Forward leaves it unchanged."""
    match action.kind:
        case ActionKind.FORWARD:
            if action.magnitude == 0 or forward_blocked(scene, true_pose, action.magnitude):
                return true_pose
            return true_pose.advanced(action.magnitude)
        case ActionKind.TURN_LEFT | ActionKind.TURN_RIGHT:
            return true_pose.rotated(action.rotation)
        case _:
            return true_pose

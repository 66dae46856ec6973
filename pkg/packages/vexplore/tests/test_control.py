"""Tests for actions, the path follower state machine and the bump detector."""

import math

import pytest
from vexplore.control.actions import Action, ActionKind
from vexplore.control.bump import BumpDetectorState, BumpParams, bump_update
from vexplore.control.follower import (
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
from vexplore.core.exceptions import ParameterError
from vexplore.geometry import Pose
from vexplore.planning.path import Path

DT = 0.1


def _run_recovery(state: FollowerState, params: FollowerParams) -> list[Action]:
    actions = []
    while state.mode is FollowerMode.RECOVERY:
        action, state = recovery_step(state, params)
        actions.append(action)
        assert len(actions) < 200
    return actions


class TestActions:
    def test_rotation_sign(self):
        assert Action.turn_left(0.2).rotation == 0.2
        assert Action.turn_right(0.2).rotation == -0.2
        assert Action.forward(0.1).rotation == 0.0
        assert Action.forward(0.1).translation == 0.1

    def test_negative_magnitude(self):
        with pytest.raises(ParameterError):
            Action.forward(-0.1)

    def test_stay_has_no_magnitude(self):
        with pytest.raises(ParameterError):
            Action(ActionKind.STAY, 1.0)
        assert Action.stay().to_dict() == {"kind": "stay", "magnitude": 0.0}


class TestLookAround:
    def test_full_revolution_in_ten_degree_steps(self):
        params = FollowerParams()
        state = initial_state(params)
        assert state.mode is FollowerMode.LOOK_AROUND
        actions = []
        while state.mode is FollowerMode.LOOK_AROUND:
            action, state = look_around_step(state, params)
            actions.append(action)
        assert len(actions) == 36
        assert all(a.kind is ActionKind.TURN_LEFT for a in actions)
        assert sum(a.magnitude for a in actions) == pytest.approx(2 * math.pi)
        assert state.mode is FollowerMode.FOLLOW_PATH

    def test_nothing_left_to_turn(self):
        state = FollowerState(FollowerMode.LOOK_AROUND, remaining=0.0)
        action, state = look_around_step(state)
        assert action is None
        assert state.mode is FollowerMode.FOLLOW_PATH

    def test_partial_step_still_turns_once(self):
        params = FollowerParams()
        state = FollowerState(FollowerMode.LOOK_AROUND, remaining=params.turn_step / 2)
        action, state = look_around_step(state, params)
        assert action == Action.turn_left(params.turn_step)
        assert state.mode is FollowerMode.FOLLOW_PATH

    def test_wrong_mode(self):
        with pytest.raises(ParameterError):
            look_around_step(initial_state(look_around=False))

    def test_remaining_is_bounded(self):
        with pytest.raises(ParameterError):
            FollowerState(FollowerMode.LOOK_AROUND, remaining=7.0)


class TestRecovery:
    def test_half_turn_nudge_half_turn(self):
        params = FollowerParams()
        state = enter_recovery(initial_state(params, look_around=False))
        actions = _run_recovery(state, params)
        kinds = [a.kind for a in actions]
        assert kinds == (
            [ActionKind.TURN_LEFT] * 18 + [ActionKind.FORWARD] * 3 + [ActionKind.TURN_LEFT] * 18
        )
        assert sum(a.magnitude for a in actions[:18]) == pytest.approx(math.pi)
        assert sum(a.magnitude for a in actions[18:21]) == pytest.approx(0.3)

    def test_ends_with_replan_request(self):
        params = FollowerParams()
        state = enter_recovery(initial_state(params, look_around=False))
        while state.mode is FollowerMode.RECOVERY:
            _, state = recovery_step(state, params)
        assert state.mode is FollowerMode.FOLLOW_PATH
        assert state.replan_requested
        assert state.path is None
        assert not clear_replan_request(state).replan_requested

    def test_short_nudge(self):
        params = FollowerParams(forward_nudge=0.2)
        actions = _run_recovery(enter_recovery(initial_state(params)), params)
        assert sum(a.is_forward for a in actions) == 2

    def test_no_nudge(self):
        params = FollowerParams(forward_nudge=0.0)
        actions = _run_recovery(enter_recovery(initial_state(params)), params)
        assert len(actions) == 36
        assert not any(a.is_forward for a in actions)

    def test_reentry_restarts_from_first_turn(self):
        params = FollowerParams()
        state = enter_recovery(initial_state(params))
        for _ in range(25):
            _, state = recovery_step(state, params)
        assert state.stage is RecoveryStage.TURN2
        state = enter_recovery(state)
        assert state.stage is RecoveryStage.TURN1
        assert state.remaining == pytest.approx(math.pi)
        assert len(_run_recovery(state, params)) == 39

    def test_abort_forward_skips_to_second_turn(self):
        params = FollowerParams()
        state = enter_recovery(initial_state(params))
        assert abort_recovery_forward(state) == state
        for _ in range(19):
            _, state = recovery_step(state, params)
        assert state.stage is RecoveryStage.FORWARD
        aborted = abort_recovery_forward(state)
        assert aborted.stage is RecoveryStage.TURN2
        assert len(_run_recovery(aborted, params)) == 18

    def test_wrong_mode(self):
        with pytest.raises(ParameterError):
            recovery_step(initial_state(look_around=False))


class TestFollowStep:
    @pytest.fixture
    def start(self) -> FollowerState:
        return initial_state(look_around=False)

    @pytest.mark.parametrize(
        ("target", "kind"),
        [
            ((0.0, 1.0), ActionKind.TURN_LEFT),
            ((0.0, -1.0), ActionKind.TURN_RIGHT),
            ((1.0, 0.0), ActionKind.FORWARD),
        ],
    )
    def test_turns_towards_waypoint(self, start, target, kind):
        action, state = follow_step(start, Pose(0.0, 0.0, 0.0), Path(((0.0, 0.0), target)))
        assert action.kind is kind
        assert state.mode is FollowerMode.FOLLOW_PATH

    @pytest.mark.parametrize(
        ("deg", "kind"), [(4.9, ActionKind.FORWARD), (5.1, ActionKind.TURN_LEFT)]
    )
    def test_angle_threshold(self, start, deg, kind):
        target = (2 * math.cos(math.radians(deg)), 2 * math.sin(math.radians(deg)))
        action, _ = follow_step(start, Pose(0.0, 0.0, 0.0), Path(((0.0, 0.0), target)))
        assert action.kind is kind

    def test_error_at_threshold_turns(self, start):
        target = (2 * math.cos(math.radians(-5.0)), 2 * math.sin(math.radians(-5.0)))
        action, _ = follow_step(start, Pose(0.0, 0.0, 0.0), Path(((0.0, 0.0), target)))
        assert action.kind is ActionKind.TURN_RIGHT

    def test_step_sizes(self, start):
        params = FollowerParams()
        turn, _ = follow_step(start, Pose(0.0, 0.0), Path(((0.0, 0.0), (0.0, 3.0))), params)
        fwd, _ = follow_step(start, Pose(0.0, 0.0), Path(((0.0, 0.0), (3.0, 0.0))), params)
        assert turn.magnitude == pytest.approx(math.radians(10.0))
        assert fwd.magnitude == pytest.approx(0.1)

    def test_goal_reached(self, start):
        action, state = follow_step(start, Pose(0.0, 0.0), Path(((0.0, 0.0), (0.15, 0.0))))
        assert action.kind is ActionKind.STAY
        assert state.mode is FollowerMode.IDLE

    def test_empty_path(self, start):
        action, state = follow_step(start, Pose(0.0, 0.0), None)
        assert action.kind is ActionKind.STAY
        assert state.last_error == "empty path"

    def test_close_waypoints_are_skipped(self, start):
        path = Path(((0.0, 0.0), (0.1, 0.0), (2.0, 2.0)))
        action, state = follow_step(start, Pose(0.0, 0.0, 0.0), path)
        assert state.waypoint == 2
        assert action.kind is ActionKind.TURN_LEFT

    def test_waypoint_index_sticks_to_the_same_path(self, start):
        path = Path(((0.0, 0.0), (1.0, 0.0), (2.0, 0.0)))
        _, state = follow_step(start, Pose(0.95, 0.0, 0.0), path)
        assert state.waypoint == 2
        _, state = follow_step(state, Pose(0.5, 0.0, 0.0), path)
        assert state.waypoint == 2

    def test_forward_steps_reach_goal(self, start):
        path = Path(((0.0, 0.0), (1.0, 0.0)))
        pose = Pose(0.0, 0.0, 0.0)
        state = start
        for _ in range(20):
            action, state = follow_step(state, pose, path)
            if state.mode is FollowerMode.IDLE:
                break
            pose = pose.advanced(action.translation).rotated(action.rotation)
        assert state.mode is FollowerMode.IDLE
        assert pose.x == pytest.approx(0.8)


class TestBumpDetector:
    def _feed(self, state, poses, action=None, t0=0.0):
        action = action or Action.forward(0.1)
        events = []
        for i, pose in enumerate(poses):
            event, state = bump_update(state, action, pose, DT, now=t0 + (i + 1) * DT)
            events.append(event)
        return events, state

    def test_fires_after_one_second_stalled(self):
        state = BumpDetectorState.start(BumpParams(), (1.0, 1.0))
        events, _ = self._feed(state, [Pose(1.0, 1.0)] * 12)
        fired = [i for i, e in enumerate(events) if e is not None]
        assert fired[0] == 9
        assert events[9].stalled_for == pytest.approx(1.0)

    def test_moving_never_fires(self):
        state = BumpDetectorState.start(BumpParams(), (0.0, 0.0))
        poses = [Pose(0.1 * (i + 1), 0.0) for i in range(50)]
        events, _ = self._feed(state, poses)
        assert all(e is None for e in events)

    def test_creeping_below_epsilon_still_fires(self):
        state = BumpDetectorState.start(BumpParams(), (0.0, 0.0))
        poses = [Pose(0.001 * (i + 1), 0.0) for i in range(10)]
        events, _ = self._feed(state, poses)
        assert events[9] is not None

    def test_turn_resets_the_clock(self):
        state = BumpDetectorState.start(BumpParams(), (0.0, 0.0))
        events, state = self._feed(state, [Pose(0.0, 0.0)] * 9)
        assert all(e is None for e in events)
        event, state = bump_update(state, Action.turn_left(0.1), Pose(0.0, 0.0), DT)
        assert event is None
        assert state.stalled_for == 0.0
        events, _ = self._feed(state, [Pose(0.0, 0.0)] * 10)
        assert [e is not None for e in events] == [False] * 9 + [True]

    def test_firing_resets(self):
        state = BumpDetectorState.start(BumpParams(), (0.0, 0.0))
        events, state = self._feed(state, [Pose(0.0, 0.0)] * 10)
        assert events[-1] is not None
        assert state.stalled_for == 0.0
        assert state.commanded_forward_since is None

    def test_dt_must_be_positive(self):
        with pytest.raises(ParameterError):
            bump_update(BumpDetectorState(), Action.forward(0.1), Pose(0.0, 0.0), 0.0)

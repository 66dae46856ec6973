"""One exploration episode: the sense, map, plan, follow loop on a simulated robot.

Each tick at simulated time ``t = k / tick_hz``:

1. Sense from the true pose; integrate the scan at the estimated pose
   unless tracking is lost.
2. Take any coverage checkpoint that is due and note the first time the
   finish criterion holds.
3. Pick an action: look-around, recovery, or (re)plan at ``replan_hz`` and
   follow the path.
4. Move the robot, update the SLAM surrogate, and run the bump detector.

Once a recovery maneuver has ended while still lost, the next tick first
tries to relocalize against the map with its fresh scan.

Frontiers are found on the SLAM map itself; scoring and Theta* run on the
planner grid, falling back to the raw map when the planner grid has no
route. The episode ends at the duration or when no eligible frontier is
left. Meeting the finish criterion only records the finish time.

All randomness comes from one seed sequence per (seed, scene), so a record
is a pure function of its inputs.
"""

from __future__ import annotations

import logging
import math
import zlib
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from vexplore.bench.artifacts import TraceWriter
from vexplore.bench.render import render_map
from vexplore.control.actions import Action
from vexplore.control.bump import BumpDetectorState, bump_update
from vexplore.control.follower import (
    FollowerMode,
    FollowerState,
    abort_recovery_forward,
    clear_replan_request,
    enter_recovery,
    follow_step,
    initial_state,
    look_around_step,
    recovery_step,
)
from vexplore.core.exceptions import FrontierDetectionError
from vexplore.exploration.debug import decision_record
from vexplore.exploration.frontiers import detect_frontiers
from vexplore.exploration.goal import ranked_indices
from vexplore.exploration.scoring import DistanceMode, ScoredFrontier, score_frontiers
from vexplore.geometry import Point, distance
from vexplore.mapping.coverage import CoverageSample, coverage
from vexplore.mapping.scan import integrate_scan
from vexplore.mapping.transforms import mark_cell_ahead, postprocess
from vexplore.mapping.types import OccupancyGrid
from vexplore.models.run import CoveragePoint, RunConfig, RunRecord
from vexplore.planning.line_of_sight import line_of_sight
from vexplore.planning.path import Path as PlanPath
from vexplore.planning.schedule import replan_due
from vexplore.planning.theta_star import plan_theta_star
from vexplore.sim.kinematics import step_kinematics
from vexplore.sim.scene import Scene
from vexplore.sim.sensor import DepthCorruption, DepthMode, DepthScan, sense
from vexplore.sim.slam import new_slam_state, relocalize, scan_overlap, slam_update

logger = logging.getLogger(__name__)

# A new goal further than this from the previous one counts as a goal switch.
GOAL_SWITCH_DISTANCE = 0.5
_TIME_SLACK = 1e-9


def episode_rngs(scene: Scene, seed: int) -> tuple[np.random.Generator, np.random.Generator]:
    """Independent SLAM and sensor streams for one (seed, scene) pair."""
    root = np.random.SeedSequence([seed, zlib.crc32(scene.name.encode())])
    slam_seq, sensor_seq = root.spawn(2)
    return np.random.default_rng(slam_seq), np.random.default_rng(sensor_seq)


@dataclass
class EpisodeResult:
    """Mutable tallies while the episode runs."""

    samples: list[CoverageSample] = field(default_factory=list)
    finish_time: float | None = None
    goal_switches: int = 0
    bumps: int = 0
    replans: int = 0
    ticks: int = 0
    stop_reason: str = "duration"


class Episode:
    """State of one running episode. Use ``run_episode`` rather than this directly."""

    def __init__(
        self,
        scene: Scene,
        config: RunConfig,
        seed: int,
        *,
        trace: TraceWriter | None = None,
        render_dir: Path | None = None,
        label: str = "run",
    ) -> None:
        self.scene = scene
        self.config = config
        self.seed = seed
        self.trace = trace
        self.render_dir = render_dir
        self.label = label

        slam_rng, sensor_rng = episode_rngs(scene, seed)
        self.slam = new_slam_state(config.slam, seed, rng=slam_rng)
        self.corruption = (
            DepthCorruption(scene, config.sensor, sensor_rng)
            if config.depth_mode is DepthMode.CORRUPTED
            else None
        )
        gt = scene.gt
        self.map = OccupancyGrid.empty(gt.width, gt.height, gt.resolution, gt.origin)
        self.true_pose = scene.spawn
        self.estimate = scene.spawn
        self.follower: FollowerState = initial_state(config.follower, look_around=True)
        self.bump = BumpDetectorState.start(config.bump, scene.spawn.position)
        self.path: PlanPath | None = None
        self.goal: Point | None = None
        self.last_plan = -math.inf
        self.holding = False
        self.pool_factor = max(1, round(config.mapping.planner_resolution / gt.resolution))
        self.result = EpisodeResult()
        self._pending = list(config.checkpoint_times)

    # --- Loop ------------------------------------------------------------------

    def run(self) -> EpisodeResult:
        cfg = self.config
        n_ticks = math.floor(cfg.duration_s * cfg.tick_hz + _TIME_SLACK)
        for k in range(n_ticks + 1):
            t = k / cfg.tick_hz
            self.result.ticks = k
            self._sense_and_map(t)
            self._bookkeep(t)
            if k == n_ticks:
                break
            action = self._decide(t)
            if action is None:
                self.result.stop_reason = "explored"
                break
            self._act(t, action)
        self._fill_checkpoints()
        return self.result

    def _sense_and_map(self, t: float) -> None:
        scan = sense(self.scene, self.true_pose, self.config.sensor, self.corruption)
        if self.slam.lost and self.follower.mode is not FollowerMode.RECOVERY:
            self._relocalize(t, scan)
        if not self.slam.lost:
            self.map = integrate_scan(self.map, self.estimate, scan)

    def _relocalize(self, t: float, scan: DepthScan) -> None:
        """Recovery is over but tracking is not: match the view against the map."""
        view = self.slam.estimate_for(self.true_pose)
        overlap = scan_overlap(self.map, view, scan)
        ok, self.slam = relocalize(self.slam, overlap, self.config.slam)
        self._record("relocalize", t, overlap=overlap, success=ok)
        if ok:
            self.estimate = view
            self.slam = replace(self.slam, last_estimate=view)
        else:
            self.follower = enter_recovery(self.follower)
            self.path = None

    def _bookkeep(self, t: float) -> None:
        """Checkpoint sampling and the finish time."""
        sample = coverage(self.map, self.scene.gt, t)
        if not self.result.samples:
            self.result.samples.append(replace(sample, t=0.0))
            self._pending = [c for c in self._pending if c > _TIME_SLACK]
        while self._pending and self._pending[0] <= t + _TIME_SLACK:
            checkpoint = self._pending.pop(0)
            self.result.samples.append(replace(sample, t=checkpoint))
            self._render(checkpoint)
        if self.result.finish_time is None and sample.rel > self.config.finish_threshold:
            self.result.finish_time = t
            self._record("finish", t, rel=sample.rel)

    def _fill_checkpoints(self) -> None:
        """Checkpoints after running out of frontiers keep the final coverage."""
        if not self._pending or not self.result.samples:
            return
        final = coverage(self.map, self.scene.gt, self.result.ticks / self.config.tick_hz)
        for checkpoint in self._pending:
            self.result.samples.append(replace(final, t=checkpoint))
        self._pending = []

    # --- Decisions -------------------------------------------------------------

    def _decide(self, t: float) -> Action | None:
        """Next action, or None when exploration is complete."""
        params = self.config.follower
        if self.follower.mode is FollowerMode.LOOK_AROUND:
            action, self.follower = look_around_step(self.follower, params)
            if action is not None:
                return action
        if self.follower.mode is FollowerMode.RECOVERY:
            action, self.follower = recovery_step(self.follower, params)
            return action

        if (
            (self.path is None and not self.holding)
            or self.follower.replan_requested
            or self.follower.mode is FollowerMode.IDLE
            or replan_due(self.last_plan, t, self.config.replan_hz)
        ):
            if not self._replan(t):
                return None
        action, self.follower = follow_step(self.follower, self.estimate, self.path, params)
        self._record(
            "tick",
            t,
            mode=self.follower.mode.value,
            action=action.to_dict(),
            heading_error=self.follower.heading_error,
            tracking=self.slam.tracking.value,
        )
        return action

    def planner_grid(self) -> OccupancyGrid:
        if self.config.enhancements.obstacle_expanding:
            return postprocess(self.map, self.pool_factor, self.config.mapping.inflate_radius)
        return self.map

    def _replan(self, t: float) -> bool:
        """Choose a goal and plan to it; False when no eligible frontier is left.

        When eligible frontiers exist but no path to the chosen one is found,
        the robot holds still with no path until the next replan.
        """
        cfg = self.config
        snap = cfg.exploration.snap_radius
        requested = self.follower.replan_requested
        self.result.replans += 1
        self.last_plan = t
        self.follower = clear_replan_request(self.follower)

        try:
            robot_cell = self.map.world_to_cell(*self.estimate.position)
            frontiers = detect_frontiers(self.map, robot_cell, snap)
        except FrontierDetectionError as e:
            logger.warning("No frontier search at t=%.1f: %s", t, e)
            frontiers = []

        grids = [self.planner_grid()]
        if grids[0] is not self.map:
            grids.append(self.map)
        scored: list[ScoredFrontier] = []
        chosen: int | None = None
        path: PlanPath | None = None
        reused = False
        for grid in grids:
            scored = score_frontiers(
                grid,
                frontiers,
                self.estimate,
                cfg.cost,
                distance_mode=cfg.exploration.distance_mode,
                orientation=cfg.enhancements.orientation_coef,
                snap_radius=snap,
            )
            ranked = ranked_indices(
                frontiers, [s.cost for s in scored], cfg.exploration.min_frontier_size
            )
            if not ranked:
                continue
            chosen = ranked[0]
            centroid = frontiers[chosen].centroid
            if not requested and self._path_still_valid(grid, centroid):
                path, reused = self.path, True
                break
            target = self._target(grid, scored[chosen])
            if target is not None:
                path = _plan_from(grid, self.estimate.position, target, snap)
            if path is not None:
                break
            logger.debug("No Theta* path to frontier %d at t=%.1f", chosen, t)

        goal = None if chosen is None else frontiers[chosen].centroid
        switched = (
            goal is not None
            and self.goal is not None
            and distance(goal, self.goal) > GOAL_SWITCH_DISTANCE
        )
        if switched:
            self.result.goal_switches += 1
        self._record(
            "replan",
            t,
            **decision_record(scored, chosen, goal),
            expansions=None if path is None else path.expansions,
            path_length=None if path is None else path.length,
            goal_switch=switched,
            reused=reused,
        )
        if goal is None:
            return False
        self.goal = goal
        self.path = path
        self.holding = path is None
        if self.holding:
            logger.debug("Holding at t=%.1f: no route on any grid", t)
        return True

    def _path_still_valid(self, grid: OccupancyGrid, goal: Point) -> bool:
        """The current path leads to the same goal and its remaining legs are still clear."""
        path = self.path
        if (
            path is None
            or self.goal is None
            or self.follower.mode is not FollowerMode.FOLLOW_PATH
            or self.follower.path is not path
            or distance(goal, self.goal) > GOAL_SWITCH_DISTANCE
        ):
            return False
        ahead = path.points[max(self.follower.waypoint, 1) :]
        return all(line_of_sight(grid, a, b) for a, b in zip(ahead, ahead[1:], strict=False))

    def _target(self, grid: OccupancyGrid, scored: ScoredFrontier) -> Point | None:
        """Where to send Theta*: the end of the scoring path, else a Free frontier cell."""
        if self.config.exploration.distance_mode is DistanceMode.PATH and scored.path is not None:
            return scored.path.goal
        for cell in scored.frontier.target_cells(grid):
            if grid.is_free(cell):
                return grid.cell_to_world(cell)
        return None

    # --- Acting ----------------------------------------------------------------

    def _act(self, t: float, action: Action) -> None:
        cfg = self.config
        dt = cfg.dt
        t_next = t + dt
        self.true_pose = step_kinematics(self.scene, self.true_pose, action)

        was_lost = self.slam.lost
        estimate, self.slam = slam_update(self.slam, self.true_pose, action, dt)
        if estimate is not None:
            self.estimate = estimate
        elif not was_lost:
            self._record("loss", t_next, losses=self.slam.loss_count)
            self.follower = enter_recovery(self.follower)
            self.path = None

        if cfg.enhancements.bump_detector:
            event, self.bump = bump_update(
                self.bump, action, self.estimate, dt, cfg.bump, now=t_next
            )
            self.follower = replace(self.follower, forward_stall_clock=self.bump.stalled_for)
            if event is not None:
                self.result.bumps += 1
                self.map, marked = mark_cell_ahead(self.map, self.estimate)
                self._record("bump", t_next, marked=marked, pose=self.estimate.to_dict())
                self.follower = replace(
                    abort_recovery_forward(self.follower), replan_requested=True
                )

    # --- Output ----------------------------------------------------------------

    def _record(self, kind: str, t: float, **data: object) -> None:
        if self.trace is not None:
            self.trace.record(kind, t, **data)

    def _render(self, checkpoint: float) -> None:
        if self.render_dir is None:
            return
        name = f"{self.scene.name}_{self.label}_s{self.seed}_t{checkpoint:06.1f}.ppm"
        render_map(self.map, self.estimate, self.path, self.render_dir / name)


def _plan_from(grid: OccupancyGrid, start: Point, goal: Point, snap: int) -> PlanPath | None:
    """Theta* from ``start``, or from the nearest Free cell when ``start`` is not Free."""
    cell = grid.world_to_cell(*start)
    if not grid.is_free(cell):
        near = grid.nearest_free(cell, snap)
        if near is None:
            return None
        start = grid.cell_to_world(near)
    return plan_theta_star(grid, start, goal, snap)


def run_episode(
    scene: Scene,
    config: RunConfig,
    seed: int,
    *,
    config_name: str = "custom",
    trace_path: Path | None = None,
    render_dir: Path | None = None,
) -> RunRecord:
    """Run one episode. Errors give a failed record instead of raising."""
    base = {
        "scene": scene.name,
        "size_class": scene.size_class,
        "scene_area": round(scene.area, 6),
        "config_name": config_name,
        "config_hash": config.config_hash(),
        "seed": seed,
    }
    episode: Episode | None = None
    try:
        if trace_path is not None:
            with TraceWriter(trace_path) as trace:
                episode = Episode(
                    scene, config, seed, trace=trace, render_dir=render_dir, label=config_name
                )
                result = episode.run()
        else:
            episode = Episode(scene, config, seed, render_dir=render_dir, label=config_name)
            result = episode.run()
    except Exception as e:
        logger.warning("Run %s/%s/seed %d failed: %s", config_name, scene.name, seed, e)
        partial = episode.result if episode is not None else EpisodeResult()
        return RunRecord(
            **base,
            status="failed",
            error=f"{type(e).__name__}: {e}",
            coverage=[CoveragePoint.from_sample(s) for s in partial.samples],
            tracking_losses=episode.slam.loss_count if episode is not None else 0,
            ticks=partial.ticks,
        )

    logger.debug(
        "Run %s/%s/seed %d stopped (%s) after %d ticks",
        config_name,
        scene.name,
        seed,
        result.stop_reason,
        result.ticks,
    )
    return RunRecord(
        **base,
        coverage=[CoveragePoint.from_sample(s) for s in result.samples],
        finished=result.finish_time is not None,
        finish_time=result.finish_time,
        tracking_losses=episode.slam.loss_count,
        goal_switches=result.goal_switches,
        bumps=result.bumps,
        replans=result.replans,
        ticks=result.ticks,
    )

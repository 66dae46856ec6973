"""Tests for episodes, the enhancement ladder, aggregation and run artifacts."""

import json
from dataclasses import replace

import numpy as np
import pytest
from vexplore.bench import artifacts
from vexplore.bench.ablation import (
    BASELINE,
    LADDER,
    aggregate,
    build_jobs,
    ladder_configs,
    run_ablation,
    run_ladder,
)
from vexplore.bench.artifacts import TraceWriter, runs_csv, write_report, write_runs_csv
from vexplore.bench.episode import Episode, episode_rngs, run_episode
from vexplore.bench.render import UNKNOWN_RGB, map_image, render_map
from vexplore.control.actions import Action
from vexplore.control.follower import initial_state
from vexplore.core.exceptions import ParameterError, VexploreError
from vexplore.exploration.frontiers import detect_frontiers
from vexplore.exploration.scoring import DistanceMode
from vexplore.geometry import Pose
from vexplore.mapping.types import CellState, OccupancyGrid
from vexplore.models.run import (
    CoveragePoint,
    Enhancements,
    ExplorationSettings,
    MappingSettings,
    RunConfig,
    RunRecord,
)
from vexplore.planning.path import Path as PlanPath
from vexplore.sim.scene import Scene
from vexplore.sim.sensor import DepthMode
from vexplore.sim.slam import SlamParams

ALL_ON = {
    "enhancements": Enhancements(
        bump_detector=True, obstacle_expanding=True, orientation_coef=True
    ),
    "exploration": ExplorationSettings(distance_mode=DistanceMode.PATH),
}


def two_rooms() -> Scene:
    """Two 4 x 3 m rooms joined by a 0.8 m door; the robot starts in the west room."""
    cells = np.full((32, 82), CellState.OCCUPIED, dtype=np.int8)
    cells[1:31, 1:81] = CellState.FREE
    cells[1:31, 41] = CellState.OCCUPIED
    cells[12:20, 41] = CellState.FREE
    gt = OccupancyGrid(cells, resolution=0.1)
    return Scene("two_rooms", gt, Pose(2.05, 1.55, 0.0), seed=0)


def record(config: str, scene: str, seed: int, rels: list[float], **kw) -> RunRecord:
    times = [0.0, 15.0, 30.0][: len(rels)]
    coverage = [
        CoveragePoint(t=t, abs_cells=int(r * 100), abs_area=r * 10, rel=r)
        for t, r in zip(times, rels, strict=True)
    ]
    data = {
        "scene": scene,
        "size_class": kw.pop("size_class", "small"),
        "scene_area": 20.0,
        "config_name": config,
        "config_hash": f"h-{config}",
        "seed": seed,
        "coverage": coverage,
    }
    data.update(kw)
    return RunRecord(**data)


def steady(duration_s: float) -> RunConfig:
    """Short run without tracking loss, so it reaches its first replan quickly."""
    return RunConfig(duration_s=duration_s, slam=SlamParams(loss_prob_per_rad=0.0))


class TestEpisode:
    def test_small_room_is_finished(self, make_room):
        scene = make_room(6.0, 6.0)
        config = RunConfig(duration_s=60.0, seeds=[0], **ALL_ON)
        result = run_episode(scene, config, 0)
        assert result.status == "ok"
        assert result.finished
        assert result.finish_time < 60.0
        assert result.ticks > result.finish_time * config.tick_hz
        assert result.final_rel >= 0.95

    def test_finishing_does_not_end_the_episode(self):
        config = steady(10.0).model_copy(update={"finish_threshold": 0.01})
        result = run_episode(two_rooms(), config, 0)
        assert result.finished
        assert result.finish_time == 0.0
        assert result.ticks == 100

    def test_zero_duration(self, room):
        result = run_episode(room, RunConfig(duration_s=0.0), 0)
        assert [p.t for p in result.coverage] == [0.0]
        assert not result.finished
        assert result.ticks == 0

    def test_checkpoints_after_finish_are_measured(self, tmp_path, room):
        path = tmp_path / "trace.jsonl"
        config = RunConfig(duration_s=30.0, checkpoint_times=[15.0, 30.0])
        result = run_episode(room, config, 0, trace_path=path)
        assert result.finished
        assert [p.t for p in result.coverage] == [0.0, 15.0, 30.0]
        assert result.coverage_at(30.0).rel >= result.coverage_at(15.0).rel
        kinds = [json.loads(line)["type"] for line in path.read_text().splitlines()]
        assert kinds.count("finish") == 1
        assert "replan" in kinds[kinds.index("finish") + 1 :]

    def test_coverage_never_decreases(self):
        config = RunConfig(duration_s=20.0, checkpoint_times=[5.0, 10.0, 15.0, 20.0])
        result = run_episode(two_rooms(), config, 1)
        rels = [p.rel for p in result.coverage]
        assert rels == sorted(rels)
        assert result.replans >= 1

    def test_identical_inputs_give_identical_records(self):
        config = RunConfig(duration_s=10.0, depth_mode=DepthMode.CORRUPTED, **ALL_ON)
        a = run_episode(two_rooms(), config, 3, config_name="x")
        b = run_episode(two_rooms(), config, 3, config_name="x")
        assert a.model_dump_json() == b.model_dump_json()

    def test_errors_give_failed_record(self, monkeypatch):
        def boom(*args, **kwargs):
            raise RuntimeError("boom")

        monkeypatch.setattr("vexplore.bench.episode.score_frontiers", boom)
        result = run_episode(two_rooms(), steady(20.0), 0)
        assert result.failed
        assert result.error == "RuntimeError: boom"
        assert result.coverage[0].t == 0.0

    def test_trace_records(self, tmp_path):
        path = tmp_path / "trace.jsonl"
        run_episode(two_rooms(), steady(8.0), 0, trace_path=path)
        lines = [json.loads(line) for line in path.read_text().splitlines()]
        kinds = {line["type"] for line in lines}
        assert {"tick", "replan"} <= kinds
        replan = next(line for line in lines if line["type"] == "replan")
        assert {"frontiers", "chosen", "goal", "goal_switch"} <= set(replan)
        times = [line["t"] for line in lines]
        assert times == sorted(times)

    def test_renders_at_checkpoints(self, tmp_path, room):
        config = RunConfig(duration_s=2.0, checkpoint_times=[1.0, 2.0])
        run_episode(room, config, 0, config_name="base", render_dir=tmp_path)
        names = sorted(p.name for p in tmp_path.glob("*.ppm"))
        assert names[0] == "room_base_s0_t0001.0.ppm"

    def test_rng_streams_depend_on_scene_name(self, room, make_room):
        a, _ = episode_rngs(room, 0)
        b, _ = episode_rngs(make_room(name="other"), 0)
        assert a.random() != b.random()

    def test_planner_grid_respects_obstacle_expanding(self, room):
        plain = Episode(room, RunConfig(), 0)
        expanded = Episode(
            room, RunConfig(enhancements=Enhancements(obstacle_expanding=True)), 0
        )
        plain._sense_and_map(0.0)
        expanded._sense_and_map(0.0)
        occupied = CellState.OCCUPIED
        assert (expanded.planner_grid().cells == occupied).sum() > (
            plain.planner_grid().cells == occupied
        ).sum()

    def test_closed_planner_grid_falls_back_to_raw_map(self, room, make_grid):
        # A 3-cell corridor that pooling plus inflation seals off.
        config = RunConfig(
            enhancements=Enhancements(obstacle_expanding=True),
            mapping=MappingSettings(planner_resolution=0.2, inflate_radius=1),
        )
        episode = Episode(room, config, 0)
        episode.map = make_grid(
            [
                "################",
                "#.......#???????",
                "#.......#####???",
                "#...........????",
                "#...........????",
                "#...........????",
                "#.......#####???",
                "#.......#???????",
                "################",
            ],
            resolution=0.05,
        )
        episode.estimate = Pose(0.175, 0.225, 0.0)
        assert episode.pool_factor == 2
        assert episode._replan(0.0)
        assert not episode.holding
        assert episode.path is not None
        assert episode.path.goal == pytest.approx((0.575, 0.225))

    def test_unplannable_frontier_holds_instead_of_stopping(self, room, make_grid):
        config = RunConfig(exploration=ExplorationSettings(min_frontier_size=1))
        episode = Episode(room, config, 0)
        # The only way out is a diagonal squeeze, which paths may not take.
        episode.map = make_grid(
            [
                "########",
                "###...??",
                "###...??",
                "#..#####",
                "########",
            ],
            resolution=1.0,
        )
        episode.estimate = Pose(1.5, 1.5, 0.0)
        episode.follower = initial_state(config.follower, look_around=False)
        assert episode._replan(0.0)
        assert episode.holding
        assert episode.path is None
        assert episode._decide(0.2) == Action.stay()
        assert episode.result.replans == 2

    def test_unchanged_goal_keeps_the_current_path(self, room, make_grid):
        config = RunConfig(exploration=ExplorationSettings(min_frontier_size=1))
        episode = Episode(room, config, 0)
        episode.map = make_grid(
            [
                "##########",
                "#....?????",
                "#....?????",
                "#....?????",
                "##########",
            ],
            resolution=1.0,
        )
        episode.estimate = Pose(1.5, 2.5, 0.0)
        episode.follower = initial_state(config.follower, look_around=False)
        assert episode._replan(0.0)
        first = episode.path
        assert first is not None
        episode.follower = replace(episode.follower, path=first, waypoint=1)
        assert episode._replan(0.2)
        assert episode.path is first

        episode.follower = replace(episode.follower, replan_requested=True)
        assert episode._replan(0.4)
        assert episode.path is not first
        assert episode.path.goal == pytest.approx(first.goal)
        assert episode.result.replans == 3

    def test_enhanced_stack_stops_only_without_frontiers(self):
        episode = Episode(two_rooms(), steady(40.0).model_copy(update=ALL_ON), 0)
        result = episode.run()
        if result.stop_reason == "explored":
            cell = episode.map.world_to_cell(*episode.estimate.position)
            assert all(f.size < 3 for f in detect_frontiers(episode.map, cell))
        else:
            assert result.ticks == 400

    def test_corrupted_depth_costs_coverage(self):
        ideal = steady(60.0)
        corrupted = ideal.model_copy(
            update={
                "depth_mode": DepthMode.CORRUPTED,
                "sensor": ideal.sensor.model_copy(update={"p_close": 1.0}),
            }
        )
        for seed in (0, 1):
            clean = run_episode(two_rooms(), ideal, seed)
            blind = run_episode(two_rooms(), corrupted, seed)
            assert not clean.failed and not blind.failed
            assert (
                blind.final_rel < clean.final_rel
                or blind.tracking_losses > clean.tracking_losses
            )


class TestLadder:
    def test_stages_are_cumulative(self):
        configs = ladder_configs(RunConfig())
        assert [name for name, _ in configs] == [name for name, _ in LADDER]
        flags = [c.enhancements for _, c in configs]
        assert not any(flags[0].model_dump().values())
        assert flags[1].bump_detector and not flags[1].obstacle_expanding
        assert flags[2].bump_detector and flags[2].obstacle_expanding
        assert all(flags[3].model_dump().values())
        assert configs[3][1].exploration.distance_mode is DistanceMode.PATH
        assert configs[0][1].exploration.distance_mode is DistanceMode.EUCLIDEAN

    def test_baseline_switches_enhancements_off(self):
        base = RunConfig(**ALL_ON)
        _, baseline = ladder_configs(base)[0]
        assert not any(baseline.enhancements.model_dump().values())

    def test_jobs_are_ordered(self, room, make_room):
        scenes = [make_room(name="b"), make_room(name="a")]
        jobs = build_jobs(scenes, ladder_configs(RunConfig(seeds=[1, 0])))
        assert len(jobs) == 16
        assert [j.key for j in jobs] == sorted(j.key for j in jobs)
        assert jobs[0].scene.name == "a" and jobs[0].seed == 0

    def test_empty_scene_list(self):
        with pytest.raises(ParameterError):
            run_ablation([], RunConfig())

    def test_duplicate_scene_names(self, room):
        with pytest.raises(ParameterError):
            build_jobs([room, room], ladder_configs(RunConfig()))

    def test_workers_must_be_positive(self, room):
        with pytest.raises(ParameterError):
            run_ladder([room], RunConfig(), workers=0)

    def test_worker_pool_gives_same_csv(self, room):
        base = RunConfig(duration_s=1.0, seeds=[0, 1], checkpoint_times=[0.5, 1.0])
        serial = run_ladder([room], base, workers=1)
        parallel = run_ladder([room], base, workers=2)
        assert len(serial) == 8
        assert runs_csv(serial, base.checkpoint_times) == runs_csv(
            parallel, base.checkpoint_times
        )

    def test_single_scene_single_seed(self, room):
        base = RunConfig(duration_s=1.0, seeds=[0], checkpoint_times=[1.0])
        report = run_ablation([room], base)
        assert [c.name for c in report.configs] == [name for name, _ in LADDER]
        for aggregate_ in report.configs:
            assert aggregate_.runs == 1
        assert report.config(BASELINE).checkpoints[0].gain_rel == 0.0

    def test_coverage_does_not_drop_down_the_ladder(self):
        base = steady(90.0).model_copy(
            update={"seeds": [0, 1], "checkpoint_times": [45.0, 90.0]}
        )
        records = run_ladder([two_rooms()], base, workers=1)
        assert not any(r.failed for r in records)
        finals: dict[str, list[float]] = {}
        for r in records:
            finals.setdefault(r.config_name, []).append(r.coverage_at(90.0).rel)
        means = [sum(finals[name]) / len(finals[name]) for name, _ in LADDER]
        for lower, higher in zip(means, means[1:], strict=False):
            assert higher >= lower - 0.05
        assert means[-1] >= means[0] - 0.02


class TestAggregate:
    def test_singleton_equals_record(self):
        r = record(BASELINE, "s", 0, [0.1, 0.5, 0.9], finished=True, finish_time=25.0,
                   tracking_losses=2)
        report = aggregate([r], checkpoint_times=[15.0, 30.0])
        only = report.config(BASELINE)
        assert only.runs == 1
        assert only.mean_losses == 2.0
        assert only.finished_per_seed == {0: 1}
        assert only.mean_finished == 1.0
        assert only.mean_finish_time == 25.0
        assert [c.mean_rel for c in only.checkpoints] == [0.5, 0.9]
        assert [c.mean_abs_area for c in only.checkpoints] == [5.0, 9.0]

    def test_means_and_gains(self):
        records = [
            record(BASELINE, "a", 0, [0.0, 0.2, 0.4]),
            record(BASELINE, "b", 0, [0.0, 0.4, 0.6]),
            record("better", "a", 0, [0.0, 0.5, 0.7], finished=True, finish_time=20.0),
            record("better", "b", 0, [0.0, 0.7, 0.9], finished=True, finish_time=30.0),
        ]
        report = aggregate(records, config_order=[BASELINE, "better"], checkpoint_times=[15.0])
        base = report.config(BASELINE)
        better = report.config("better")
        assert base.checkpoints[0].mean_rel == pytest.approx(0.3)
        assert better.checkpoints[0].mean_rel == pytest.approx(0.6)
        assert better.checkpoints[0].gain_rel == pytest.approx(0.3)
        assert better.checkpoints[0].gain_abs_area == pytest.approx(3.0)
        assert base.checkpoints[0].gain_rel == 0.0
        assert better.finished_per_seed == {0: 2}
        assert better.mean_finish_time == pytest.approx(25.0)
        assert base.mean_finish_time is None

    def test_finished_is_averaged_over_seeds(self):
        records = [
            record(BASELINE, "a", 0, [0.0], finished=True, finish_time=5.0),
            record(BASELINE, "b", 0, [0.0], finished=True, finish_time=5.0),
            record(BASELINE, "a", 1, [0.0]),
            record(BASELINE, "b", 1, [0.0], finished=True, finish_time=5.0),
        ]
        only = aggregate(records).config(BASELINE)
        assert only.finished_per_seed == {0: 2, 1: 1}
        assert only.mean_finished == 1.5

    def test_size_classes(self):
        records = [
            record(BASELINE, "big", 0, [0.0, 0.2], size_class="large"),
            record(BASELINE, "tiny", 0, [0.0, 0.8], size_class="small"),
            record("x", "big", 0, [0.0, 0.5], size_class="large"),
            record("x", "tiny", 0, [0.0, 0.9], size_class="small"),
        ]
        report = aggregate(records, checkpoint_times=[15.0])
        x = report.config("x")
        assert set(x.by_size_class) == {"large", "small"}
        assert x.by_size_class["large"].checkpoints[0].gain_rel == pytest.approx(0.3)
        assert x.by_size_class["small"].checkpoints[0].gain_rel == pytest.approx(0.1)

    def test_no_baseline_means_no_gains(self):
        report = aggregate([record("x", "a", 0, [0.0, 0.3])], checkpoint_times=[15.0])
        assert report.config("x").checkpoints[0].gain_rel is None

    def test_failed_runs_are_counted_not_averaged(self):
        records = [
            record(BASELINE, "a", 0, [0.0, 0.4]),
            record(BASELINE, "b", 0, [0.0, 0.0], status="failed", error="X: y"),
        ]
        only = aggregate(records, checkpoint_times=[15.0]).config(BASELINE)
        assert only.failed == 1
        assert only.checkpoints[0].mean_rel == pytest.approx(0.4)

    def test_input_order_does_not_matter(self):
        records = [
            record(BASELINE, "a", 0, [0.0, 0.1]),
            record(BASELINE, "b", 1, [0.0, 0.2]),
            record(BASELINE, "c", 0, [0.0, 0.7]),
        ]
        forward = aggregate(records, checkpoint_times=[15.0])
        backward = aggregate(list(reversed(records)), checkpoint_times=[15.0])
        assert forward.model_dump_json() == backward.model_dump_json()


class TestArtifacts:
    def test_csv_layout(self):
        records = [
            record(BASELINE, "a", 0, [0.0, 0.5], finished=True, finish_time=12.0),
            record(BASELINE, "b", 0, [0.0]),
        ]
        text = runs_csv(records, [15.0, 30.0])
        lines = text.splitlines()
        assert len(lines) == 3
        header = lines[0].split(",")
        assert header[-4:] == ["abs_m2@15", "rel@15", "abs_m2@30", "rel@30"]
        first = dict(zip(header, lines[1].split(","), strict=True))
        assert first["finished"] == "true"
        assert first["rel@15"] == "0.5"
        assert first["rel@30"] == ""
        assert first["error"] == ""

    def test_files_are_written(self, tmp_path):
        records = [record(BASELINE, "a", 0, [0.0, 0.5])]
        csv_path = write_runs_csv(records, [15.0], tmp_path / "out")
        report_path = write_report(aggregate(records), tmp_path / "out")
        assert csv_path.name == artifacts.RUNS_FILE
        assert json.loads(report_path.read_text())["configs"][0]["name"] == BASELINE

    def test_trace_writer(self, tmp_path):
        path = tmp_path / "t.jsonl"
        with TraceWriter(path) as trace:
            trace.record("replan", 0.2, cost=float("inf"), items=[1.0, float("nan")])
        assert json.loads(path.read_text()) == {
            "type": "replan",
            "t": 0.2,
            "cost": None,
            "items": [1.0, None],
        }
        with pytest.raises(VexploreError):
            trace.record("tick", 0.3)


class TestRender:
    def test_single_unknown_cell(self):
        image = map_image(OccupancyGrid.empty(1, 1))
        assert image.shape == (1, 1, 3)
        assert tuple(image[0, 0]) == UNKNOWN_RGB

    def test_north_is_up(self, make_grid):
        image = map_image(make_grid(["..", "##"]))
        assert tuple(image[0, 0]) == (255, 255, 255)
        assert tuple(image[1, 0]) == (0, 0, 0)

    def test_bytes_are_deterministic(self, tmp_path, make_grid):
        grid = make_grid(["....", ".#..", "...."], resolution=0.5)
        path = PlanPath(((0.25, 0.25), (1.75, 1.25)))
        a = render_map(grid, Pose(0.25, 0.25), path, tmp_path / "a.ppm")
        b = render_map(grid, Pose(0.25, 0.25), path, tmp_path / "b.ppm")
        assert a.read_bytes() == b.read_bytes()
        assert a.read_bytes().startswith(b"P6\n4 3\n255\n")

"""The cumulative enhancement ladder and aggregation of its runs.

Four configurations, each adding one enhancement to the previous:

- ``baseline``: Euclidean frontier cost, raw map, no bump detector.
- ``bump_detection``: plus the bump detector.
- ``obstacle_expanding``: plus max-pooling and obstacle inflation of the planner map.
- ``orientation_coef``: plus path-length distance and the orientation cost term.

Every (configuration, scene, seed) job is independent. Jobs and records are
ordered by (configuration, scene, seed) before anything is aggregated, so a
worker pool never changes the output.
"""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from vexplore import __version__
from vexplore.bench.episode import run_episode
from vexplore.core.exceptions import ParameterError
from vexplore.exploration.scoring import DistanceMode
from vexplore.models.report import (
    AggregateReport,
    CheckpointAggregate,
    ConfigAggregate,
    GroupAggregate,
)
from vexplore.models.run import RunConfig, RunRecord, merge_run_config
from vexplore.sim.scene import Scene

logger = logging.getLogger(__name__)

BASELINE = "baseline"

LADDER: list[tuple[str, dict]] = [
    (
        BASELINE,
        {
            "enhancements": {
                "bump_detector": False,
                "obstacle_expanding": False,
                "orientation_coef": False,
            },
            "exploration": {"distance_mode": DistanceMode.EUCLIDEAN.value},
        },
    ),
    ("bump_detection", {"enhancements": {"bump_detector": True}}),
    ("obstacle_expanding", {"enhancements": {"obstacle_expanding": True}}),
    (
        "orientation_coef",
        {
            "enhancements": {"orientation_coef": True},
            "exploration": {"distance_mode": DistanceMode.PATH.value},
        },
    ),
]


def ladder_configs(base: RunConfig) -> list[tuple[str, RunConfig]]:
    """The four ladder stages applied cumulatively on top of ``base``."""
    configs: list[tuple[str, RunConfig]] = []
    current = base
    for name, overrides in LADDER:
        current = merge_run_config(current, overrides)
        configs.append((name, current))
    return configs


@dataclass(frozen=True)
class Job:
    order: int
    config_name: str
    config: RunConfig
    scene: Scene
    seed: int
    trace_dir: Path | None = None

    @property
    def key(self) -> tuple[int, str, int]:
        return (self.order, self.scene.name, self.seed)

    @property
    def trace_path(self) -> Path | None:
        if self.trace_dir is None:
            return None
        return self.trace_dir / f"trace_{self.scene.name}_{self.config_name}_s{self.seed}.jsonl"


def _run_job(job: Job) -> RunRecord:
    return run_episode(
        job.scene, job.config, job.seed, config_name=job.config_name, trace_path=job.trace_path
    )


def build_jobs(
    scenes: Sequence[Scene],
    configs: Sequence[tuple[str, RunConfig]],
    *,
    trace_dir: Path | None = None,
) -> list[Job]:
    if not scenes:
        raise ParameterError("ablation needs at least one scene")
    names = [s.name for s in scenes]
    if len(set(names)) != len(names):
        raise ParameterError("scene names must be unique")
    jobs = [
        Job(order, name, config, scene, seed, trace_dir)
        for order, (name, config) in enumerate(configs)
        for scene in scenes
        for seed in config.seeds
    ]
    return sorted(jobs, key=lambda j: j.key)


def run_ladder(
    scenes: Sequence[Scene],
    base: RunConfig,
    *,
    workers: int = 1,
    on_record: Callable[[RunRecord], None] | None = None,
    trace_dir: Path | None = None,
) -> list[RunRecord]:
    """Run every ladder stage on every scene and seed; records come back in job order.

    With ``trace_dir`` every episode writes its JSONL trace there.
    """
    if workers < 1:
        raise ParameterError(f"workers must be >= 1, got {workers}")
    jobs = build_jobs(scenes, ladder_configs(base), trace_dir=trace_dir)
    logger.info("Running %d episodes on %d worker(s)", len(jobs), workers)

    records: list[RunRecord] = []
    if workers == 1:
        for job in jobs:
            record = _run_job(job)
            records.append(record)
            if on_record:
                on_record(record)
        return records

    with ProcessPoolExecutor(max_workers=workers) as pool:
        for record in pool.map(_run_job, jobs):
            records.append(record)
            if on_record:
                on_record(record)
    return records


def run_ablation(
    scenes: Sequence[Scene], base: RunConfig, *, workers: int = 1
) -> AggregateReport:
    records = run_ladder(scenes, base, workers=workers)
    return aggregate(
        records,
        config_order=[name for name, _ in LADDER],
        scenes=[s.name for s in scenes],
        seeds=base.seeds,
        checkpoint_times=base.checkpoint_times,
        depth_mode=base.depth_mode.value,
    )


# --- Aggregation ---------------------------------------------------------------


def _mean(values: Iterable[float]) -> float | None:
    values = list(values)
    if not values:
        return None
    return math.fsum(values) / len(values)


def _group(
    records: Sequence[RunRecord],
    seeds: Sequence[int],
    checkpoint_times: Sequence[float],
    baseline: GroupAggregate | None,
) -> GroupAggregate:
    ok = [r for r in records if not r.failed]
    finished_per_seed = {
        seed: sum(1 for r in ok if r.seed == seed and r.finished) for seed in seeds
    }
    checkpoints = []
    for i, t in enumerate(checkpoint_times):
        points = [p for p in (r.coverage_at(t) for r in ok) if p is not None]
        mean_abs = _mean(p.abs_area for p in points) or 0.0
        mean_rel = _mean(p.rel for p in points) or 0.0
        gain_abs = gain_rel = None
        if baseline is not None and i < len(baseline.checkpoints):
            gain_abs = mean_abs - baseline.checkpoints[i].mean_abs_area
            gain_rel = mean_rel - baseline.checkpoints[i].mean_rel
        checkpoints.append(
            CheckpointAggregate(
                t=t,
                mean_abs_area=mean_abs,
                mean_rel=mean_rel,
                gain_abs_area=gain_abs,
                gain_rel=gain_rel,
            )
        )
    return GroupAggregate(
        runs=len(records),
        failed=len(records) - len(ok),
        mean_losses=_mean(r.tracking_losses for r in ok) or 0.0,
        finished_per_seed=finished_per_seed,
        mean_finished=_mean(finished_per_seed.values()) or 0.0,
        mean_finish_time=_mean(r.finish_time for r in ok if r.finish_time is not None),
        checkpoints=checkpoints,
    )


def aggregate(
    records: Iterable[RunRecord],
    *,
    config_order: Sequence[str] | None = None,
    scenes: Sequence[str] | None = None,
    seeds: Sequence[int] | None = None,
    checkpoint_times: Sequence[float] = (),
    depth_mode: str = "ideal_depth",
    baseline: str = BASELINE,
) -> AggregateReport:
    """Means per configuration, overall and per scene size class.

    Coverage gains are differences against the ``baseline`` configuration at
    the same checkpoint, within the same size class; they are left empty when
    no baseline runs are present.
    """
    records = list(records)
    by_config: dict[str, list[RunRecord]] = defaultdict(list)
    for record in records:
        by_config[record.config_name].append(record)
    order = [n for n in (config_order or sorted(by_config)) if n in by_config]
    order += sorted(n for n in by_config if n not in order)
    seeds = sorted(seeds) if seeds is not None else sorted({r.seed for r in records})
    scenes = sorted(scenes) if scenes is not None else sorted({r.scene for r in records})
    times = list(checkpoint_times)

    def _sorted(rs: list[RunRecord]) -> list[RunRecord]:
        return sorted(rs, key=lambda r: (r.scene, r.seed))

    base_overall: GroupAggregate | None = None
    base_classes: dict[str, GroupAggregate] = {}
    if baseline in by_config:
        base_records = _sorted(by_config[baseline])
        base_overall = _group(base_records, seeds, times, None)
        for size_class, group in _by_class(base_records).items():
            base_classes[size_class] = _group(group, seeds, times, None)

    configs = []
    for name in order:
        group = _sorted(by_config[name])
        overall = _group(group, seeds, times, base_overall)
        classes = {
            size_class: _group(rs, seeds, times, base_classes.get(size_class))
            for size_class, rs in _by_class(group).items()
        }
        configs.append(
            ConfigAggregate(
                name=name,
                config_hash=group[0].config_hash,
                by_size_class=classes,
                **overall.model_dump(),
            )
        )
    return AggregateReport(
        version=__version__,
        depth_mode=depth_mode,
        scenes=scenes,
        seeds=seeds,
        checkpoint_times=times,
        configs=configs,
    )


def _by_class(records: list[RunRecord]) -> dict[str, list[RunRecord]]:
    classes: dict[str, list[RunRecord]] = defaultdict(list)
    for record in records:
        classes[record.size_class].append(record)
    return dict(sorted(classes.items()))


"""Run configuration and per-run records."""

from __future__ import annotations

import hashlib
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from vexplore.control.bump import BumpParams
from vexplore.control.follower import FollowerParams
from vexplore.exploration.costs import CostParams
from vexplore.exploration.scoring import DistanceMode
from vexplore.mapping.coverage import CoverageSample
from vexplore.sim.sensor import DepthMode, SensorParams
from vexplore.sim.slam import SlamParams

DEFAULT_CHECKPOINTS = [float(t) for t in range(15, 241, 15)]


class MappingSettings(BaseModel):
    """Planner-facing post-processing of the agent map."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    planner_resolution: float = Field(default=0.10, gt=0)
    inflate_radius: int = Field(default=1, ge=0)


class ExplorationSettings(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    min_frontier_size: int = Field(default=3, ge=1)
    snap_radius: int = Field(default=5, ge=0)
    distance_mode: DistanceMode = DistanceMode.EUCLIDEAN


class Enhancements(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    bump_detector: bool = False
    obstacle_expanding: bool = False
    orientation_coef: bool = False


class RunConfig(BaseModel):
    """Everything that determines an episode besides the scene and the seed."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    scene: str | None = None
    duration_s: float = Field(default=240.0, ge=0)
    tick_hz: float = Field(default=10.0, gt=0)
    replan_hz: float = Field(default=5.0, gt=0)
    finish_threshold: float = Field(default=0.95, gt=0, le=1)
    enhancements: Enhancements = Enhancements()
    mapping: MappingSettings = MappingSettings()
    exploration: ExplorationSettings = ExplorationSettings()
    cost: CostParams = CostParams()
    sensor: SensorParams = SensorParams()
    slam: SlamParams = SlamParams()
    follower: FollowerParams = FollowerParams()
    bump: BumpParams = BumpParams()
    depth_mode: DepthMode = DepthMode.IDEAL
    seeds: list[int] = Field(default_factory=lambda: [0, 1, 2, 3, 4], min_length=1)
    checkpoint_times: list[float] = Field(default_factory=lambda: list(DEFAULT_CHECKPOINTS))

    @field_validator("checkpoint_times")
    @classmethod
    def _ascending(cls, times: list[float]) -> list[float]:
        if any(t < 0 for t in times):
            raise ValueError("checkpoint times must be non-negative")
        if any(b <= a for a, b in zip(times, times[1:], strict=False)):
            raise ValueError("checkpoint times must be strictly ascending")
        return times

    @model_validator(mode="after")
    def _within_duration(self) -> RunConfig:
        kept = [t for t in self.checkpoint_times if t <= self.duration_s + 1e-9]
        if kept != self.checkpoint_times:
            object.__setattr__(self, "checkpoint_times", kept)
        return self

    @property
    def dt(self) -> float:
        return 1.0 / self.tick_hz

    def config_hash(self) -> str:
        """Short digest of the settings that shape an episode (scene and seeds excluded)."""
        payload = self.model_dump_json(exclude={"scene", "seeds"})
        return hashlib.sha256(payload.encode()).hexdigest()[:12]


def deep_merge(base: dict[str, Any], overrides: dict[str, Any]) -> dict[str, Any]:
    merged = dict(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def merge_run_config(base: RunConfig, overrides: dict[str, Any]) -> RunConfig:
    """Apply nested overrides (e.g. ``{"cost": {"alpha": 2}}``) on top of ``base``."""
    return RunConfig.model_validate(deep_merge(base.model_dump(mode="json"), overrides))


class CoveragePoint(BaseModel):
    t: float
    abs_cells: int
    abs_area: float
    rel: float

    @classmethod
    def from_sample(cls, sample: CoverageSample) -> CoveragePoint:
        return cls(
            t=sample.t, abs_cells=sample.abs_cells, abs_area=sample.abs_area, rel=sample.rel
        )


class RunRecord(BaseModel):
    """Metrics of one episode."""

    scene: str
    size_class: str
    scene_area: float
    config_name: str
    config_hash: str
    seed: int
    status: Literal["ok", "failed"] = "ok"
    error: str | None = None
    coverage: list[CoveragePoint] = []
    finished: bool = False
    finish_time: float | None = None
    tracking_losses: int = 0
    goal_switches: int = 0
    bumps: int = 0
    replans: int = 0
    ticks: int = 0

    @property
    def failed(self) -> bool:
        return self.status == "failed"

    @property
    def final_rel(self) -> float:
        return self.coverage[-1].rel if self.coverage else 0.0

    def coverage_at(self, t: float) -> CoveragePoint | None:
        for point in self.coverage:
            if abs(point.t - t) <= 1e-9:
                return point
        return None

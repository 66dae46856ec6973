"""Aggregated ablation results."""

from __future__ import annotations

from pydantic import BaseModel


class CheckpointAggregate(BaseModel):
    t: float
    mean_abs_area: float
    mean_rel: float
    gain_abs_area: float | None = None
    gain_rel: float | None = None


class GroupAggregate(BaseModel):
    """Means over a set of runs of one configuration."""

    runs: int
    failed: int
    mean_losses: float
    finished_per_seed: dict[int, int]
    mean_finished: float
    mean_finish_time: float | None
    checkpoints: list[CheckpointAggregate]


class ConfigAggregate(GroupAggregate):
    name: str
    config_hash: str
    by_size_class: dict[str, GroupAggregate] = {}


class AggregateReport(BaseModel):
    version: str
    depth_mode: str
    scenes: list[str]
    seeds: list[int]
    checkpoint_times: list[float]
    configs: list[ConfigAggregate]

    def config(self, name: str) -> ConfigAggregate:
        for aggregate in self.configs:
            if aggregate.name == name:
                return aggregate
        raise KeyError(name)

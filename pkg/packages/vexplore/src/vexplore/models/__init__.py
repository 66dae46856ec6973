"""Models for vexplore."""

from vexplore.models.report import (
    AggregateReport,
    CheckpointAggregate,
    ConfigAggregate,
    GroupAggregate,
)
from vexplore.models.run import (
    CoveragePoint,
    Enhancements,
    ExplorationSettings,
    MappingSettings,
    RunConfig,
    RunRecord,
    merge_run_config,
)

__all__ = [
    "AggregateReport",
    "CheckpointAggregate",
    "ConfigAggregate",
    "CoveragePoint",
    "Enhancements",
    "ExplorationSettings",
    "GroupAggregate",
    "MappingSettings",
    "RunConfig",
    "RunRecord",
    "merge_run_config",
]

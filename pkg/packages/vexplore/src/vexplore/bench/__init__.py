"""Episode runner, ablation ladder and run artifacts."""

from vexplore.bench.ablation import (
    BASELINE,
    LADDER,
    aggregate,
    ladder_configs,
    run_ablation,
    run_ladder,
)
from vexplore.bench.artifacts import (
    REPORT_FILE,
    RUNS_FILE,
    TraceWriter,
    runs_csv,
    write_report,
    write_runs_csv,
)
from vexplore.bench.episode import Episode, run_episode
from vexplore.bench.render import map_image, render_map

__all__ = [
    "BASELINE",
    "LADDER",
    "REPORT_FILE",
    "RUNS_FILE",
    "Episode",
    "TraceWriter",
    "aggregate",
    "ladder_configs",
    "map_image",
    "render_map",
    "run_ablation",
    "run_episode",
    "run_ladder",
    "runs_csv",
    "write_report",
    "write_runs_csv",
]

"""Run artifacts on disk: the runs CSV, the aggregate JSON and JSONL traces."""

from __future__ import annotations

import csv
import io
import json
import math
from collections.abc import Iterable
from pathlib import Path
from types import TracebackType
from typing import Any

from vexplore.core.exceptions import VexploreError
from vexplore.models.report import AggregateReport
from vexplore.models.run import RunRecord

RUNS_FILE = "runs.csv"
REPORT_FILE = "report.json"

_BASE_COLUMNS = [
    "config",
    "config_hash",
    "scene",
    "size_class",
    "scene_area",
    "seed",
    "status",
    "finished",
    "finish_time",
    "tracking_losses",
    "goal_switches",
    "bumps",
    "replans",
    "ticks",
    "error",
]


def _fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(round(value, 6))
    return str(value)


def runs_csv(records: Iterable[RunRecord], checkpoint_times: list[float]) -> str:
    """One row per run; coverage columns per checkpoint (absolute m^2 and relative)."""
    columns = list(_BASE_COLUMNS)
    for t in checkpoint_times:
        columns += [f"abs_m2@{t:g}", f"rel@{t:g}"]
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for r in records:
        row = [
            r.config_name,
            r.config_hash,
            r.scene,
            r.size_class,
            r.scene_area,
            r.seed,
            r.status,
            r.finished,
            r.finish_time,
            r.tracking_losses,
            r.goal_switches,
            r.bumps,
            r.replans,
            r.ticks,
            r.error,
        ]
        for t in checkpoint_times:
            point = r.coverage_at(t)
            row += [None, None] if point is None else [point.abs_area, point.rel]
        writer.writerow([_fmt(v) for v in row])
    return buffer.getvalue()


def write_runs_csv(
    records: list[RunRecord], checkpoint_times: list[float], out_dir: Path
) -> Path:
    path = Path(out_dir) / RUNS_FILE
    return _write(path, runs_csv(records, checkpoint_times))


def write_report(report: AggregateReport, out_dir: Path) -> Path:
    path = Path(out_dir) / REPORT_FILE
    return _write(path, report.model_dump_json(indent=2) + "\n")


def _write(path: Path, text: str) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as e:
        raise VexploreError(f"cannot write {path}: {e}") from e
    return path


def _clean(value: Any) -> Any:
    """Non-finite floats become null so every line stays valid JSON."""
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [_clean(v) for v in value]
    return value


class TraceWriter:
    """JSONL trace of one episode. Records carry simulated time only."""

    def __init__(self, path: Path) -> None:
        self.path = Path(path)
        self._file: io.TextIOWrapper | None = None

    def __enter__(self) -> TraceWriter:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._file = self.path.open("w")
        return self

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc: BaseException | None,
        tb: TracebackType | None,
    ) -> None:
        self.close()

    def record(self, kind: str, t: float, **data: Any) -> None:
        if self._file is None:
            raise VexploreError(f"trace {self.path} is not open")
        line = {"type": kind, "t": round(t, 6), **_clean(data)}
        self._file.write(json.dumps(line, sort_keys=True, separators=(",", ":")) + "\n")

    def close(self) -> None:
        if self._file is not None:
            self._file.close()
            self._file = None

"""The enhancement ladder over a scene corpus: ``vexplore ablation``."""

from __future__ import annotations

from pathlib import Path
from typing import Annotated

import typer
from rich.progress import Progress
from rich.table import Table

from vexplore.bench.ablation import LADDER, aggregate, build_jobs, ladder_configs, run_ladder
from vexplore.bench.artifacts import write_report, write_runs_csv
from vexplore.cli.common import (
    AlphaOpt,
    BetaOpt,
    BumpOpt,
    ConfigFileOpt,
    CorruptOpt,
    DurationOpt,
    InflateOpt,
    OrientationOpt,
    OutOpt,
    SeedOpt,
    build_run_config,
    console,
    fmt_time,
    resolve_scenes,
)
from vexplore.core.config import Config
from vexplore.core.exceptions import VexploreError
from vexplore.core.logging import get_logger
from vexplore.models.report import AggregateReport, GroupAggregate

logger = get_logger("cli.ablation")


def ablation_cmd(
    scenes_dir: Annotated[
        Path | None,
        typer.Option("--scenes-dir", help="Scene corpus (default: general.scenes_dir)"),
    ] = None,
    scene: Annotated[
        list[Path] | None, typer.Option("--scene", help="Scene PGM; repeat to list several")
    ] = None,
    config_file: ConfigFileOpt = None,
    seed: SeedOpt = None,
    duration: DurationOpt = None,
    bump_detector: BumpOpt = False,
    inflate: InflateOpt = False,
    orientation_coef: OrientationOpt = None,
    corrupt_depth: CorruptOpt = False,
    alpha: AlphaOpt = None,
    beta: BetaOpt = None,
    out: OutOpt = None,
    workers: Annotated[
        int | None, typer.Option("--workers", "-w", help="Worker processes (default: config)")
    ] = None,
    trace: Annotated[bool, typer.Option("--trace", help="Write a JSONL trace per run")] = False,
) -> None:
    """Run the four-stage enhancement ladder on every scene and seed.

    Enhancement flags change the base configuration; the ladder still
    switches each enhancement on in turn.
    """
    app_config = Config.load()
    try:
        base = build_run_config(
            app_config,
            config_file=config_file,
            seeds=seed,
            duration=duration,
            bump_detector=bump_detector,
            inflate=inflate,
            orientation_coef=orientation_coef,
            corrupt_depth=corrupt_depth,
            alpha=alpha,
            beta=beta,
        )
        directory = scenes_dir or (None if scene else Path(app_config.general.scenes_dir))
        scenes = resolve_scenes(scene, directory)
        total = len(build_jobs(scenes, ladder_configs(base)))
    except VexploreError as e:
        console.print(f"[red]Error: {e}[/red]")
        raise typer.Exit(1) from None

    out_dir = out or Path(app_config.general.output_dir)
    n_workers = workers or app_config.general.workers
    console.print(
        f"[bold]{len(scenes)} scenes × {len(base.seeds)} seeds × {len(LADDER)} configs[/bold]"
    )

    with Progress(console=console) as progress:
        task = progress.add_task("Episodes", total=total)
        records = run_ladder(
            scenes,
            base,
            workers=n_workers,
            on_record=lambda _: progress.update(task, advance=1),
            trace_dir=out_dir if trace else None,
        )

    report = aggregate(
        records,
        config_order=[name for name, _ in LADDER],
        scenes=[s.name for s in scenes],
        seeds=base.seeds,
        checkpoint_times=base.checkpoint_times,
        depth_mode=base.depth_mode.value,
    )
    try:
        csv_path = write_runs_csv(records, base.checkpoint_times, out_dir)
        report_path = write_report(report, out_dir)
    except VexploreError as e:
        console.print(f"[red]Error: {e}[/red]")
        raise typer.Exit(1) from None

    console.print(report_table(report))
    console.print(f"[dim]Runs: {csv_path}[/dim]")
    console.print(f"[dim]Report: {report_path}[/dim]")

    failed = [r for r in records if r.failed]
    for r in failed:
        console.print(f"[red]{r.config_name}/{r.scene}/seed {r.seed}: {r.error}[/red]")
    if failed:
        console.print(f"[red]{len(failed)} of {len(records)} runs failed[/red]")
        raise typer.Exit(1)


def report_table(report: AggregateReport) -> Table:
    """Losses, finished scenes and finish time per ladder stage, plus final coverage."""
    last = report.checkpoint_times[-1] if report.checkpoint_times else None
    title = "Ablation" if last is None else f"Ablation (coverage at {last:g} s)"
    table = Table(title=title)
    table.add_column("Config")
    table.add_column("SLAM losses", justify="right")
    table.add_column("Finished scenes", justify="right")
    table.add_column("Avg finish s", justify="right")
    table.add_column("Coverage", justify="right")
    table.add_column("Gain large", justify="right")
    table.add_column("Gain small", justify="right")
    table.add_column("Failed", justify="right")

    def _gain(group: GroupAggregate | None) -> str:
        if group is None or not group.checkpoints or group.checkpoints[-1].gain_rel is None:
            return "-"
        return f"{group.checkpoints[-1].gain_rel:+.1%}"

    for c in report.configs:
        coverage = f"{c.checkpoints[-1].mean_rel:.1%}" if c.checkpoints else "-"
        table.add_row(
            c.name,
            f"{c.mean_losses:.1f}",
            f"{c.mean_finished:.1f}",
            fmt_time(c.mean_finish_time),
            coverage,
            _gain(c.by_size_class.get("large")),
            _gain(c.by_size_class.get("small")),
            str(c.failed),
        )
    return table

"""Single-scene episodes: ``vexplore run``."""

from __future__ import annotations

from pathlib import Path
from typing import Annotated

import typer
from rich.table import Table

from vexplore.bench.artifacts import write_runs_csv
from vexplore.bench.episode import run_episode
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
)
from vexplore.core.config import Config
from vexplore.core.exceptions import VexploreError
from vexplore.core.logging import get_logger
from vexplore.sim.io import load_scene

logger = get_logger("cli.run")


def run_cmd(
    scene: Annotated[Path, typer.Option("--scene", help="Scene PGM (with .txt/.json sidecars)")],
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
    trace: Annotated[bool, typer.Option("--trace", help="Write a JSONL trace per run")] = False,
    render: Annotated[
        bool, typer.Option("--render", help="Write a PPM of the agent map at every checkpoint")
    ] = False,
    name: Annotated[str, typer.Option("--name", help="Config name in the records")] = "custom",
) -> None:
    """Run exploration episodes on one scene, one per seed."""
    app_config = Config.load()
    try:
        config = build_run_config(
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
        loaded = load_scene(scene)
    except VexploreError as e:
        console.print(f"[red]Error: {e}[/red]")
        raise typer.Exit(1) from None

    out_dir = out or Path(app_config.general.output_dir)
    records = []
    for s in config.seeds:
        trace_path = out_dir / f"trace_{loaded.name}_{name}_s{s}.jsonl" if trace else None
        render_dir = out_dir / "renders" if render else None
        logger.info("Running %s seed %d (%s)", loaded.name, s, config.config_hash())
        records.append(
            run_episode(
                loaded,
                config,
                s,
                config_name=name,
                trace_path=trace_path,
                render_dir=render_dir,
            )
        )

    try:
        csv_path = write_runs_csv(records, config.checkpoint_times, out_dir)
    except VexploreError as e:
        console.print(f"[red]Error: {e}[/red]")
        raise typer.Exit(1) from None

    table = Table(title=f"{loaded.name} ({loaded.size_class}, {loaded.area:.1f} m²)")
    table.add_column("Seed", justify="right")
    table.add_column("Status")
    table.add_column("Coverage", justify="right")
    table.add_column("Area m²", justify="right")
    table.add_column("Finish s", justify="right")
    table.add_column("Losses", justify="right")
    table.add_column("Bumps", justify="right")
    table.add_column("Goal switches", justify="right")
    for r in records:
        final = r.coverage[-1] if r.coverage else None
        table.add_row(
            str(r.seed),
            "[red]failed[/red]" if r.failed else "ok",
            "-" if final is None else f"{final.rel:.1%}",
            "-" if final is None else f"{final.abs_area:.1f}",
            fmt_time(r.finish_time),
            str(r.tracking_losses),
            str(r.bumps),
            str(r.goal_switches),
        )
    console.print(table)
    console.print(f"[dim]Runs written to {csv_path}[/dim]")

    failed = [r for r in records if r.failed]
    for r in failed:
        console.print(f"[red]Seed {r.seed} failed: {r.error}[/red]")
    if failed:
        raise typer.Exit(1)

"""Scene corpus commands."""

from __future__ import annotations

from pathlib import Path
from typing import Annotated

import typer
from rich.table import Table

from vexplore.core.config import Config
from vexplore.core.exceptions import VexploreError
from vexplore.core.logging import get_console
from vexplore.sim.generator import generate_corpus
from vexplore.sim.io import list_scenes, load_scene, save_scene
from vexplore.sim.scene import Scene

app = typer.Typer(help="Manage the scene corpus.")
console = get_console()

DirOpt = Annotated[
    Path | None, typer.Option("--dir", "-d", help="Scene directory (default: general.scenes_dir)")
]


def _scenes_dir(directory: Path | None) -> Path:
    return directory or Path(Config.load().general.scenes_dir)


def scenes_table(scenes: list[Scene], title: str) -> Table:
    table = Table(title=title)
    table.add_column("Name", style="cyan")
    table.add_column("Area m²", justify="right")
    table.add_column("Class")
    table.add_column("Grid", justify="right")
    table.add_column("Spawn")
    table.add_column("Invisible", justify="right")
    for s in scenes:
        table.add_row(
            s.name,
            f"{s.area:.1f}",
            s.size_class,
            f"{s.gt.width}x{s.gt.height}",
            f"({s.spawn.x:.2f}, {s.spawn.y:.2f})",
            str(len(s.invisible_obstacles)),
        )
    return table


def gen_scenes_cmd(
    out: Annotated[
        Path | None, typer.Option("--out", "-o", help="Output directory (default: scenes_dir)")
    ] = None,
    count: Annotated[int, typer.Option("--count", "-n", help="Number of scenes")] = 20,
    seed: Annotated[int, typer.Option("--seed", "-s", help="Seed of the first scene")] = 0,
    doorway_rich: Annotated[
        bool, typer.Option("--doorway-rich", help="Narrow doors and small rooms")
    ] = False,
    prefix: Annotated[str, typer.Option("--prefix", help="Scene name prefix")] = "scene",
) -> None:
    """Generate a corpus of indoor scenes spanning 28-251 m²."""
    directory = _scenes_dir(out)
    try:
        scenes = generate_corpus(count, seed, doorway_rich=doorway_rich, prefix=prefix)
        for scene in scenes:
            save_scene(scene, directory)
    except (VexploreError, OSError) as e:
        console.print(f"[red]Error: {e}[/red]")
        raise typer.Exit(1) from None

    console.print(scenes_table(scenes, f"Generated {len(scenes)} scenes"))
    console.print(f"[green]Saved to {directory}[/green]")


@app.command("list")
def list_cmd(directory: DirOpt = None) -> None:
    """List the scenes in a directory."""
    directory = _scenes_dir(directory)
    paths = list_scenes(directory)
    if not paths:
        console.print(f"[yellow]No scenes in {directory}[/yellow]")
        console.print("[dim]Run 'vexplore gen-scenes' to create some.[/dim]")
        return
    try:
        scenes = [load_scene(p) for p in paths]
    except VexploreError as e:
        console.print(f"[red]Error: {e}[/red]")
        raise typer.Exit(1) from None
    console.print(scenes_table(scenes, str(directory)))
    large = sum(1 for s in scenes if s.size_class == "large")
    console.print(f"[dim]{len(scenes)} scenes, {large} large[/dim]")


@app.command("show")
def show_cmd(
    scene: Annotated[Path, typer.Argument(help="Scene PGM path")],
) -> None:
    """Show one scene's metadata."""
    try:
        loaded = load_scene(scene)
    except VexploreError as e:
        console.print(f"[red]Error: {e}[/red]")
        raise typer.Exit(1) from None
    console.print(scenes_table([loaded], loaded.name))
    console.print(f"[dim]Resolution {loaded.gt.resolution} m, origin {loaded.gt.origin}[/dim]")

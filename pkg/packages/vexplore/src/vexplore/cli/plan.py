"""Planner comparison: ``vexplore plan``."""

from __future__ import annotations

from pathlib import Path
from typing import Annotated

import typer
from rich.table import Table

from vexplore.bench.render import render_map
from vexplore.core.exceptions import ConfigError, VexploreError
from vexplore.core.logging import get_console
from vexplore.geometry import Point
from vexplore.planning.grid_search import plan_astar
from vexplore.planning.path import Path as PlanPath
from vexplore.planning.theta_star import plan_theta_star
from vexplore.sim.io import load_scene

console = get_console()

ASTAR_RGB = (60, 160, 60)


def parse_point(text: str) -> Point:
    try:
        x, y = (float(v) for v in text.split(","))
    except ValueError as e:
        raise ConfigError(f"expected a point as 'x,y', got {text!r}") from e
    return (x, y)


def plan_cmd(
    scene: Annotated[Path, typer.Argument(help="Scene PGM")],
    goal: Annotated[str, typer.Option("--goal", help="Goal point 'x,y' in meters")],
    start: Annotated[
        str | None, typer.Option("--start", help="Start point 'x,y' (default: spawn)")
    ] = None,
    render: Annotated[
        Path | None, typer.Option("--render", help="Write both paths to this PPM")
    ] = None,
) -> None:
    """Plan A* and Theta* paths on a scene's ground truth and compare them."""
    try:
        loaded = load_scene(scene)
        gt = loaded.gt
        a = parse_point(start) if start else loaded.spawn.position
        b = parse_point(goal)
        theta = plan_theta_star(gt, a, b)
        astar = plan_astar(gt, gt.world_to_cell(*a), gt.world_to_cell(*b))
    except VexploreError as e:
        console.print(f"[red]Error: {e}[/red]")
        raise typer.Exit(1) from None

    table = Table(title=f"{loaded.name}: ({a[0]:.2f}, {a[1]:.2f}) -> ({b[0]:.2f}, {b[1]:.2f})")
    table.add_column("Planner")
    table.add_column("Length m", justify="right")
    table.add_column("Waypoints", justify="right")
    table.add_column("Expansions", justify="right")
    for label, path in (("A*", astar), ("Theta*", theta)):
        if path is None:
            table.add_row(label, "[yellow]unreachable[/yellow]", "-", "-")
        else:
            table.add_row(label, f"{path.length:.2f}", str(len(path)), str(path.expansions))
    console.print(table)

    if render is not None:
        extra: list[tuple[PlanPath, tuple]] = [] if astar is None else [(astar, ASTAR_RGB)]
        try:
            out = render_map(gt, loaded.spawn, theta, render, extra_paths=extra)
        except VexploreError as e:
            console.print(f"[red]Error: {e}[/red]")
            raise typer.Exit(1) from None
        console.print(f"[green]Wrote {out}[/green]")

    if theta is None:
        raise typer.Exit(1)

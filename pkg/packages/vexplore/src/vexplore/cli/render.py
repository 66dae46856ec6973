"""Map images: ``vexplore render``."""

from __future__ import annotations

from pathlib import Path
from typing import Annotated

import typer

from vexplore.bench.render import render_map
from vexplore.core.exceptions import VexploreError
from vexplore.core.logging import get_console
from vexplore.mapping.pgm import read_map
from vexplore.sim.io import load_scene, meta_path

console = get_console()


def render_cmd(
    source: Annotated[Path, typer.Argument(help="Scene or map PGM")],
    out: Annotated[Path, typer.Option("--out", "-o", help="Output PPM file")],
) -> None:
    """Render a scene (with its spawn pose) or a bare map to a PPM image."""
    try:
        if meta_path(source).exists():
            scene = load_scene(source)
            path = render_map(scene.gt, scene.spawn, None, out)
        else:
            path = render_map(read_map(source), None, None, out)
    except VexploreError as e:
        console.print(f"[red]Error: {e}[/red]")
        raise typer.Exit(1) from None
    console.print(f"[green]Wrote {path}[/green]")

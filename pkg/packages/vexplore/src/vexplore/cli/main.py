"""Main CLI for vexplore."""

from typing import Annotated

import typer

from vexplore import __version__
from vexplore.cli import ablation, config, plan, render, run, scenes
from vexplore.core.config import Config
from vexplore.core.exceptions import ConfigError
from vexplore.core.logging import get_console, setup_logging

app = typer.Typer(
    name="vexplore",
    help="vexplore - frontier exploration simulator and coverage benchmark.",
    no_args_is_help=True,
)
console = get_console()

# Command groups
app.add_typer(config.app, name="config")
app.add_typer(scenes.app, name="scenes")

# Top-level commands
app.command("run")(run.run_cmd)
app.command("ablation")(ablation.ablation_cmd)
app.command("gen-scenes")(scenes.gen_scenes_cmd)
app.command("render")(render.render_cmd)
app.command("plan")(plan.plan_cmd)


def _version_callback(value: bool) -> None:
    if value:
        console.print(f"vexplore {__version__}")
        raise typer.Exit()


@app.callback()
def main(
    version: Annotated[
        bool,
        typer.Option(
            "--version",
            "-v",
            callback=_version_callback,
            is_eager=True,
            help="Show version and exit.",
        ),
    ] = False,
    verbose: Annotated[bool, typer.Option("--verbose", help="Log at DEBUG level.")] = False,
    quiet: Annotated[bool, typer.Option("--quiet", "-q", help="Only log warnings.")] = False,
) -> None:
    """vexplore - frontier exploration simulator and coverage benchmark."""
    try:
        app_config = Config.load()
    except ConfigError as e:
        console.print(f"[red]Error: {e}[/red]")
        raise typer.Exit(1) from None

    if verbose or quiet:
        level = "DEBUG" if verbose else "WARNING"
        logging_config = app_config.logging.model_copy(
            update={"level": level, "console_level": level}
        )
        app_config = app_config.model_copy(update={"logging": logging_config})
    setup_logging(app_config, force=True)


if __name__ == "__main__":
    app()

"""Config commands for the vexplore CLI."""

from typing import Annotated, Any

import typer
from rich.console import Console
from rich.markup import escape

from vexplore.core.config import Config, get_config_path, init_config
from vexplore.core.exceptions import ConfigError

app = typer.Typer(help="Manage configuration.")
console = Console()


def _print_section(name: str, values: dict[str, Any], indent: int = 0) -> None:
    pad = "  " * indent
    console.print(f"{pad}[bold]{escape(f'[{name}]')}[/bold]")
    nested = []
    for key, value in values.items():
        if isinstance(value, dict):
            nested.append((key, value))
        else:
            console.print(f"{pad}  {key} = {value}", markup=False, highlight=False)
    for key, value in nested:
        _print_section(f"{name}.{key}", value, indent + 1)


@app.command("show")
def show_config() -> None:
    """Show current configuration."""
    config_path = get_config_path()

    if not config_path.exists():
        console.print(f"[dim]No config file at {config_path}[/dim]")
        console.print("[dim]Run 'vexplore config init' to create one.[/dim]")
        return

    try:
        config = Config.load()
    except ConfigError as e:
        console.print(f"[red]Error: {e}[/red]")
        raise typer.Exit(1) from None
    console.print(f"[bold]Config file:[/bold] {config_path}")
    console.print()

    for section, values in config.model_dump(mode="json").items():
        _print_section(section, values)
        console.print()


@app.command("init")
def init_config_cmd(
    force: Annotated[bool, typer.Option("--force", "-f", help="Overwrite existing config")] = False,
) -> None:
    """Initialize configuration file with defaults."""
    config_path = get_config_path()

    if config_path.exists() and not force:
        console.print(f"[yellow]Config already exists at {config_path}[/yellow]")
        console.print("[dim]Use --force to overwrite.[/dim]")
        raise typer.Exit(1)

    init_config()
    console.print(f"[green]Created config at {config_path}[/green]")


@app.command("set")
def set_config(
    key: Annotated[
        str, typer.Argument(help="Dotted key, e.g. general.workers or defaults.cost.alpha")
    ],
    value: Annotated[str, typer.Argument(help="Value to set")],
) -> None:
    """Set a configuration value."""
    parts = key.split(".")
    if len(parts) < 2:
        console.print("[red]Key must be in format 'section.key'[/red]")
        raise typer.Exit(1)

    try:
        data = Config.load().model_dump(mode="json")
        node = data
        for part in parts[:-1]:
            child = node.setdefault(part, {})
            if not isinstance(child, dict):
                raise ConfigError(f"'{part}' is a value, not a section")
            node = child
        node[parts[-1]] = _parse_value(value)

        Config(**data).save()
        console.print(f"[green]Set {key} = {value}[/green]")
    except Exception as e:
        console.print(f"[red]Error: {e}[/red]")
        raise typer.Exit(1) from None


def _parse_value(value: str) -> Any:
    """Comma-separated values become lists (e.g. seeds); everything else stays a string."""
    if "," in value:
        return [v.strip() for v in value.split(",") if v.strip()]
    return value

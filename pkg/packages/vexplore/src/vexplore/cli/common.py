"""Options and helpers shared by the run and ablation commands."""

from __future__ import annotations

from pathlib import Path
from typing import Annotated, Any

import typer

from vexplore.core.config import Config, load_run_config
from vexplore.core.exceptions import ConfigError
from vexplore.core.logging import get_console
from vexplore.exploration.scoring import DistanceMode
from vexplore.models.run import RunConfig, merge_run_config
from vexplore.sim.io import list_scenes, load_scene
from vexplore.sim.scene import Scene
from vexplore.sim.sensor import DepthMode

console = get_console()

ConfigFileOpt = Annotated[
    Path | None, typer.Option("--config", help="JSON run config; flags override its values")
]
SeedOpt = Annotated[
    str | None, typer.Option("--seed", "-s", help="Comma-separated seeds, e.g. 0,1,2")
]
DurationOpt = Annotated[float | None, typer.Option("--duration", help="Episode length in seconds")]
BumpOpt = Annotated[bool, typer.Option("--bump-detector", help="Enable the bump detector")]
InflateOpt = Annotated[
    bool, typer.Option("--inflate", help="Max-pool and inflate the planner map")
]
OrientationOpt = Annotated[
    float | None,
    typer.Option(
        "--orientation-coef",
        help="Enable the orientation cost term with this gamma (uses path distance)",
    ),
]
CorruptOpt = Annotated[
    bool, typer.Option("--corrupt-depth", help="Noisy depth with narrow-opening closure")
]
AlphaOpt = Annotated[float | None, typer.Option("--alpha", help="Distance weight")]
BetaOpt = Annotated[float | None, typer.Option("--beta", help="Frontier size weight")]
OutOpt = Annotated[
    Path | None, typer.Option("--out", "-o", help="Output directory (default: general.output_dir)")
]


def parse_seeds(text: str) -> list[int]:
    try:
        seeds = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ConfigError(f"seeds must be comma-separated integers, got {text!r}") from e
    if not seeds:
        raise ConfigError("at least one seed is required")
    return seeds


def build_run_config(
    app_config: Config,
    *,
    config_file: Path | None = None,
    seeds: str | None = None,
    duration: float | None = None,
    bump_detector: bool = False,
    inflate: bool = False,
    orientation_coef: float | None = None,
    corrupt_depth: bool = False,
    alpha: float | None = None,
    beta: float | None = None,
) -> RunConfig:
    """TOML defaults, then the JSON file, then command-line flags."""
    base = app_config.defaults
    if config_file is not None:
        base = load_run_config(config_file, base)

    overrides: dict[str, Any] = {}
    enhancements: dict[str, bool] = {}
    cost: dict[str, float] = {}
    if seeds is not None:
        overrides["seeds"] = parse_seeds(seeds)
    if duration is not None:
        overrides["duration_s"] = duration
    if bump_detector:
        enhancements["bump_detector"] = True
    if inflate:
        enhancements["obstacle_expanding"] = True
    if orientation_coef is not None:
        enhancements["orientation_coef"] = True
        cost["gamma"] = orientation_coef
        overrides["exploration"] = {"distance_mode": DistanceMode.PATH.value}
    if corrupt_depth:
        overrides["depth_mode"] = DepthMode.CORRUPTED.value
    if alpha is not None:
        cost["alpha"] = alpha
    if beta is not None:
        cost["beta"] = beta
    if enhancements:
        overrides["enhancements"] = enhancements
    if cost:
        overrides["cost"] = cost
    if not overrides:
        return base
    try:
        return merge_run_config(base, overrides)
    except ValueError as e:
        raise ConfigError(f"invalid run options: {e}") from e


def resolve_scenes(scenes: list[Path] | None, scenes_dir: Path | None) -> list[Scene]:
    """Explicit ``--scene`` files win over ``--scenes-dir``."""
    if scenes:
        return [load_scene(p) for p in scenes]
    if scenes_dir is None:
        return []
    return [load_scene(p) for p in list_scenes(scenes_dir)]


def fmt_time(value: float | None) -> str:
    return "-" if value is None else f"{value:.1f}"

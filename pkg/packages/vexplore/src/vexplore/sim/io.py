"""Scene files: ``<name>.pgm`` + ``<name>.txt`` (map) and ``<name>.json`` (spawn, extras)."""

from __future__ import annotations

import json
from pathlib import Path

from pydantic import BaseModel, ValidationError

from vexplore.core.exceptions import SceneFormatError, VexploreError
from vexplore.geometry import Pose
from vexplore.mapping.pgm import read_map, write_map
from vexplore.sim.scene import Scene


class SceneMeta(BaseModel):
    """Contents of the JSON sidecar."""

    name: str
    spawn: dict[str, float]
    invisible_obstacles: list[tuple[int, int]] = []
    seed: int | None = None
    area: float | None = None
    size_class: str | None = None


def meta_path(pgm_path: Path) -> Path:
    return Path(pgm_path).with_suffix(".json")


def save_scene(scene: Scene, directory: Path) -> Path:
    """Write the three scene files into ``directory``; returns the PGM path."""
    pgm = write_map(scene.gt, Path(directory) / f"{scene.name}.pgm")
    meta = SceneMeta(
        name=scene.name,
        spawn=scene.spawn.to_dict(),
        invisible_obstacles=sorted(scene.invisible_obstacles),
        seed=scene.seed,
        area=round(scene.area, 6),
        size_class=scene.size_class,
    )
    meta_path(pgm).write_text(json.dumps(meta.model_dump(), indent=2) + "\n")
    return pgm


def load_scene(path: Path) -> Scene:
    """Load a scene from its PGM path (or any path sharing its stem)."""
    pgm = Path(path).with_suffix(".pgm")
    gt = read_map(pgm)
    try:
        meta = SceneMeta.model_validate_json(meta_path(pgm).read_text())
    except OSError as e:
        raise SceneFormatError(f"cannot read scene metadata for {pgm}: {e}") from e
    except ValidationError as e:
        raise SceneFormatError(f"{meta_path(pgm)}: {e}") from e
    try:
        return Scene(
            meta.name,
            gt,
            Pose.from_dict(meta.spawn),
            frozenset((int(x), int(y)) for x, y in meta.invisible_obstacles),
            meta.seed,
        )
    except (KeyError, VexploreError) as e:
        raise SceneFormatError(f"{pgm}: inconsistent scene ({e})") from e


def list_scenes(directory: Path) -> list[Path]:
    """PGM paths of every complete scene in ``directory``, sorted by name."""
    directory = Path(directory)
    if not directory.is_dir():
        return []
    return sorted(p for p in directory.glob("*.pgm") if meta_path(p).exists())


def load_scenes(directory: Path) -> list[Scene]:
    return [load_scene(p) for p in list_scenes(directory)]

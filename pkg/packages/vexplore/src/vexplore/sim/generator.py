"""Seeded indoor floor-plan generator.

A rectangular footprint is ringed by walls and split into rooms by binary
space partitioning; every split wall gets one door, so the rooms form a tree
and stay connected. Furniture blocks and invisible low obstacles are then
dropped in, each one kept only if the traversable space stays connected.
Obstacle cells no ray can reach are stored as Unknown.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy.ndimage import binary_dilation, generate_binary_structure
from pydantic import BaseModel, ConfigDict, Field, model_validator

from vexplore.core.exceptions import SceneGenerationError
from vexplore.geometry import Pose
from vexplore.mapping.connectivity import is_connected
from vexplore.mapping.transforms import inflate_obstacles
from vexplore.mapping.types import CellState, OccupancyGrid
from vexplore.sim.scene import Scene

logger = logging.getLogger(__name__)

MIN_AREA = 28.0
MAX_AREA = 251.0

Room = tuple[int, int, int, int]  # x0, y0, width, height in cells


class SceneGenSpec(BaseModel):
    """What to generate. Give either ``area_m2`` or both ``width_m`` and ``height_m``."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str | None = None
    area_m2: float | None = Field(default=None, gt=0)
    width_m: float | None = Field(default=None, gt=0)
    height_m: float | None = Field(default=None, gt=0)
    resolution: float = Field(default=0.05, gt=0)
    wall_cells: int = Field(default=2, ge=1)
    min_room_m: float = Field(default=2.5, gt=0)
    max_rooms: int | None = Field(default=None, ge=1)
    door_width_m: tuple[float, float] = (1.0, 1.2)
    doorway_rich: bool = False
    furniture_per_room: int = Field(default=2, ge=0)
    furniture_size_m: tuple[float, float] = (0.4, 1.2)
    invisible_obstacles: int = Field(default=2, ge=0)
    invisible_size_m: float = Field(default=0.15, gt=0)
    spawn_clearance_m: float = Field(default=0.3, ge=0)
    max_attempts: int = Field(default=20, ge=1)

    @model_validator(mode="after")
    def _ranges_ordered(self) -> SceneGenSpec:
        for label, (lo, hi) in (
            ("door_width_m", self.door_width_m),
            ("furniture_size_m", self.furniture_size_m),
        ):
            if not 0 < lo <= hi:
                raise ValueError(f"{label} must satisfy 0 < low <= high, got ({lo}, {hi})")
        return self

    @property
    def door_range(self) -> tuple[float, float]:
        """Door widths; doorway-rich layouts use narrow doors and smaller rooms."""
        return (0.6, 0.8) if self.doorway_rich else self.door_width_m

    @property
    def room_min(self) -> float:
        return min(self.min_room_m, 2.0) if self.doorway_rich else self.min_room_m


def generate_scene(spec: SceneGenSpec, seed: int) -> Scene:
    """Build a scene; the same (spec, seed) always gives the same scene."""
    rng = np.random.default_rng(seed)
    width_m, height_m = _footprint(spec, rng)
    name = spec.name or f"scene_{seed:04d}"
    for attempt in range(1, spec.max_attempts + 1):
        scene = _attempt(spec, width_m, height_m, rng, name, seed)
        if scene is not None:
            logger.debug("Generated %s on attempt %d (%.1f m^2)", name, attempt, scene.area)
            return scene
        logger.debug("Scene %s attempt %d rejected", name, attempt)
    raise SceneGenerationError(
        f"could not generate a connected scene for {spec.model_dump(exclude_none=True)} "
        f"in {spec.max_attempts} attempts"
    )


def generate_corpus(
    count: int, seed: int = 0, *, doorway_rich: bool = False, prefix: str = "scene"
) -> list[Scene]:
    """``count`` scenes with footprint areas spread evenly over the supported range."""
    if count < 1:
        raise SceneGenerationError(f"scene count must be >= 1, got {count}")
    areas = np.linspace(MIN_AREA, MAX_AREA, count) if count > 1 else np.array([60.0])
    return [
        generate_scene(
            SceneGenSpec(
                name=f"{prefix}_{i:03d}", area_m2=float(area), doorway_rich=doorway_rich
            ),
            seed + i,
        )
        for i, area in enumerate(areas)
    ]


def _footprint(spec: SceneGenSpec, rng: np.random.Generator) -> tuple[float, float]:
    if spec.width_m is not None and spec.height_m is not None:
        width, height = spec.width_m, spec.height_m
    elif spec.area_m2 is not None:
        aspect = float(rng.uniform(1.0, 1.8))
        width = math.sqrt(spec.area_m2 * aspect)
        height = spec.area_m2 / width
    else:
        raise SceneGenerationError("scene spec needs area_m2 or both width_m and height_m")
    area = width * height
    if not MIN_AREA - 1e-9 <= area <= MAX_AREA + 1e-9:
        raise SceneGenerationError(
            f"footprint {width:.2f} x {height:.2f} m = {area:.1f} m^2 is outside "
            f"[{MIN_AREA:g}, {MAX_AREA:g}] m^2"
        )
    return width, height


def _attempt(
    spec: SceneGenSpec,
    width_m: float,
    height_m: float,
    rng: np.random.Generator,
    name: str,
    seed: int,
) -> Scene | None:
    res = spec.resolution
    wall = spec.wall_cells
    iw, ih = round(width_m / res), round(height_m / res)
    cells = np.full((ih + 2 * wall, iw + 2 * wall), CellState.OCCUPIED, dtype=np.int8)
    cells[wall : wall + ih, wall : wall + iw] = CellState.FREE

    max_rooms = spec.max_rooms or max(1, min(8, round(width_m * height_m / 18.0)))
    rooms = _partition(cells, (wall, wall, iw, ih), spec, max_rooms, rng)
    for room in rooms:
        for _ in range(spec.furniture_per_room):
            _place_block(cells, room, spec, rng)

    invisible = _place_invisible(cells, spec, rng)
    traversable = cells == CellState.FREE
    for x, y in invisible:
        traversable[y, x] = False
    if not is_connected(traversable):
        return None

    spawn = _pick_spawn(traversable, spec, rng)
    if spawn is None:
        return None
    gt = OccupancyGrid(hide_unobservable(cells), (0.0, 0.0), res)
    sx, sy = gt.cell_to_world(spawn)
    heading = float(rng.uniform(-math.pi, math.pi))
    return Scene(name, gt, Pose(sx, sy, heading), frozenset(invisible), seed)


def hide_unobservable(cells: np.ndarray) -> np.ndarray:
    """Turn obstacle cells with no Free 4-neighbour into Unknown.

    Wall backs, furniture interiors and inside corners can never end a ray,
    so they are left out of the explorable area.
    """
    free = cells == CellState.FREE
    seen = binary_dilation(free, structure=generate_binary_structure(2, 1))
    return np.where(seen, cells, CellState.UNKNOWN).astype(np.int8)


def _partition(
    cells: np.ndarray,
    footprint: Room,
    spec: SceneGenSpec,
    max_rooms: int,
    rng: np.random.Generator,
) -> list[Room]:
    res = spec.resolution
    wall = spec.wall_cells
    min_room = max(1, round(spec.room_min / res))
    door_lo, door_hi = spec.door_range
    rooms = [footprint]
    while len(rooms) < max_rooms:
        splittable = [r for r in rooms if max(r[2], r[3]) >= 2 * min_room + wall]
        if not splittable:
            break
        room = max(splittable, key=lambda r: r[2] * r[3])
        rooms.remove(room)
        x0, y0, w, h = room
        vertical = w >= h
        span, along = (w, h) if vertical else (h, w)
        cut = int(rng.integers(min_room, span - min_room - wall + 1))
        door = min(round(float(rng.uniform(door_lo, door_hi)) / res), along - 2)
        door_at = int(rng.integers(1, max(2, along - door)))
        if vertical:
            cells[y0 : y0 + h, x0 + cut : x0 + cut + wall] = CellState.OCCUPIED
            cells[y0 + door_at : y0 + door_at + door, x0 + cut : x0 + cut + wall] = CellState.FREE
            rooms += [(x0, y0, cut, h), (x0 + cut + wall, y0, w - cut - wall, h)]
        else:
            cells[y0 + cut : y0 + cut + wall, x0 : x0 + w] = CellState.OCCUPIED
            cells[y0 + cut : y0 + cut + wall, x0 + door_at : x0 + door_at + door] = CellState.FREE
            rooms += [(x0, y0, w, cut), (x0, y0 + cut + wall, w, h - cut - wall)]
    return sorted(rooms)


def _place_block(
    cells: np.ndarray, room: Room, spec: SceneGenSpec, rng: np.random.Generator
) -> None:
    x0, y0, w, h = room
    lo, hi = spec.furniture_size_m
    bw = round(float(rng.uniform(lo, hi)) / spec.resolution)
    bh = round(float(rng.uniform(lo, hi)) / spec.resolution)
    if bw >= w or bh >= h:
        return
    bx = x0 + int(rng.integers(0, w - bw + 1))
    by = y0 + int(rng.integers(0, h - bh + 1))
    block = cells[by : by + bh, bx : bx + bw]
    if np.any(block != CellState.FREE):
        return
    trial = cells == CellState.FREE
    trial[by : by + bh, bx : bx + bw] = False
    if is_connected(trial):
        block[...] = CellState.OCCUPIED


def _place_invisible(
    cells: np.ndarray, spec: SceneGenSpec, rng: np.random.Generator
) -> set[tuple[int, int]]:
    size = max(1, round(spec.invisible_size_m / spec.resolution))
    traversable = cells == CellState.FREE
    placed: set[tuple[int, int]] = set()
    for _ in range(spec.invisible_obstacles):
        ys, xs = np.nonzero(traversable)
        if ys.size == 0:
            break
        k = int(rng.integers(ys.size))
        x, y = int(xs[k]), int(ys[k])
        patch = traversable[y : y + size, x : x + size]
        if patch.shape != (size, size) or not patch.all():
            continue
        trial = traversable.copy()
        trial[y : y + size, x : x + size] = False
        if is_connected(trial):
            traversable = trial
            placed.update((x + dx, y + dy) for dy in range(size) for dx in range(size))
    return placed


def _pick_spawn(
    traversable: np.ndarray, spec: SceneGenSpec, rng: np.random.Generator
) -> tuple[int, int] | None:
    clearance = round(spec.spawn_clearance_m / spec.resolution)
    blocked = OccupancyGrid(np.where(traversable, CellState.FREE, CellState.OCCUPIED))
    safe = inflate_obstacles(blocked, clearance).cells == CellState.FREE
    ys, xs = np.nonzero(safe)
    if ys.size == 0:
        return None
    k = int(rng.integers(ys.size))
    return int(xs[k]), int(ys[k])

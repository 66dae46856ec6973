"""Ground-truth scene: the map the robot explores and where it starts."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from vexplore.core.exceptions import ParameterError
from vexplore.geometry import Pose
from vexplore.mapping.types import Cell, CellState, OccupancyGrid

LARGE_SCENE_AREA = 60.0


@dataclass(frozen=True, eq=False)
class Scene:
    """A ground-truth grid, a spawn pose and cells that block motion without being seen.

    Invisible obstacles are Free in ``gt``: the sensor never reports them,
    only kinematics refuses to enter them.
    """

    name: str
    gt: OccupancyGrid
    spawn: Pose
    invisible_obstacles: frozenset[Cell] = field(default_factory=frozenset)
    seed: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "invisible_obstacles", frozenset(self.invisible_obstacles))
        for cell in self.invisible_obstacles:
            if not self.gt.is_free(cell):
                raise ParameterError(f"invisible obstacle {cell} is not a Free gt cell")
        spawn_cell = self.gt.world_to_cell(*self.spawn.position)
        if not self.gt.is_free(spawn_cell) or spawn_cell in self.invisible_obstacles:
            raise ParameterError(f"spawn cell {spawn_cell} is not traversable")

    @cached_property
    def area(self) -> float:
        """Explorable area in m^2: every Free or Occupied gt cell."""
        return self.gt.known_count * self.gt.resolution**2

    @cached_property
    def size_class(self) -> str:
        return "large" if self.area >= LARGE_SCENE_AREA else "small"

    @cached_property
    def blocked(self) -> np.ndarray:
        """Cells the robot may not enter."""
        mask = self.gt.cells != CellState.FREE
        for x, y in self.invisible_obstacles:
            mask[y, x] = True
        mask.flags.writeable = False
        return mask

    @property
    def spawn_cell(self) -> Cell:
        return self.gt.world_to_cell(*self.spawn.position)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Scene):
            return NotImplemented
        return (
            self.name == other.name
            and self.gt == other.gt
            and self.spawn == other.spawn
            and self.invisible_obstacles == other.invisible_obstacles
            and self.seed == other.seed
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Scene({self.name!r}, area={self.area:.1f} m^2, spawn={self.spawn})"

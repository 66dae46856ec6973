"""Any-angle path value type."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from vexplore.geometry import Point


@dataclass(frozen=True)
class Path:
    """Waypoints p_0 ... p_k in world coordinates; p_0 is the start."""

    points: tuple[Point, ...]
    expansions: int = field(default=0, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "points", tuple((float(x), float(y)) for x, y in self.points)
        )

    @property
    def length(self) -> float:
        return sum(
            math.hypot(b[0] - a[0], b[1] - a[1])
            for a, b in zip(self.points, self.points[1:], strict=False)
        )

    @property
    def start(self) -> Point:
        return self.points[0]

    @property
    def goal(self) -> Point:
        return self.points[-1]

    def __len__(self) -> int:
        return len(self.points)

    def to_dict(self) -> dict:
        return {"points": [list(p) for p in self.points], "length": self.length}

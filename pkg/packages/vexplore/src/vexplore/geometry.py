"""Planar geometry shared by every layer: points, angles and robot poses.

Headings are measured counter-clockwise from +x (east) and always kept in
(-pi, pi].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

Point = tuple[float, float]

TWO_PI = 2.0 * math.pi


def normalize_angle(angle: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    wrapped = math.remainder(angle, TWO_PI)
    if wrapped <= -math.pi:
        wrapped += TWO_PI
    return wrapped


def distance(a: Point, b: Point) -> float:
    return math.hypot(b[0] - a[0], b[1] - a[1])


def bearing(a: Point, b: Point) -> float:
    """Direction of the vector a -> b."""
    return math.atan2(b[1] - a[1], b[0] - a[0])


@dataclass(frozen=True)
class Pose:
    """Robot position in meters and heading in radians."""

    x: float
    y: float
    heading: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "heading", normalize_angle(self.heading))

    @property
    def position(self) -> Point:
        return (self.x, self.y)

    @property
    def heading_vector(self) -> Point:
        return (math.cos(self.heading), math.sin(self.heading))

    def advanced(self, dx: float) -> Pose:
        """Pose translated by dx along the current heading."""
        return Pose(
            self.x + dx * math.cos(self.heading),
            self.y + dx * math.sin(self.heading),
            self.heading,
        )

    def rotated(self, delta: float) -> Pose:
        return Pose(self.x, self.y, self.heading + delta)

    def to_dict(self) -> dict[str, float]:
        return {"x": self.x, "y": self.y, "heading": self.heading}

    @classmethod
    def from_dict(cls, data: dict[str, float]) -> Pose:
        return cls(float(data["x"]), float(data["y"]), float(data.get("heading", 0.0)))

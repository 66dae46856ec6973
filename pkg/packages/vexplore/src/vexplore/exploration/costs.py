"""Frontier cost functions.

Lower cost is better. The baseline cost trades straight-line distance to
the centroid against frontier size; the enhanced cost replaces the distance
with the length of a planned path and adds the turn the robot needs to
start along it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from pydantic import BaseModel, ConfigDict, Field

from vexplore.exploration.frontiers import Frontier
from vexplore.geometry import Pose, bearing, distance, normalize_angle
from vexplore.planning.path import Path


class CostParams(BaseModel):
    """Weights for path length (1/m), frontier size (1/cell) and turn angle (1/rad)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    alpha: float = Field(default=1.0, gt=0)
    beta: float = Field(default=0.33, ge=0)
    gamma: float = Field(default=0.5, ge=0)

    def scaled(self, factor: float) -> CostParams:
        return CostParams(
            alpha=self.alpha * factor, beta=self.beta * factor, gamma=self.gamma * factor
        )


@dataclass(frozen=True)
class CostTerms:
    """The pieces of one frontier's cost, kept for trace output."""

    distance: float
    size: int
    angle: float
    total: float

    @property
    def reachable(self) -> bool:
        return math.isfinite(self.total)

    def to_dict(self) -> dict[str, float | int | None]:
        def finite(v: float) -> float | None:
            return v if math.isfinite(v) else None

        return {
            "distance": finite(self.distance),
            "size": self.size,
            "angle": self.angle,
            "cost": finite(self.total),
        }


UNREACHABLE = math.inf


def turn_angle(robot: Pose, path: Path) -> float:
    """|angle between the heading and p_1 - p_0|, in [0, pi]."""
    if len(path) < 2 or path.points[1] == path.points[0]:
        return 0.0
    return abs(normalize_angle(bearing(path.points[0], path.points[1]) - robot.heading))


def baseline_terms(frontier: Frontier, robot: Pose, params: CostParams) -> CostTerms:
    d = distance(frontier.centroid, robot.position)
    total = params.alpha * d - params.beta * frontier.size
    return CostTerms(distance=d, size=frontier.size, angle=0.0, total=total)


def enhanced_terms(
    frontier: Frontier, robot: Pose, path: Path | None, params: CostParams
) -> CostTerms:
    """Path-length and orientation cost; a missing path makes the frontier unreachable."""
    if path is None or len(path) == 0:
        return CostTerms(distance=UNREACHABLE, size=frontier.size, angle=0.0, total=UNREACHABLE)
    angle = turn_angle(robot, path)
    total = params.alpha * path.length - params.beta * frontier.size + params.gamma * angle
    return CostTerms(distance=path.length, size=frontier.size, angle=angle, total=total)


def cost_baseline(frontier: Frontier, robot: Pose, params: CostParams) -> float:
    return baseline_terms(frontier, robot, params).total


def cost_enhanced(frontier: Frontier, robot: Pose, path: Path | None, params: CostParams) -> float:
    return enhanced_terms(frontier, robot, path, params).total

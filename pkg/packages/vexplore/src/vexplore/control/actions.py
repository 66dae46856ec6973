"""The four discrete robot actions."""

from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum

from vexplore.core.exceptions import ParameterError


class ActionKind(StrEnum):
    FORWARD = "forward"
    TURN_LEFT = "turn_left"
    TURN_RIGHT = "turn_right"
    STAY = "stay"


@dataclass(frozen=True)
class Action:
    """A single command: move ``magnitude`` meters forward, turn ``magnitude`` radians, or stay.

    Translation and rotation are never combined in one action.
    """

    kind: ActionKind
    magnitude: float = 0.0

    def __post_init__(self) -> None:
        if self.magnitude < 0:
            raise ParameterError(f"action magnitude must be >= 0, got {self.magnitude}")
        if self.kind is ActionKind.STAY and self.magnitude:
            raise ParameterError("stay carries no magnitude")

    @classmethod
    def forward(cls, dx: float) -> Action:
        return cls(ActionKind.FORWARD, dx)

    @classmethod
    def turn_left(cls, delta: float) -> Action:
        return cls(ActionKind.TURN_LEFT, delta)

    @classmethod
    def turn_right(cls, delta: float) -> Action:
        return cls(ActionKind.TURN_RIGHT, delta)

    @classmethod
    def stay(cls) -> Action:
        return cls(ActionKind.STAY)

    @property
    def is_forward(self) -> bool:
        return self.kind is ActionKind.FORWARD

    @property
    def rotation(self) -> float:
        """Signed heading change, counter-clockwise positive."""
        if self.kind is ActionKind.TURN_LEFT:
            return self.magnitude
        if self.kind is ActionKind.TURN_RIGHT:
            return -self.magnitude
        return 0.0

    @property
    def translation(self) -> float:
        return self.magnitude if self.is_forward else 0.0

    def to_dict(self) -> dict[str, str | float]:
        return {"kind": self.kind.value, "magnitude": self.magnitude}

"""JSON records describing one exploration decision, for run traces."""

from __future__ import annotations

import json
from collections.abc import Sequence

from vexplore.exploration.scoring import ScoredFrontier
from vexplore.geometry import Point


def decision_record(
    scored: Sequence[ScoredFrontier], chosen: int | None, goal: Point | None
) -> dict:
    """Frontier table plus the chosen frontier id and goal point."""
    return {
        "frontiers": [s.to_dict() for s in scored],
        "chosen": chosen,
        "goal": None if goal is None else list(goal),
    }


def dump_decision(
    scored: Sequence[ScoredFrontier], chosen: int | None, goal: Point | None
) -> str:
    return json.dumps(decision_record(scored, chosen, goal), sort_keys=True)

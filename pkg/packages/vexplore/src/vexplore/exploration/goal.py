"""Goal choice: the centroid of the cheapest eligible frontier."""

from __future__ import annotations

import math
from collections.abc import Sequence

from vexplore.core.exceptions import ParameterError
from vexplore.exploration.frontiers import Frontier
from vexplore.geometry import Point

DEFAULT_MIN_SIZE = 3


def ranked_indices(
    frontiers: Sequence[Frontier], costs: Sequence[float], min_size: int = DEFAULT_MIN_SIZE
) -> list[int]:
    """Eligible frontier indices, best first.

    A frontier is eligible when it has at least ``min_size`` cells and a
    finite cost. Order is by cost, then larger size, then lower index.
    """
    if len(frontiers) != len(costs):
        raise ParameterError(f"{len(frontiers)} frontiers but {len(costs)} costs")
    eligible = [
        i
        for i, (f, c) in enumerate(zip(frontiers, costs, strict=True))
        if f.size >= min_size and not math.isinf(c) and not math.isnan(c)
    ]
    return sorted(eligible, key=lambda i: (costs[i], -frontiers[i].size, i))


def select_index(
    frontiers: Sequence[Frontier], costs: Sequence[float], min_size: int = DEFAULT_MIN_SIZE
) -> int | None:
    ranked = ranked_indices(frontiers, costs, min_size)
    return ranked[0] if ranked else None


def select_goal(
    frontiers: Sequence[Frontier], costs: Sequence[float], min_size: int = DEFAULT_MIN_SIZE
) -> Point | None:
    """Centroid of the best frontier, or None once nothing is left to explore."""
    index = select_index(frontiers, costs, min_size)
    return None if index is None else frontiers[index].centroid

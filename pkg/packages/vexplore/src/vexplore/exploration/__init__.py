"""Frontier detection, frontier costs and goal selection."""

from .costs import CostParams, CostTerms, cost_baseline, cost_enhanced, turn_angle
from .debug import decision_record, dump_decision
from .frontiers import Frontier, detect_frontiers, frontier_mask
from .goal import ranked_indices, select_goal, select_index
from .scoring import DistanceMode, ScoredFrontier, score_frontiers

__all__ = [
    "CostParams",
    "CostTerms",
    "DistanceMode",
    "Frontier",
    "ScoredFrontier",
    "cost_baseline",
    "cost_enhanced",
    "decision_record",
    "detect_frontiers",
    "dump_decision",
    "frontier_mask",
    "ranked_indices",
    "score_frontiers",
    "select_goal",
    "select_index",
    "turn_angle",
]

"""vexplore - Frontier exploration simulator and coverage benchmark harness."""

__version__ = "0.3.0"

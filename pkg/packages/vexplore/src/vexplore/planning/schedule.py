"""Fixed-rate replanning gate."""

from vexplore.core.exceptions import ParameterError

# Tick times are sums of floats; a gap that is 0.2 s on paper may come out a
# hair short.
_TIME_SLACK = 1e-9


def replan_due(last_plan_time: float, now: float, rate_hz: float = 5.0) -> bool:
    """True once at least one replanning period has elapsed."""
    if rate_hz <= 0:
        raise ParameterError(f"replanning rate must be positive, got {rate_hz}")
    return (now - last_plan_time) >= 1.0 / rate_hz - _TIME_SLACK

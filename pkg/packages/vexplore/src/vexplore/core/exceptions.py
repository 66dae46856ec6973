"""Custom exceptions for vexplore."""


class VexploreError(Exception):
    """Base exception for vexplore."""


class ConfigError(VexploreError):
    """Configuration error."""


class ParameterError(VexploreError, ValueError):
    """An operation was called with an out-of-range parameter."""


class GridBoundsError(VexploreError):
    """A pose or cell lies outside the occupancy grid."""


class UndefinedCoverageError(VexploreError):
    """Relative coverage requested against a ground truth with nothing to explore."""


class FrontierDetectionError(VexploreError):
    """The robot has no Free cell to search from."""


class PlanningError(VexploreError):
    """The planner was asked to start from a non-Free cell."""


class SceneGenerationError(VexploreError):
    """A scene spec cannot be realised."""


class SceneFormatError(VexploreError):
    """A scene or map file on disk is malformed."""

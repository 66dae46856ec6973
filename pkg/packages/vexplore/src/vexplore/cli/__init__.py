"""Command-line interface for vexplore."""

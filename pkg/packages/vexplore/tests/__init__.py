"""Tests for the vexplore package."""

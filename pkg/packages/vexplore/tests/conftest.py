"""Test fixtures for the vexplore package."""

from __future__ import annotations

import numpy as np
import pytest
from vexplore.geometry import Pose
from vexplore.mapping.types import CellState, OccupancyGrid
from vexplore.sim.scene import Scene

_SYMBOLS = {".": CellState.FREE, "#": CellState.OCCUPIED, "?": CellState.UNKNOWN}


def grid_from_rows(rows: list[str], resolution: float = 1.0) -> OccupancyGrid:
    """Grid drawn as text, top row = north. ``.`` Free, ``#`` Occupied, ``?`` Unknown."""
    cells = np.array([[_SYMBOLS[c] for c in row] for row in rows], dtype=np.int8)
    return OccupancyGrid(cells[::-1], (0.0, 0.0), resolution)


def room_scene(
    width_m: float = 4.0,
    height_m: float = 4.0,
    resolution: float = 0.1,
    spawn: Pose | None = None,
    name: str = "room",
    invisible: frozenset[tuple[int, int]] = frozenset(),
) -> Scene:
    """One empty rectangular room ringed by a one-cell wall."""
    w = round(width_m / resolution) + 2
    h = round(height_m / resolution) + 2
    cells = np.full((h, w), CellState.OCCUPIED, dtype=np.int8)
    cells[1:-1, 1:-1] = CellState.FREE
    gt = OccupancyGrid(cells, (0.0, 0.0), resolution)
    if spawn is None:
        spawn = Pose(w * resolution / 2 + 0.01, h * resolution / 2 + 0.01, 0.0)
    return Scene(name, gt, spawn, invisible, seed=0)


def random_grid(
    rng: np.random.Generator, shape: tuple[int, int], p_free: float = 0.6, p_occ: float = 0.2
) -> OccupancyGrid:
    states = np.array([CellState.FREE, CellState.OCCUPIED, CellState.UNKNOWN], dtype=np.int8)
    probs = [p_free, p_occ, 1.0 - p_free - p_occ]
    return OccupancyGrid(rng.choice(states, size=shape, p=probs), (0.0, 0.0), 1.0)


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for property-style loops."""
    return np.random.default_rng(20240601)


@pytest.fixture
def make_grid():
    return grid_from_rows


@pytest.fixture
def make_room():
    return room_scene


@pytest.fixture
def make_random_grid():
    return random_grid


@pytest.fixture
def room() -> Scene:
    return room_scene()


@pytest.fixture
def config_dir(tmp_path, monkeypatch):
    """Point the config directory at a temporary path."""
    directory = tmp_path / "config"
    monkeypatch.setenv("VEXPLORE_CONFIG_DIR", str(directory))
    return directory

"""Netpbm map files in the map_server convention.

A map is a binary PGM (P5, maxval 255) plus a text sidecar next to it::

    resolution: 0.05
    origin: -1.0 -2.5

Pixel 0 is Occupied, 254/255 are Free and 205 is Unknown; other values snap
to the nearest of the three. The first image row is the northern edge of the
map, so rows are flipped against the grid's row order.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from vexplore.core.exceptions import SceneFormatError
from vexplore.mapping.types import CellState, OccupancyGrid

OCCUPIED_PIXEL = 0
UNKNOWN_PIXEL = 205
FREE_PIXEL = 254

_PIXEL_LEVELS = np.array([OCCUPIED_PIXEL, UNKNOWN_PIXEL, FREE_PIXEL], dtype=np.int16)
_LEVEL_STATES = np.array([CellState.OCCUPIED, CellState.UNKNOWN, CellState.FREE], dtype=np.int8)
_HEADER_TOKEN = re.compile(rb"(?:\s+|#[^\n]*\n)*(\S+)")


def sidecar_path(pgm_path: Path) -> Path:
    return pgm_path.with_suffix(".txt")


def grid_to_pixels(grid: OccupancyGrid) -> np.ndarray:
    """Greyscale image of the grid, north up."""
    pixels = np.full(grid.shape, UNKNOWN_PIXEL, dtype=np.uint8)
    pixels[grid.cells == CellState.FREE] = FREE_PIXEL
    pixels[grid.cells == CellState.OCCUPIED] = OCCUPIED_PIXEL
    return pixels[::-1]


def pixels_to_cells(pixels: np.ndarray) -> np.ndarray:
    nearest = np.abs(pixels.astype(np.int16)[..., None] - _PIXEL_LEVELS).argmin(axis=-1)
    return _LEVEL_STATES[nearest][::-1]


def encode_pgm(pixels: np.ndarray) -> bytes:
    h, w = pixels.shape
    return f"P5\n{w} {h}\n255\n".encode("ascii") + pixels.astype(np.uint8).tobytes()


def encode_ppm(rgb: np.ndarray) -> bytes:
    h, w, _ = rgb.shape
    return f"P6\n{w} {h}\n255\n".encode("ascii") + rgb.astype(np.uint8).tobytes()


def decode_pgm(data: bytes) -> np.ndarray:
    """Parse a binary P5 image with maxval 255."""
    tokens: list[bytes] = []
    pos = 0
    while len(tokens) < 4:
        match = _HEADER_TOKEN.match(data, pos)
        if not match:
            raise SceneFormatError("truncated PGM header")
        tokens.append(match.group(1))
        pos = match.end()
    magic, width, height, maxval = tokens
    if magic != b"P5":
        raise SceneFormatError(f"expected a binary PGM (P5), got {magic!r}")
    try:
        w, h, m = int(width), int(height), int(maxval)
    except ValueError as e:
        raise SceneFormatError(f"bad PGM header: {e}") from None
    if m != 255:
        raise SceneFormatError(f"only maxval 255 is supported, got {m}")
    body = data[pos + 1 : pos + 1 + w * h]
    if len(body) != w * h:
        raise SceneFormatError(f"PGM body has {len(body)} bytes, expected {w * h}")
    return np.frombuffer(body, dtype=np.uint8).reshape(h, w)


def write_map(grid: OccupancyGrid, path: Path) -> Path:
    """Write ``path`` (PGM) and its text sidecar; returns the PGM path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_pgm(grid_to_pixels(grid)))
    sidecar_path(path).write_text(
        f"resolution: {grid.resolution!r}\norigin: {grid.origin[0]!r} {grid.origin[1]!r}\n"
    )
    return path


def read_map(path: Path) -> OccupancyGrid:
    """Load a PGM map and its sidecar."""
    path = Path(path)
    try:
        pixels = decode_pgm(path.read_bytes())
        meta_text = sidecar_path(path).read_text()
    except OSError as e:
        raise SceneFormatError(f"cannot read map {path}: {e}") from e
    resolution, origin = _parse_sidecar(meta_text, sidecar_path(path))
    return OccupancyGrid(pixels_to_cells(pixels), origin, resolution)


def _parse_sidecar(text: str, path: Path) -> tuple[float, tuple[float, float]]:
    values: dict[str, list[str]] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if ":" not in line:
            continue
        key, _, rest = line.partition(":")
        values[key.strip()] = rest.split()
    try:
        resolution = float(values["resolution"][0])
        ox, oy = (float(v) for v in values["origin"][:2])
    except (KeyError, IndexError, ValueError) as e:
        raise SceneFormatError(f"{path}: sidecar needs 'resolution' and 'origin' ({e})") from None
    return resolution, (ox, oy)

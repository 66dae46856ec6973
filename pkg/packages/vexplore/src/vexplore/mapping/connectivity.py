"""Flood fill and connected-component labelling on boolean masks."""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from vexplore.mapping.types import Cell

_FOUR = ndimage.generate_binary_structure(2, 1)
_EIGHT = ndimage.generate_binary_structure(2, 2)


def flood_fill(mask: np.ndarray, start: Cell, *, diagonal: bool = False) -> np.ndarray:
    """Cells of ``mask`` reachable from ``start`` (an (ix, iy) cell)."""
    x, y = start
    h, w = mask.shape
    if not (0 <= x < w and 0 <= y < h) or not mask[y, x]:
        return np.zeros(mask.shape, dtype=bool)
    labels, _ = label_components(mask, diagonal=diagonal)
    return labels == labels[y, x]


def label_components(mask: np.ndarray, *, diagonal: bool = False) -> tuple[np.ndarray, int]:
    """Label connected components 1..n in row-major order of their first cell."""
    labels, count = ndimage.label(mask, structure=_EIGHT if diagonal else _FOUR)
    return labels.astype(np.int32), int(count)


def is_connected(mask: np.ndarray) -> bool:
    """True when all True cells of ``mask`` form one 4-connected region."""
    _, count = label_components(mask)
    return count <= 1

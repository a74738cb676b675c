"""Exhaustive integer-pel motion search supplying the IMV for each CU."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .distortion import block_satd_map
from .pixel_io import BlockView, Plane, WindowError
from .rate import MotionVector

METRICS = ("sad", "satd")


@dataclass(frozen=True)
class SearchConfig:
    range: int = 8
    metric: str = "sad"

    def __post_init__(self):
        if self.range < 1:
            raise ValueError("search range must be >= 1")
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}")


def pick_best(costs: np.ndarray, dxs: np.ndarray, dys: np.ndarray) -> int:
    """Index of the minimum cost; ties go to smaller |x|+|y|, then y, then x."""
    ties = np.flatnonzero(costs == costs.min())
    if len(ties) == 1:
        return int(ties[0])
    tx, ty = dxs[ties], dys[ties]
    return int(ties[np.lexsort((tx, ty, np.abs(tx) + np.abs(ty)))[0]])


def candidate_costs(orig: np.ndarray, region: np.ndarray, metric: str) -> np.ndarray:
    """Metric of ``orig`` against every same-sized window of ``region``.

    Returns an array indexed [dy, dx] over the valid window offsets.
    """
    h, w = orig.shape
    windows = sliding_window_view(region, (h, w)).astype(np.int64)
    o = orig.astype(np.int64)
    if metric == "sad":
        return np.abs(windows - o).sum(axis=(-2, -1))
    return block_satd_map(o, windows).sum(axis=(-2, -1))


def full_search(orig: BlockView, ref: Plane, center=(0, 0), cfg: SearchConfig = SearchConfig(),
                ref_margin: int = 0) -> tuple[MotionVector, int]:
    """Best integer MV for ``orig`` within ``center`` +/- ``cfg.range`` pels.

    ``center`` is in quarter-pel units and must be integer-pel. Reference
    coordinates are the original's plus ``ref_margin`` (for edge-padded
    references). The window must leave one extra pel on every side for the
    3x3 cost grid that follows.
    """
    center = MotionVector(*center)
    if not center.is_integer:
        raise ValueError(f"search center {center} is not integer-pel")
    cx, cy = center.x // 4, center.y // 4
    r = cfg.range
    x0 = orig.x + cx - r - 1 + ref_margin
    y0 = orig.y + cy - r - 1 + ref_margin
    try:
        region = ref.window(x0, y0, orig.w + 2 * r + 2, orig.h + 2 * r + 2)
    except WindowError as e:
        raise WindowError(f"search window for block at ({orig.x},{orig.y}) leaves the reference: {e}") from None
    costs = candidate_costs(orig.pixels, region[1:-1, 1:-1], cfg.metric)
    disp = np.arange(-r, r + 1)
    dys, dxs = np.meshgrid(disp + cy, disp + cx, indexing="ij")
    best = pick_best(costs.ravel(), dxs.ravel(), dys.ravel())
    mv = MotionVector(4 * int(dxs.ravel()[best]), 4 * int(dys.ravel()[best]))
    return mv, int(costs.ravel()[best])

"""Synthetic frame pairs with known motion, for tests and demos."""

from __future__ import annotations

import numpy as np
from scipy.ndimage import gaussian_filter

from .oracle import interp_block
from .pixel_io import Plane, pad_edges


def smooth_texture(width: int, height: int, seed: int = 0, sigma: float = 2.0) -> Plane:
    """Low-pass filtered noise stretched to the full 8-bit range."""
    rng = np.random.default_rng(seed)
    t = gaussian_filter(rng.standard_normal((height, width)), sigma, mode="wrap")
    t = (t - t.min()) / (t.max() - t.min())
    return Plane(np.round(16 + 223 * t).astype(np.uint8))


def integer_shift_pair(ref: Plane, dx: int, dy: int) -> tuple[Plane, Plane]:
    """(orig, ref) where orig(x, y) = ref(x + dx, y + dy), edges replicated."""
    m = max(abs(dx), abs(dy))
    padded = pad_edges(ref, m).samples
    orig = padded[m + dy:m + dy + ref.height, m + dx:m + dx + ref.width]
    return Plane(orig), ref


def quarter_shift_pair(ref: Plane, mv, margin: int) -> tuple[Plane, Plane]:
    """(orig, padded_ref) where orig is ``ref`` bilinearly displaced by quarter-pel ``mv``.

    The returned reference is edge-padded by ``margin``, so predicting any orig
    block at ``mv`` with that ``ref_margin`` reproduces it exactly.
    """
    mx, my = mv
    padded = pad_edges(ref, margin)
    orig = interp_block(padded, (margin + (mx >> 2), margin + (my >> 2)),
                        (ref.width, ref.height), (mx & 3, my & 3))
    return Plane(orig), padded

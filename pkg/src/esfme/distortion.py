"""SAD and 4x4-Hadamard SATD on integer residuals.

An 8x8 SATD is the sum of four 4x4 SATDs (one per quadrant), which is how
the cost calculator's Hadamard submodules see the block. Everything here is
exact integer arithmetic.
"""

from __future__ import annotations

import numpy as np

from .pixel_io import BlockView

# Unnormalized (sequency-unordered) 4x4 Hadamard matrix; first row all +1.
H4 = np.array(
    [[1, 1, 1, 1],
     [1, -1, 1, -1],
     [1, 1, -1, -1],
     [1, -1, -1, 1]],
    dtype=np.int64,
)


def _pixels(block) -> np.ndarray:
    if isinstance(block, BlockView):
        block = block.pixels
    return np.asarray(block, dtype=np.int64)


def hadamard4x4(r) -> np.ndarray:
    """H @ R @ H.T for a 4x4 residual."""
    r = np.asarray(r, dtype=np.int64).reshape(4, 4)
    return H4 @ r @ H4.T


def satd4x4(r) -> int:
    coeffs = hadamard4x4(r)
    return (int(np.abs(coeffs).sum()) + 1) >> 1


def _quadrant_satd(residual: np.ndarray) -> np.ndarray:
    """Per-4x4 SATD of a (..., H, W) residual stack, H and W multiples of 4."""
    *lead, h, w = residual.shape
    q = residual.reshape(*lead, h // 4, 4, w // 4, 4)
    q = np.swapaxes(q, -3, -2)  # (..., h/4, w/4, 4, 4)
    coeffs = H4 @ q @ H4.T
    return (np.abs(coeffs).sum(axis=(-2, -1)) + 1) >> 1


def block_satd_map(orig, pred) -> np.ndarray:
    """satd8x8 of every 8x8 block, as an (H/8, W/8) array.

    Works on stacked inputs too: leading axes are broadcast.
    """
    residual = _pixels(orig) - _pixels(pred)
    s4 = _quadrant_satd(residual)
    *lead, h4, w4 = s4.shape
    return s4.reshape(*lead, h4 // 2, 2, w4 // 2, 2).sum(axis=(-3, -1))


def satd8x8(orig, pred) -> int:
    o, p = _pixels(orig), _pixels(pred)
    if o.shape != (8, 8) or p.shape != (8, 8):
        raise ValueError(f"satd8x8 needs 8x8 blocks, got {o.shape} and {p.shape}")
    return int(block_satd_map(o, p)[0, 0])


def satd(orig, pred) -> int:
    """SATD of a block whose sides are multiples of 8: sum of its 8x8 SATDs."""
    o, p = _pixels(orig), _pixels(pred)
    if o.shape != p.shape:
        raise ValueError(f"dimension mismatch {o.shape} vs {p.shape}")
    if o.shape[0] % 8 or o.shape[1] % 8:
        raise ValueError(f"block {o.shape} is not a multiple of 8x8")
    return int(block_satd_map(o, p).sum())


def sad(orig, pred) -> int:
    o, p = _pixels(orig), _pixels(pred)
    if o.shape != p.shape:
        raise ValueError(f"dimension mismatch {o.shape} vs {p.shape}")
    return int(np.abs(o - p).sum())

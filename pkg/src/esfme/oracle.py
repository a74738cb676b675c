"""Reference baselines for judging the interpolation-free path.

Nothing in the estimation datapath imports this module. It provides bilinear
quarter-pel interpolation, the exhaustive 7x7 quarter-pel search, the
two-step (half then quarter) search, and a generic floating-point
least-squares solver used to check the integer surface fit.
"""

from __future__ import annotations

import math

import numpy as np

from .distortion import satd
from .ime import pick_best
from .pixel_io import BlockView, Plane, WindowError
from .rate import MotionVector, rd_cost
from .surface import OFFSETS

INTERP_KINDS = ("bilinear",)

HALF_PEL_STEPS = tuple((2 * x, 2 * y) for x, y in OFFSETS)
QUARTER_PEL_STEPS = OFFSETS
EXHAUSTIVE_STEPS = tuple((qx, qy) for qy in range(-3, 4) for qx in range(-3, 4))


def interp_block(ref: Plane, origin, size, frac, kind: str = "bilinear") -> np.ndarray:
    """Bilinear prediction at ``origin`` + ``frac``/4 pels, exact integer rounding."""
    if kind not in INTERP_KINDS:
        raise ValueError(f"unsupported interpolation {kind!r}")
    x, y = origin
    w, h = size
    fx, fy = frac
    if not (0 <= fx <= 3 and 0 <= fy <= 3):
        raise ValueError(f"fractional offset {frac} outside [0, 3]")
    win = ref.window(x, y, w + (fx > 0), h + (fy > 0)).astype(np.int32)
    p00 = win[:h, :w]
    p10 = win[:h, fx > 0:w + (fx > 0)]
    p01 = win[fy > 0:h + (fy > 0), :w]
    p11 = win[fy > 0:h + (fy > 0), fx > 0:w + (fx > 0)]
    out = ((4 - fx) * (4 - fy) * p00 + fx * (4 - fy) * p10
           + (4 - fx) * fy * p01 + fx * fy * p11 + 8) >> 4
    return out.astype(np.uint8)


def predict(ref: Plane, block: BlockView, mv, ref_margin: int = 0) -> np.ndarray:
    """Prediction of ``block`` displaced by the quarter-pel ``mv``."""
    mx, my = mv
    origin = (block.x + (mx >> 2) + ref_margin, block.y + (my >> 2) + ref_margin)
    return interp_block(ref, origin, (block.w, block.h), (mx & 3, my & 3))


def _search(orig: BlockView, ref: Plane, candidates, lambda_q16: int, mvp, ref_margin: int):
    costs = []
    for mv in candidates:
        try:
            pred = predict(ref, orig, mv, ref_margin)
        except WindowError as e:
            raise WindowError(f"candidate {tuple(mv)} leaves the reference: {e}") from None
        costs.append(rd_cost(satd(orig, pred), MotionVector(*mv) - mvp, lambda_q16))
    xs = np.array([mv[0] for mv in candidates])
    ys = np.array([mv[1] for mv in candidates])
    i = pick_best(np.array(costs), xs, ys)
    return MotionVector(*candidates[i]), costs[i]


def exhaustive_quarter_search(orig: BlockView, ref: Plane, imv, lambda_q16: int, mvp=(0, 0),
                              ref_margin: int = 0) -> tuple[MotionVector, int]:
    """True optimum over all 49 quarter-pel points within +/-3 quarters of ``imv``."""
    imv = MotionVector(*imv)
    cands = [imv + s for s in EXHAUSTIVE_STEPS]
    return _search(orig, ref, cands, lambda_q16, MotionVector(*mvp), ref_margin)


def two_step_search(orig: BlockView, ref: Plane, imv, lambda_q16: int, mvp=(0, 0),
                    ref_margin: int = 0) -> tuple[MotionVector, int]:
    """Half-pel ring around ``imv``, then quarter-pel ring around the half-pel winner."""
    imv = MotionVector(*imv)
    mvp = MotionVector(*mvp)
    half, _ = _search(orig, ref, [imv + s for s in HALF_PEL_STEPS], lambda_q16, mvp, ref_margin)
    return _search(orig, ref, [half + s for s in QUARTER_PEL_STEPS], lambda_q16, mvp, ref_margin)


def design_matrix(points=OFFSETS) -> np.ndarray:
    """Rows [x^2, y^2, xy, x, y, 1] for each sample point."""
    return np.array([[x * x, y * y, x * y, x, y, 1] for x, y in points], dtype=float)


def lsq_solve(design, costs) -> np.ndarray:
    """Least-squares parameters via the normal equations, in floating point."""
    X = np.asarray(design, dtype=float)
    c = np.asarray(costs, dtype=float)
    if np.linalg.matrix_rank(X) < X.shape[1]:
        raise np.linalg.LinAlgError("design matrix is rank deficient")
    return np.linalg.solve(X.T @ X, X.T @ c)


def round_quarter_float(v: float, max_quarters: int = 3, rel_tol: float = 1e-9) -> int:
    """Nearest quarter to ``v`` pels; exact half-quarters round toward zero."""
    t = abs(4.0 * v)
    k = math.floor(t)
    frac = t - k
    if frac > 0.5 and not math.isclose(frac, 0.5, rel_tol=0, abs_tol=rel_tol * max(1.0, t)):
        k += 1
    k = min(k, max_quarters)
    return -k if v < 0 else k


def float_refine(costs, max_quarters: int = 3, rel_tol: float = 1e-9) -> tuple[int, int]:
    """Floating-point counterpart of the integer fractional refinement.

    Fits all six parameters with ``lsq_solve``, applies the closed-form
    stationary point and rounds to quarters. Values within ``rel_tol`` of
    zero (relative to their operands) count as zero.
    """
    c = np.asarray(costs, dtype=float)
    P1, P2, P3, P4, P5, _ = lsq_solve(design_matrix(), c)
    scale = max(1.0, float(np.abs(c).max()))
    den = P3 * P3 - 4 * P1 * P2
    den_scale = max(P3 * P3, abs(4 * P1 * P2), 1e-300)
    if abs(den) <= rel_tol * den_scale:
        den = 0.0
    if abs(P1) <= rel_tol * scale:
        P1 = 0.0
    if abs(P2) <= rel_tol * scale:
        P2 = 0.0
    if not (den < 0 and P1 > 0 and P2 > 0):
        return 0, 0
    fx = (2 * P2 * P4 - P3 * P5) / den
    fy = (2 * P1 * P5 - P3 * P4) / den
    return (round_quarter_float(fx, max_quarters, rel_tol),
            round_quarter_float(fy, max_quarters, rel_tol))

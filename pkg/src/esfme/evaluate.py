"""Compare surface-path MVs against the exhaustive and two-step baselines."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cmvp import CTU_SIZE, GRID
from .ime import pick_best
from .oracle import EXHAUSTIVE_STEPS, HALF_PEL_STEPS, QUARTER_PEL_STEPS, interp_block
from .pixel_io import Plane
from .rate import MotionVector
from .schedule import CtuCosts


_EX = np.array(EXHAUSTIVE_STEPS)
_INDEX = {step: i for i, step in enumerate(EXHAUSTIVE_STEPS)}
_HALF_IDX = np.array([_INDEX[s] for s in HALF_PEL_STEPS])


def mvd_bits_array(vx: np.ndarray, vy: np.ndarray) -> np.ndarray:
    """Vectorized ``rate.mvd_bits``."""
    def comp(v):
        m = np.where(v <= 0, -2 * v, 2 * v - 1)
        return 2 * (np.frexp(m + 1)[1] - 1) + 1
    return comp(np.asarray(vx, dtype=np.int64)) + comp(np.asarray(vy, dtype=np.int64))


class FractionalCtuCosts(CtuCosts):
    """CtuCosts that also serves quarter-pel MVs through bilinear interpolation.

    ``window_satd`` gives the SATD of a CU at all 49 quarter-pel candidates
    around an integer MV in one vector.
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._integrals = {}

    def prediction(self, mv) -> np.ndarray:
        mx, my = mv
        m = self.ref_margin
        return interp_block(self.ref, (self.x + (mx >> 2) + m, self.y + (my >> 2) + m),
                            (CTU_SIZE, CTU_SIZE), (mx & 3, my & 3))

    def window_satd(self, imv, cu) -> np.ndarray:
        key = (imv[0], imv[1])
        integral = self._integrals.get(key)
        if integral is None:
            maps = np.stack([self.satd_map((imv[0] + qx, imv[1] + qy)) for qx, qy in EXHAUSTIVE_STEPS])
            integral = np.zeros((len(maps), GRID + 1, GRID + 1), dtype=np.int64)
            integral[:, 1:, 1:] = maps.cumsum(axis=1).cumsum(axis=2)
            self._integrals[key] = integral
        x0, y0 = cu.top_left
        x1, y1 = x0 + cu.w // 8, y0 + cu.h // 8
        return integral[:, y1, x1] - integral[:, y0, x1] - integral[:, y1, x0] + integral[:, y0, x0]


@dataclass(frozen=True)
class CuEvaluation:
    surface_mv: MotionVector
    surface_cost: int
    exhaustive_mv: MotionVector
    exhaustive_cost: int
    two_step_mv: MotionVector
    two_step_cost: int


def evaluate_cu(costs: FractionalCtuCosts, record, lambda_q16: int) -> CuEvaluation:
    """Score one CU record with the same R-D cost the surface path used.

    All three methods choose among the 49 quarter-pel points around the IMV,
    so their costs come from one shared vector.
    """
    imv, mvp = record.imv, record.mvp
    xs = imv.x + _EX[:, 0]
    ys = imv.y + _EX[:, 1]
    bits = mvd_bits_array(xs - mvp.x, ys - mvp.y)
    j = costs.window_satd(imv, record.cu) + ((lambda_q16 * bits + (1 << 15)) >> 16)

    def best(idx):
        k = idx[pick_best(j[idx], xs[idx], ys[idx])]
        return MotionVector(int(xs[k]), int(ys[k])), int(j[k])

    ex_mv, ex_j = best(np.arange(len(j)))
    half_mv, _ = best(_HALF_IDX)
    ring = np.array([_INDEX[(half_mv.x - imv.x + qx, half_mv.y - imv.y + qy)] for qx, qy in QUARTER_PEL_STEPS])
    ts_mv, ts_j = best(ring)
    off = (record.mv.x - imv.x, record.mv.y - imv.y)
    return CuEvaluation(record.mv, int(j[_INDEX[off]]), ex_mv, ex_j, ts_mv, ts_j)


def evaluate_records(orig: Plane, ref: Plane, records, lambda_q16: int,
                     ref_margin: int = 0) -> list[CuEvaluation]:
    """Evaluate CU records (as produced by the schedule) against both baselines.

    The rate term of every candidate uses the same MVP the surface path saw.
    """
    out = []
    cache, key = None, None
    for r in records:
        if (r.frame, r.ctu) != key:
            key = (r.frame, r.ctu)
            cache = FractionalCtuCosts(orig, ref, r.ctu, ref_margin)
        out.append(evaluate_cu(cache, r, lambda_q16))
    return out


def _chebyshev(a, b) -> int:
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


def _excess(cost: int, best: int) -> float:
    return (cost - best) / max(best, 1)


def summarize(evals, true_mv=None) -> dict:
    """Hit rate, near-hit rate and mean relative cost excess versus the exhaustive optimum.

    With ``true_mv`` (synthetic content of known motion) each method's hit
    rate against the ground truth is reported as well.
    """
    n = len(evals)
    if n == 0:
        return {"cus": 0}
    out = {"cus": n}
    if true_mv is not None:
        t = MotionVector(*true_mv)
        out["true_mv_hit_rate"] = {
            "exhaustive": round(sum(e.exhaustive_mv == t for e in evals) / n, 6),
            "surface": round(sum(e.surface_mv == t for e in evals) / n, 6),
            "two_step": round(sum(e.two_step_mv == t for e in evals) / n, 6),
        }
    for name, mv_attr, cost_attr in (("surface", "surface_mv", "surface_cost"),
                                     ("two_step", "two_step_mv", "two_step_cost")):
        hits = sum(getattr(e, mv_attr) == e.exhaustive_mv for e in evals)
        near = sum(_chebyshev(getattr(e, mv_attr), e.exhaustive_mv) <= 1 for e in evals)
        excess = sum(_excess(getattr(e, cost_attr), e.exhaustive_cost) for e in evals) / n
        out[name] = {
            "hit_rate": round(hits / n, 6),
            "near_hit_rate": round(near / n, 6),
            "mean_relative_cost_excess": round(excess, 6),
        }
    return out

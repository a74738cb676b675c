"""Fast invariant checks behind ``esfme selftest``."""

from __future__ import annotations

import sys

import numpy as np

from .distortion import hadamard4x4
from .oracle import design_matrix, float_refine, lsq_solve
from .schedule import FULL_SIZES, ZSCAN, cycle_count, simulate_pipeline, task_order
from .surface import CostGrid, fit_surface, fractional_refine

_SCALE = np.array([6, 6, 12, 12, 12], dtype=float)


def _check_cycles():
    assert cycle_count(FULL_SIZES) == 26628
    for k in range(1, len(FULL_SIZES) + 1):
        sizes = FULL_SIZES[:k]
        assert simulate_pipeline(task_order(sizes)) == cycle_count(sizes), k


def _check_parseval(rng, n):
    r = rng.integers(-255, 256, size=(n, 4, 4))
    for block in r:
        c = hadamard4x4(block)
        assert int((c * c).sum()) == 16 * int((block * block).sum())


def _check_surface_oracle(rng, n):
    X = design_matrix()
    for costs in rng.integers(0, 1 << 20, size=(n, 9), endpoint=True).tolist():
        g = CostGrid(costs)
        p = np.array(fit_surface(g), dtype=float) / _SCALE
        ref = lsq_solve(X, costs)[:5]
        err = np.abs(p - ref).max() / max(1.0, np.abs(ref).max())
        assert err < 1e-9, (costs, err)
        assert tuple(fractional_refine(g)) == float_refine(costs), costs


def _check_invariances(rng, n):
    for costs in rng.integers(0, 1 << 20, size=(n, 9), endpoint=True).tolist():
        g = CostGrid(costs)
        q = fractional_refine(g)
        assert fractional_refine(CostGrid([c + 12345 for c in costs])) == q
        assert fractional_refine(CostGrid([c * 7 for c in costs])) == q
        mx, my = fractional_refine(g.mirrored_x()), fractional_refine(g.mirrored_y())
        assert (mx.qx, mx.qy) == (-q.qx, q.qy) and (my.qx, my.qy) == (q.qx, -q.qy)
        t = fractional_refine(g.transposed())
        assert (t.qx, t.qy) == (q.qy, q.qx)
        assert fractional_refine(g, preshift=False) == q


def _check_zscan():
    seen = set()
    for gx, gy in ZSCAN:
        if gx:
            assert (gx - 1, gy) in seen
        if gy:
            assert (gx, gy - 1) in seen
        seen.add((gx, gy))


def run_all(samples: int = 2000, seed: int = 0, out=sys.stdout) -> int:
    rng = np.random.default_rng(seed)
    checks = [
        ("cycle identity and pipeline simulation", _check_cycles),
        ("Hadamard Parseval identity", lambda: _check_parseval(rng, samples)),
        ("surface fit vs float least squares", lambda: _check_surface_oracle(rng, samples)),
        ("shift/scale/mirror/transpose invariance", lambda: _check_invariances(rng, samples)),
        ("z-scan left/above precedence", _check_zscan),
    ]
    failures = 0
    for name, fn in checks:
        try:
            fn()
        except AssertionError as e:
            failures += 1
            print(f"FAIL  {name}: {e}", file=out)
        else:
            print(f"PASS  {name}", file=out)
    return failures

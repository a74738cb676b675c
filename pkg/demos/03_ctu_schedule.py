"""Walking one 128x128 CTU through the interleaved schedule.

Every 8x8 position is visited in z-scan order, and at each position one task
runs per supported CU size. A CU finishes on its bottom-right block, which is
when its 3x3 cost grid is complete and the surface fit runs. Small CUs finish
early enough to serve as motion vector predictors for the CUs after them.
"""

from esfme import (
    FULL_SIZES,
    QUADTREE_SIZES,
    EstimationConfig,
    SearchConfig,
    cycle_count,
    required_frequency,
    run_ctu,
    simulate_pipeline,
    task_order,
)
from esfme.synthetic import quarter_shift_pair, smooth_texture

tasks = task_order(FULL_SIZES)
print(f"{len(tasks)} tasks per CTU; the first ones:")
for t in tasks[:5]:
    print("   ", t.position, t.cu_size, "closes CU" if t.is_last_block else "")

for name, sizes in [("full", FULL_SIZES), ("quadtree", QUADTREE_SIZES)]:
    print(f"{name:9s} {cycle_count(sizes):6d} cycles per CTU (simulated: {simulate_pipeline(task_order(sizes))})")
print(f"4K at 30 fps, 13 sizes: {float(required_frequency(FULL_SIZES, 3840, 2160, 30)):.1f} MHz")
for mode in ("exact_area", "ceil_grid"):
    mhz = required_frequency(QUADTREE_SIZES, 7680, 4320, 30, mode)
    print(f"8K at 30 fps, 5 sizes, {mode}: {float(mhz):.1f} MHz")

# Run the estimator on one CTU whose content moved by (1.25, -0.5) pels.
tex = smooth_texture(128, 128, seed=1, sigma=3)
orig, ref = quarter_shift_pair(tex, (5, -2), margin=6)
report = run_ctu(orig, ref, (0, 0), QUADTREE_SIZES, EstimationConfig(SearchConfig(4)), ref_margin=6)
print("\nfirst CU of each size in a CTU shifted by (5, -2) quarters:")
first = {}
for r in report.records:
    first.setdefault((r.cu.w, r.cu.h), r)
for r in first.values():
    print(f"    {r.cu.w}x{r.cu.h} at ({r.cu.x0},{r.cu.y0}): imv {tuple(r.imv)} + {r.offset} -> {tuple(r.mv)}")

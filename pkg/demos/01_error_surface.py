"""Refining a motion vector to quarter-pel without interpolating the reference.

Motion search first finds the best whole-pixel vector. Its cost and the costs
of its eight neighbours form a 3x3 grid. A quadratic bowl fitted to that grid
has a lowest point somewhere between the samples, and rounding that point to
the nearest quarter pel gives the fractional part of the motion vector.
"""

from esfme import CostGrid, fit_surface, fractional_refine
from esfme.surface import extremum

# Costs sampled from 16(x - 1/4)^2 + 16(y + 1/2)^2 on the integer grid.
bowl = CostGrid.from_function(lambda x, y: int(16 * (4 * x - 1) ** 2 + 16 * (4 * y + 2) ** 2))
print("cost grid (rows are y = -1, 0, 1):")
for row in bowl.rows():
    print("   ", row)

params = fit_surface(bowl)
num_x, num_y, den = extremum(params)
print("integer surface parameters:", tuple(params))
print(f"minimum at x = {num_x}/{den} = {num_x / den:+.3f}, y = {num_y}/{den} = {num_y / den:+.3f}")
print("quarter-pel offset:", tuple(fractional_refine(bowl)))

# The rounding never divides: it compares 8|num| with odd multiples of den.
# Grids without a proper bowl (flat, saddle, ridge) fall back to (0, 0).
print("flat grid ->", tuple(fractional_refine(CostGrid([5] * 9))))
print("saddle    ->", tuple(fractional_refine(CostGrid.from_function(lambda x, y: 10 + x * x - y * y))))

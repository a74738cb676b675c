"""Quadratic error surface over a 3x3 grid of integer-pel R-D costs.

The cost around the best integer MV is modelled as

    C(x, y) = P1 x^2 + P2 y^2 + P3 xy + P4 x + P5 y + P6

and fitted by least squares to the nine samples at x, y in {-1, 0, 1}.
Because the sample positions never change, the pseudo-inverse is a constant
matrix; scaling (P1..P5) by (6, 6, 12, 12, 12) turns every weight into a small
integer, so the fit is a handful of integer sums. The extremum and its
quarter-pel rounding are then done with multiplies and compares only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

OFFSETS = tuple((x, y) for y in (-1, 0, 1) for x in (-1, 0, 1))
MAX_QUARTERS = 3


@dataclass(frozen=True)
class CostGrid:
    """Nine non-negative integer costs, row-major over y then x in {-1, 0, 1}."""

    costs: tuple

    def __post_init__(self):
        costs = tuple(int(c) for c in self.costs)
        if len(costs) != 9:
            raise ValueError(f"cost grid needs 9 entries, got {len(costs)}")
        if min(costs) < 0:
            raise ValueError("costs must be non-negative")
        object.__setattr__(self, "costs", costs)

    @classmethod
    def from_rows(cls, rows) -> "CostGrid":
        """Build from three rows (y = -1, 0, 1), each listing x = -1, 0, 1."""
        return cls(tuple(c for row in rows for c in row))

    @classmethod
    def from_function(cls, f) -> "CostGrid":
        return cls(tuple(f(x, y) for x, y in OFFSETS))

    def at(self, x: int, y: int) -> int:
        return self.costs[(y + 1) * 3 + (x + 1)]

    def rows(self):
        return [self.costs[0:3], self.costs[3:6], self.costs[6:9]]

    def shifted(self) -> "CostGrid":
        """Subtract the minimum cost from every entry (narrower datapath)."""
        m = min(self.costs)
        return CostGrid(tuple(c - m for c in self.costs))

    def mirrored_x(self) -> "CostGrid":
        return CostGrid.from_function(lambda x, y: self.at(-x, y))

    def mirrored_y(self) -> "CostGrid":
        return CostGrid.from_function(lambda x, y: self.at(x, -y))

    def transposed(self) -> "CostGrid":
        return CostGrid.from_function(lambda x, y: self.at(y, x))


class SurfaceParams(NamedTuple):
    """Integer-scaled fit: p1 = 6*P1, p2 = 6*P2, p3 = 12*P3, p4 = 12*P4, p5 = 12*P5."""

    p1: int
    p2: int
    p3: int
    p4: int
    p5: int


class QuarterPelOffset(NamedTuple):
    qx: int
    qy: int


def fit_surface(grid: CostGrid) -> SurfaceParams:
    s = sxx = syy = sxy = sx = sy = 0
    for (x, y), c in zip(OFFSETS, grid.costs):
        s += c
        if x:
            sxx += c
            sx += x * c
        if y:
            syy += c
            sy += y * c
        if x and y:
            sxy += x * y * c
    return SurfaceParams(
        p1=3 * sxx - 2 * s,
        p2=3 * syy - 2 * s,
        p3=3 * sxy,
        p4=2 * sx,
        p5=2 * sy,
    )


def extremum(params: SurfaceParams) -> tuple[int, int, int]:
    """Stationary point as (num_x, num_y, den); x = num_x/den, y = num_y/den.

    All three carry the common factor 144 of the (6, 6, 12, 12, 12) scaling,
    which is why p1*p2 needs a factor 16 rather than 4.
    """
    p1, p2, p3, p4, p5 = params
    den = p3 * p3 - 16 * p1 * p2
    num_x = 4 * p2 * p4 - p3 * p5
    num_y = 4 * p1 * p5 - p3 * p4
    return num_x, num_y, den


def round_quarter_divfree(num: int, den: int, max_quarters: int = MAX_QUARTERS) -> int:
    """Nearest integer to 4*num/den (ties toward zero), clamped, without dividing.

    8|num| is compared against den, 3den, 5den and 7den; each strict excess
    moves the result one quarter further from zero.
    """
    if den == 0:
        raise ZeroDivisionError("degenerate surface: den == 0")
    if den < 0:
        num, den = -num, -den
    mag = 8 * abs(num)
    k = 0
    for t in (den, 3 * den, 5 * den, 7 * den):
        if mag > t:
            k += 1
    k = min(k, max_quarters)
    return -k if num < 0 else k


def is_strict_minimum(params: SurfaceParams) -> bool:
    _, _, den = extremum(params)
    return den < 0 and params.p1 > 0 and params.p2 > 0


def fractional_refine(grid: CostGrid, max_quarters: int = MAX_QUARTERS,
                      preshift: bool = True) -> QuarterPelOffset:
    """Quarter-pel offset of the fitted surface minimum; (0, 0) when there is none."""
    if preshift:
        grid = grid.shifted()
    params = fit_surface(grid)
    if not is_strict_minimum(params):
        return QuarterPelOffset(0, 0)
    num_x, num_y, den = extremum(params)
    return QuarterPelOffset(
        round_quarter_divfree(num_x, den, max_quarters),
        round_quarter_divfree(num_y, den, max_quarters),
    )

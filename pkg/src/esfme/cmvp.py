"""Coarse MV prediction from the 8x8-granularity MV grid of a CTU.

Only 8x8 CUs write their final MVs into the grid. Any CU, whatever its size,
takes its predictor from the slots immediately left of and above its top-left
8x8 position, so the rate term is available before the partition is known.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .rate import ZERO_MV, MotionVector

CTU_SIZE = 128
GRID = CTU_SIZE // 8


class ScheduleViolation(RuntimeError):
    """The task order broke a write-before-read dependency."""


@dataclass(frozen=True)
class CuRect:
    x0: int
    y0: int
    w: int
    h: int

    def __post_init__(self):
        if self.w % 8 or self.h % 8 or self.w <= 0 or self.h <= 0:
            raise ValueError(f"CU size {self.w}x{self.h} is not a multiple of 8")
        if self.x0 % self.w or self.y0 % self.h:
            raise ValueError(f"CU {self.w}x{self.h} at ({self.x0},{self.y0}) is misaligned")
        if self.x0 < 0 or self.y0 < 0 or self.x0 + self.w > CTU_SIZE or self.y0 + self.h > CTU_SIZE:
            raise ValueError("CU lies outside the CTU")

    @property
    def top_left(self) -> tuple[int, int]:
        return self.x0 // 8, self.y0 // 8

    @property
    def bottom_right(self) -> tuple[int, int]:
        return (self.x0 + self.w) // 8 - 1, (self.y0 + self.h) // 8 - 1


@dataclass
class MvGrid:
    """Best MVs of 8x8 CUs in one CTU, plus optional left/above context.

    ``left`` holds the column just left of the CTU (indexed by row) and
    ``above`` the row just above it (indexed by column). ``absent_reads``
    counts reads of unwritten in-CTU slots.
    """

    slots: list = field(default_factory=lambda: [[None] * GRID for _ in range(GRID)])
    left: list = field(default_factory=lambda: [None] * GRID)
    above: list = field(default_factory=lambda: [None] * GRID)
    absent_reads: int = 0

    def record_mv(self, pos: tuple[int, int], mv) -> None:
        gx, gy = pos
        if not (0 <= gx < GRID and 0 <= gy < GRID):
            raise IndexError(f"grid position {pos} outside the CTU")
        if self.slots[gy][gx] is not None:
            raise ScheduleViolation(f"slot {pos} written twice in one CTU pass")
        self.slots[gy][gx] = MotionVector(*mv)

    def get(self, pos: tuple[int, int]):
        """MV at ``pos``; x == -1 or y == -1 reads the external context."""
        gx, gy = pos
        if gx < -1 or gy < -1 or gx >= GRID or gy >= GRID or (gx < 0 and gy < 0):
            return None
        if gx == -1:
            return self.left[gy]
        if gy == -1:
            return self.above[gx]
        mv = self.slots[gy][gx]
        if mv is None:
            self.absent_reads += 1
        return mv

    def right_column(self) -> list:
        return [self.slots[gy][GRID - 1] for gy in range(GRID)]

    def bottom_row(self) -> list:
        return list(self.slots[GRID - 1])


def derive_cmvp(grid: MvGrid, cu: CuRect) -> MotionVector:
    gx, gy = cu.top_left
    for pos in ((gx - 1, gy), (gx, gy - 1)):
        mv = grid.get(pos)
        if mv is not None:
            return mv
    return ZERO_MV

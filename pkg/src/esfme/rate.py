"""Motion vectors, MVD rate estimation and the integer R-D cost J = D + lambda*R."""

from __future__ import annotations

import functools
from typing import NamedTuple

LAMBDA_SHIFT = 16
_INT64_MAX = (1 << 63) - 1
_MVD_LIMIT = 1 << 15


class MotionVector(NamedTuple):
    """Motion vector in quarter-pel units."""

    x: int
    y: int

    def __add__(self, other):
        return MotionVector(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return MotionVector(self.x - other[0], self.y - other[1])

    @property
    def is_integer(self) -> bool:
        return self.x % 4 == 0 and self.y % 4 == 0

    @classmethod
    def from_pels(cls, x: int, y: int) -> "MotionVector":
        return cls(4 * x, 4 * y)


ZERO_MV = MotionVector(0, 0)


@functools.lru_cache(maxsize=4096)
def component_bits(v: int) -> int:
    """Order-0 exp-Golomb length of one signed MVD component."""
    if not -_MVD_LIMIT < v < _MVD_LIMIT:
        raise ValueError(f"MVD component {v} out of range")
    m = -2 * v if v <= 0 else 2 * v - 1
    return 2 * ((m + 1).bit_length() - 1) + 1


def mvd_bits(mvd) -> int:
    return component_bits(mvd[0]) + component_bits(mvd[1])


# The hardware reads rates from a table; this one covers |v| <= 255.
MVD_BITS_TABLE = {v: component_bits(v) for v in range(-255, 256)}


def rd_cost(distortion: int, mvd, lambda_q16: int) -> int:
    """J = D + round(lambda * bits), lambda given in Q16 fixed point."""
    if distortion < 0 or lambda_q16 < 0:
        raise ValueError("distortion and lambda must be non-negative")
    acc = lambda_q16 * mvd_bits(mvd) + (1 << (LAMBDA_SHIFT - 1))
    if acc > _INT64_MAX:
        raise OverflowError("rate accumulator exceeds 64 bits; lambda too large")
    j = distortion + (acc >> LAMBDA_SHIFT)
    if j > _INT64_MAX:
        raise OverflowError("R-D cost exceeds 64 bits")
    return j


def lambda_from_qp(qp: int) -> int:
    """Default lambda_q16 = round(0.57 * 2**((qp - 12) / 3) * 2**16)."""
    return round(0.57 * 2.0 ** ((qp - 12) / 3.0) * (1 << LAMBDA_SHIFT))

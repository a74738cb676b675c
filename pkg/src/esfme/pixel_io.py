"""Raw luma frame loading and bounds-checked block windows."""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

BLOCK_DIMS = (8, 16, 32, 64, 128)
FORMATS = ("gray8", "yuv420p")


class WindowError(ValueError):
    """A requested pixel window falls outside its plane."""


class FileTooShortError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Plane:
    """An immutable 8-bit luma plane, stored as a (height, width) uint8 array."""

    samples: np.ndarray

    def __post_init__(self):
        a = np.ascontiguousarray(self.samples, dtype=np.uint8)
        if a.ndim != 2:
            raise ValueError(f"plane must be 2-D, got shape {a.shape}")
        a.setflags(write=False)
        object.__setattr__(self, "samples", a)

    @property
    def width(self) -> int:
        return self.samples.shape[1]

    @property
    def height(self) -> int:
        return self.samples.shape[0]

    def window(self, x: int, y: int, w: int, h: int) -> np.ndarray:
        """Read-only (h, w) window at (x, y); raises WindowError when it leaves the plane."""
        if w <= 0 or h <= 0 or x < 0 or y < 0 or x + w > self.width or y + h > self.height:
            raise WindowError(
                f"window {w}x{h}@({x},{y}) outside {self.width}x{self.height} plane"
            )
        return self.samples[y:y + h, x:x + w]

    def view(self, x: int, y: int, w: int, h: int) -> "BlockView":
        return BlockView(self, x, y, w, h)

    def tobytes(self) -> bytes:
        return self.samples.tobytes()


@dataclass(frozen=True)
class BlockView:
    plane: Plane
    x: int
    y: int
    w: int
    h: int

    def __post_init__(self):
        if self.w not in BLOCK_DIMS or self.h not in BLOCK_DIMS:
            raise ValueError(f"block size {self.w}x{self.h} not in {BLOCK_DIMS}")
        # bounds check happens here so no BlockView can exist out of range
        self.plane.window(self.x, self.y, self.w, self.h)

    @property
    def pixels(self) -> np.ndarray:
        return self.plane.window(self.x, self.y, self.w, self.h)


def load_raw_frames(path, width: int, height: int, fmt: str = "gray8", count: int = 1) -> list[Plane]:
    """Read ``count`` frames from a headerless raw file.

    ``gray8`` frames are ``width*height`` bytes. ``yuv420p`` frames are
    ``width*height*3/2`` bytes of which only the leading luma plane is kept.
    """
    if width <= 0 or height <= 0:
        raise ValueError(f"invalid dimensions {width}x{height}")
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    if count < 0:
        raise ValueError("count must be non-negative")
    luma = width * height
    stride = luma if fmt == "gray8" else luma * 3 // 2
    need = stride * count
    size = os.path.getsize(path)
    if size < need:
        raise FileTooShortError(f"{path}: {size} bytes, need {need} for {count} frame(s)")
    with open(path, "rb") as f:
        data = f.read(need)
    buf = np.frombuffer(data, dtype=np.uint8)
    return [
        Plane(buf[i * stride:i * stride + luma].reshape(height, width).copy())
        for i in range(count)
    ]


def save_gray8(path, planes) -> None:
    with open(path, "wb") as f:
        for p in planes:
            f.write(p.tobytes())


def subblocks_8x8(view: BlockView) -> list[BlockView]:
    """Split a view into its 8x8 sub-views, raster order."""
    if view.w % 8 or view.h % 8:
        raise ValueError("view dimensions must be multiples of 8")
    return [
        BlockView(view.plane, view.x + bx, view.y + by, 8, 8)
        for by in range(0, view.h, 8)
        for bx in range(0, view.w, 8)
    ]


def pad_edges(plane: Plane, margin: int) -> Plane:
    """Edge-replicate a plane by ``margin`` pixels on every side.

    The estimation engine never pads on its own; callers use this to build
    a reference whose coordinates are shifted by ``margin``.
    """
    if margin < 0:
        raise ValueError("margin must be non-negative")
    return Plane(np.pad(plane.samples, margin, mode="edge"))

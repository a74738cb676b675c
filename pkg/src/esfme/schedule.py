"""Interlaced per-CTU schedule, the FME pass it drives, and its cycle arithmetic.

The 256 8x8 positions of a 128x128 CTU are visited in z-scan (Morton) order.
At every position one task is issued per supported CU size, so the 8x8
blocks of differently sized CUs are interleaved. A task accumulates the
SATD of its block for the nine integer candidates around the CU's IMV; the
task holding the CU's bottom-right block also closes the CU: it adds the
rate terms against the coarse MVP, fits the error surface and emits the
final quarter-pel MV.

Timing: each task occupies the cost calculator for 8 cycles (8x1 pixels per
cycle), and the first FMV appears 12 cycles after issue. Later tasks are
fully pipelined behind it.
"""

from __future__ import annotations

import csv
import functools
import heapq
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .cmvp import CTU_SIZE, GRID, CuRect, MvGrid, ScheduleViolation, derive_cmvp
from .distortion import block_satd_map
from .ime import SearchConfig, pick_best
from .pixel_io import Plane, WindowError
from .rate import MotionVector, rd_cost
from .surface import MAX_QUARTERS, OFFSETS, CostGrid, fractional_refine

FULL_SIZES = (
    (128, 128), (128, 64), (64, 128), (64, 64), (64, 32), (32, 64), (32, 32),
    (32, 16), (16, 32), (16, 16), (16, 8), (8, 16), (8, 8),
)
QUADTREE_SIZES = ((128, 128), (64, 64), (32, 32), (16, 16), (8, 8))
SIZE_MODES = {"full": FULL_SIZES, "quadtree": QUADTREE_SIZES}
CTU_COUNT_MODES = ("exact_area", "ceil_grid")

KERNEL_CYCLES = 8
FIRST_OUTPUT_LATENCY = 12
BLOCKS_PER_CTU = GRID * GRID


def cu_size_set(mode: str = "full") -> tuple:
    try:
        return SIZE_MODES[mode]
    except KeyError:
        raise ValueError(f"unknown size-set mode {mode!r}; expected one of {sorted(SIZE_MODES)}") from None


def morton_code(x: int, y: int) -> int:
    code = 0
    for bit in range(8):
        code |= ((x >> bit) & 1) << (2 * bit)
        code |= ((y >> bit) & 1) << (2 * bit + 1)
    return code


ZSCAN = tuple(sorted(((x, y) for y in range(GRID) for x in range(GRID)),
                     key=lambda p: morton_code(*p)))


@dataclass(frozen=True)
class Task:
    position: tuple[int, int]
    cu_size: tuple[int, int]
    is_last_block: bool

    @property
    def cu(self) -> CuRect:
        return _containing_cu(self.position, self.cu_size)


@functools.lru_cache(maxsize=None)
def _containing_cu(position, size) -> CuRect:
    (gx, gy), (w, h) = position, size
    return CuRect(gx * 8 // w * w, gy * 8 // h * h, w, h)


@functools.lru_cache(maxsize=16)
def _task_order(sizes: tuple) -> tuple:
    tasks = []
    for gx, gy in ZSCAN:
        for w, h in sizes:
            last = (gx * 8 + 8) % w == 0 and (gy * 8 + 8) % h == 0
            tasks.append(Task((gx, gy), (w, h), last))
    return tuple(tasks)


def task_order(sizes=FULL_SIZES) -> list[Task]:
    return list(_task_order(tuple(tuple(s) for s in sizes)))


def cycle_count(sizes=FULL_SIZES) -> int:
    """Cycles per CTU: first-output latency excess plus 8 cycles per task."""
    return (FIRST_OUTPUT_LATENCY - KERNEL_CYCLES) + KERNEL_CYCLES * len(sizes) * BLOCKS_PER_CTU


def simulate_pipeline(tasks, kernel_cycles: int = KERNEL_CYCLES,
                      latency: int = FIRST_OUTPUT_LATENCY) -> int:
    """Event-driven replay of a task stream; returns the cycle of the last output.

    The cost calculator takes one task at a time for ``kernel_cycles``. Tasks
    that close a CU then spend ``latency - kernel_cycles`` more cycles in the
    pipelined FMV stage; the rest retire as soon as their costs are in.
    """
    tasks = list(tasks)
    events = [(0, 0, "issue", 0)] if tasks else []
    seq = 1
    finish = 0
    while events:
        t, _, kind, i = heapq.heappop(events)
        finish = max(finish, t)
        if kind == "issue":
            heapq.heappush(events, (t + kernel_cycles, seq, "costs_ready", i))
            seq += 1
            if i + 1 < len(tasks):
                heapq.heappush(events, (t + kernel_cycles, seq, "issue", i + 1))
                seq += 1
        elif kind == "costs_ready" and tasks[i].is_last_block:
            heapq.heappush(events, (t + latency - kernel_cycles, seq, "fmv_out", i))
            seq += 1
    return finish


def ctus_per_frame(frame_w: int, frame_h: int, mode: str = "exact_area") -> Fraction:
    if frame_w <= 0 or frame_h <= 0:
        raise ValueError("frame dimensions must be positive")
    if mode == "exact_area":
        return Fraction(frame_w * frame_h, CTU_SIZE * CTU_SIZE)
    if mode == "ceil_grid":
        return Fraction(math.ceil(frame_w / CTU_SIZE) * math.ceil(frame_h / CTU_SIZE))
    raise ValueError(f"unknown CTU count mode {mode!r}")


def required_hz(sizes, frame_w: int, frame_h: int, fps, mode: str = "exact_area") -> Fraction:
    if fps <= 0:
        raise ValueError("fps must be positive")
    return cycle_count(sizes) * ctus_per_frame(frame_w, frame_h, mode) * Fraction(fps)


def required_frequency(sizes, frame_w: int, frame_h: int, fps, mode: str = "exact_area") -> Fraction:
    """Clock in MHz needed to sustain ``fps`` frames of the given size."""
    return required_hz(sizes, frame_w, frame_h, fps, mode) / 1_000_000


class CtuCosts:
    """Per-8x8-block SATD maps of one CTU against displaced reference windows.

    Maps are computed on demand per quarter-pel MV and cached. This class only
    serves integer-pel MVs; reference coordinates are the original's plus
    ``ref_margin``.
    """

    def __init__(self, orig: Plane, ref: Plane, ctu_origin, ref_margin: int = 0):
        self.x, self.y = ctu_origin
        self.ref = ref
        self.ref_margin = ref_margin
        self.orig = orig.window(self.x, self.y, CTU_SIZE, CTU_SIZE).astype(np.int64)
        self._maps = {}

    def prediction(self, mv) -> np.ndarray:
        mx, my = mv
        if mx % 4 or my % 4:
            raise ValueError(f"fractional MV {tuple(mv)} needs interpolation")
        m = self.ref_margin
        return self.ref.window(self.x + mx // 4 + m, self.y + my // 4 + m, CTU_SIZE, CTU_SIZE)

    def satd_map(self, mv) -> np.ndarray:
        key = (int(mv[0]), int(mv[1]))
        out = self._maps.get(key)
        if out is None:
            out = block_satd_map(self.orig, self.prediction(key))
            self._maps[key] = out
        return out

    def cu_satd(self, mv, cu: CuRect) -> int:
        gx, gy = cu.top_left
        return int(self.satd_map(mv)[gy:gy + cu.h // 8, gx:gx + cu.w // 8].sum())


def ctu_integer_search(orig: Plane, ref: Plane, ctu_origin, cus, cfg: SearchConfig,
                       ref_margin: int = 0) -> dict:
    """IMV and cost for every CU of one CTU, searched around MV (0, 0).

    Equivalent to running ``ime.full_search`` per CU, but the block metric is
    computed once per displacement for the whole CTU.
    """
    x, y = ctu_origin
    r = cfg.range
    try:
        region = ref.window(x - r - 1 + ref_margin, y - r - 1 + ref_margin,
                            CTU_SIZE + 2 * r + 2, CTU_SIZE + 2 * r + 2)
    except WindowError as e:
        raise WindowError(f"search window for CTU at ({x},{y}) leaves the reference: {e}") from None
    o = orig.window(x, y, CTU_SIZE, CTU_SIZE).astype(np.int64)
    windows = sliding_window_view(region[1:-1, 1:-1], (CTU_SIZE, CTU_SIZE))
    n = 2 * r + 1
    if cfg.metric == "sad":
        o16 = o.astype(np.int16)
        maps = np.empty((n, n, GRID, GRID), dtype=np.int64)
        for dy in range(n):
            diff = np.abs(windows[dy].astype(np.int16) - o16)
            maps[dy] = diff.reshape(n, GRID, 8, GRID, 8).sum(axis=(-3, -1), dtype=np.int64)
    else:
        maps = np.stack([block_satd_map(o, windows[dy]) for dy in range(n)])
    # zero-padded 2-D prefix sums over the block axes: CU cost in four lookups
    integral = np.zeros((n, n, GRID + 1, GRID + 1), dtype=np.int64)
    integral[:, :, 1:, 1:] = maps.cumsum(axis=2).cumsum(axis=3)
    disp = np.arange(-r, r + 1)
    dys, dxs = np.meshgrid(disp, disp, indexing="ij")
    dxs, dys = dxs.ravel(), dys.ravel()
    out = {}
    for cu in cus:
        x0, y0 = cu.top_left
        x1, y1 = x0 + cu.w // 8, y0 + cu.h // 8
        costs = (integral[:, :, y1, x1] - integral[:, :, y0, x1]
                 - integral[:, :, y1, x0] + integral[:, :, y0, x0]).ravel()
        i = pick_best(costs, dxs, dys)
        out[cu] = (MotionVector(4 * int(dxs[i]), 4 * int(dys[i])), int(costs[i]))
    return out


@dataclass(frozen=True)
class CuRecord:
    frame: int
    ctu: tuple[int, int]
    cu: CuRect
    imv: MotionVector
    mvp: MotionVector
    offset: tuple[int, int]
    mv: MotionVector
    costs: tuple

    def to_dict(self) -> dict:
        return {
            "frame": self.frame,
            "ctu": list(self.ctu),
            "position": [self.cu.x0, self.cu.y0],
            "size": [self.cu.w, self.cu.h],
            "imv": list(self.imv),
            "mvp": list(self.mvp),
            "fmv_offset": list(self.offset),
            "mv": list(self.mv),
            "costs": list(self.costs),
        }


@dataclass
class ScheduleReport:
    sizes: tuple
    cycles_per_ctu: int
    ctus_per_frame: Fraction
    fps: Fraction
    required_hz: Fraction
    records: list = field(default_factory=list)
    absent_reads: int = 0

    def to_dict(self) -> dict:
        return {
            "sizes": [list(s) for s in self.sizes],
            "cycles_per_ctu": self.cycles_per_ctu,
            "ctus_per_frame": {"numerator": self.ctus_per_frame.numerator,
                               "denominator": self.ctus_per_frame.denominator},
            "fps": {"numerator": self.fps.numerator, "denominator": self.fps.denominator},
            "required_hz": {"numerator": self.required_hz.numerator,
                            "denominator": self.required_hz.denominator},
            "records": [r.to_dict() for r in self.records],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["frame", "ctu_x", "ctu_y", "cu_x", "cu_y", "w", "h", "imv_x", "imv_y",
                    "mvp_x", "mvp_y", "off_x", "off_y", "mv_x", "mv_y"]
                   + [f"cost_{x}_{y}" for x, y in OFFSETS])
        for r in self.records:
            w.writerow([r.frame, *r.ctu, r.cu.x0, r.cu.y0, r.cu.w, r.cu.h, *r.imv, *r.mvp,
                        *r.offset, *r.mv, *r.costs])
        return buf.getvalue()


@dataclass(frozen=True)
class EstimationConfig:
    search: SearchConfig = SearchConfig()
    lambda_q16: int = 0
    max_quarters: int = MAX_QUARTERS


def run_ctu_records(orig: Plane, ref: Plane, ctu_origin, sizes=FULL_SIZES,
                    cfg: EstimationConfig = EstimationConfig(), context=None,
                    ref_margin: int = 0, frame: int = 0) -> tuple[list, MvGrid]:
    """One CTU pass in task order; returns the CU records and the filled MV grid.

    ``context`` is an optional ``(left, above)`` pair of 16-entry MV lists
    from neighbouring CTUs.
    """
    grid = MvGrid()
    if context is not None:
        left, above = context
        if left is not None:
            grid.left = list(left)
        if above is not None:
            grid.above = list(above)
    tasks = task_order(sizes)
    cus = list(dict.fromkeys(t.cu for t in tasks))
    imvs = ctu_integer_search(orig, ref, ctu_origin, cus, cfg.search, ref_margin)
    costs = CtuCosts(orig, ref, ctu_origin, ref_margin)

    stacks = {}
    acc = {}
    records = []
    for task in tasks:
        cu = task.cu
        imv = imvs[cu][0]
        stack = stacks.get(imv)
        if stack is None:
            stack = np.stack([costs.satd_map((imv.x + 4 * ox, imv.y + 4 * oy)) for ox, oy in OFFSETS])
            stacks[imv] = stack
        gx, gy = task.position
        sums = acc.get(cu)
        if sums is None:
            sums = acc[cu] = np.zeros(9, dtype=np.int64)
        sums += stack[:, gy, gx]
        if not task.is_last_block:
            continue
        del acc[cu]
        mvp = derive_cmvp(grid, cu)
        j = tuple(
            rd_cost(d, MotionVector(imv.x + 4 * ox, imv.y + 4 * oy) - mvp, cfg.lambda_q16)
            for d, (ox, oy) in zip(sums.tolist(), OFFSETS)
        )
        off = fractional_refine(CostGrid(j), cfg.max_quarters)
        mv = imv + off
        if task.cu_size == (8, 8):
            grid.record_mv(task.position, mv)
        records.append(CuRecord(frame, tuple(ctu_origin), cu, imv, mvp, tuple(off), mv, j))
    if acc:
        raise ScheduleViolation(f"{len(acc)} CU(s) never reached their last block")
    if (8, 8) in sizes and grid.absent_reads:
        raise ScheduleViolation(f"{grid.absent_reads} read(s) of unwritten MV slots")
    return records, grid


def run_ctu(orig: Plane, ref: Plane, ctu_origin, sizes=FULL_SIZES,
            cfg: EstimationConfig = EstimationConfig(), context=None,
            ref_margin: int = 0, fps=30, ctu_count_mode: str = "exact_area") -> ScheduleReport:
    records, grid = run_ctu_records(orig, ref, ctu_origin, sizes, cfg, context, ref_margin)
    report = _report(sizes, orig.width, orig.height, fps, ctu_count_mode)
    report.records = records
    report.absent_reads = grid.absent_reads
    return report


def full_ctu_origins(width: int, height: int) -> list[tuple[int, int]]:
    """Origins of the CTUs lying entirely inside the frame, raster order."""
    return [(x, y) for y in range(0, height - CTU_SIZE + 1, CTU_SIZE)
            for x in range(0, width - CTU_SIZE + 1, CTU_SIZE)]


def run_frame(orig: Plane, ref: Plane, sizes=FULL_SIZES, cfg: EstimationConfig = EstimationConfig(),
              ref_margin: int = 0, frame: int = 0, fps=30,
              ctu_count_mode: str = "exact_area") -> ScheduleReport:
    """Estimate every full CTU of a frame pair, passing MV context between CTUs."""
    report = _report(sizes, orig.width, orig.height, fps, ctu_count_mode)
    grids = {}
    for x, y in full_ctu_origins(orig.width, orig.height):
        left = grids[(x - CTU_SIZE, y)].right_column() if (x - CTU_SIZE, y) in grids else None
        above = grids[(x, y - CTU_SIZE)].bottom_row() if (x, y - CTU_SIZE) in grids else None
        records, grid = run_ctu_records(orig, ref, (x, y), sizes, cfg, (left, above),
                                        ref_margin, frame)
        grids[(x, y)] = grid
        report.records.extend(records)
    return report


def _report(sizes, width, height, fps, mode) -> ScheduleReport:
    return ScheduleReport(
        sizes=tuple(sizes),
        cycles_per_ctu=cycle_count(sizes),
        ctus_per_frame=ctus_per_frame(width, height, mode),
        fps=Fraction(fps),
        required_hz=required_hz(sizes, width, height, fps, mode),
    )

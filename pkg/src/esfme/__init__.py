"""Interpolation-free quarter-pel motion estimation from a fitted cost surface."""

from .cmvp import CuRect, MvGrid, derive_cmvp
from .distortion import hadamard4x4, sad, satd, satd4x4, satd8x8
from .ime import SearchConfig, full_search
from .pixel_io import BlockView, Plane, load_raw_frames, pad_edges, subblocks_8x8
from .rate import MotionVector, lambda_from_qp, mvd_bits, rd_cost
from .schedule import (
    FULL_SIZES,
    QUADTREE_SIZES,
    EstimationConfig,
    ScheduleReport,
    cu_size_set,
    cycle_count,
    required_frequency,
    run_ctu,
    run_frame,
    simulate_pipeline,
    task_order,
)
from .surface import CostGrid, SurfaceParams, extremum, fit_surface, fractional_refine, round_quarter_divfree

__version__ = "0.1.0"

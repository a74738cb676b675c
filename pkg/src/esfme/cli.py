"""Command-line front end: ``esfme {estimate,evaluate,schedule,selftest}``.

Exit codes: 0 ok, 1 usage/configuration, 2 I/O, 3 internal invariant violation.
Set ``ESFME_LOG`` (e.g. ``INFO``, ``DEBUG``) for log output on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction

from .cmvp import ScheduleViolation
from .ime import METRICS, SearchConfig
from .pixel_io import FORMATS, FileTooShortError, load_raw_frames, pad_edges
from .rate import lambda_from_qp
from .schedule import (
    CTU_COUNT_MODES,
    SIZE_MODES,
    EstimationConfig,
    cu_size_set,
    cycle_count,
    ctus_per_frame,
    required_hz,
    run_frame,
)

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

log = logging.getLogger("esfme")

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_INTERNAL = 0, 1, 2, 3

DEFAULTS = {
    "orig": None,
    "ref": None,
    "width": None,
    "height": None,
    "format": "gray8",
    "frames": "0",
    "qp": 32,
    "lambda_q16": None,
    "range": 8,
    "metric": "sad",
    "sizes": "full",
    "max_quarters": 3,
    "ctu_count_mode": "exact_area",
    "fps": "30",
    "output": "-",
    "output_format": "json",
    "true_mv": None,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_run_args(p):
    p.add_argument("--config", help="TOML file with defaults for any option below")
    p.add_argument("--orig", help="raw file holding the frames to estimate")
    p.add_argument("--ref", help="raw file holding the reference frames")
    p.add_argument("--width", type=int)
    p.add_argument("--height", type=int)
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--frames", help="comma-separated frame indices (default 0)")
    p.add_argument("--qp", type=int, help="derive lambda from QP (default 32)")
    p.add_argument("--lambda-q16", type=int, help="explicit lambda in Q16, overrides --qp")
    p.add_argument("--range", type=int, help="integer search range in pels (default 8)")
    p.add_argument("--metric", choices=METRICS)
    p.add_argument("--sizes", choices=sorted(SIZE_MODES))
    p.add_argument("--max-quarters", type=int, choices=(2, 3),
                   help="largest fractional offset in quarters (3, or 2 for the narrow rounder)")
    p.add_argument("--ctu-count-mode", choices=CTU_COUNT_MODES)
    p.add_argument("--fps")
    p.add_argument("--output", help="output path, '-' for stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="esfme", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    est = sub.add_parser("estimate", help="per-CU motion vectors for every full CTU")
    _add_run_args(est)
    est.add_argument("--output-format", choices=("json", "csv"))

    ev = sub.add_parser("evaluate", help="compare against exhaustive and two-step baselines")
    _add_run_args(ev)
    ev.add_argument("--true-mv", help="known quarter-pel motion 'x,y' of synthetic content")

    sch = sub.add_parser("schedule", help="cycle count and required clock")
    sch.add_argument("--mode", choices=sorted(SIZE_MODES), default="full")
    sch.add_argument("--width", type=int, default=3840)
    sch.add_argument("--height", type=int, default=2160)
    sch.add_argument("--fps", default="30")
    sch.add_argument("--ctu-count-mode", choices=CTU_COUNT_MODES, default="exact_area")

    st = sub.add_parser("selftest", help="run the invariant suites")
    st.add_argument("--samples", type=int, default=2000)
    st.add_argument("--seed", type=int, default=0)
    return parser


def resolve_config(args) -> dict:
    """Merge defaults, the optional TOML file and explicit flags (flags win)."""
    cfg = dict(DEFAULTS)
    if getattr(args, "config", None):
        with open(args.config, "rb") as f:
            data = tomllib.load(f)
        data = {k.replace("-", "_"): v for k, v in data.items()}
        unknown = set(data) - set(cfg)
        if unknown:
            raise UsageError(f"unknown config key(s): {', '.join(sorted(unknown))}")
        cfg.update(data)
    for key in cfg:
        v = getattr(args, key, None)
        if v is not None:
            cfg[key] = v
    for key in ("orig", "ref", "width", "height"):
        if cfg[key] is None:
            raise UsageError(f"--{key} is required")
    if cfg["width"] <= 0 or cfg["height"] <= 0:
        raise UsageError("width and height must be positive")
    try:
        cfg["frames"] = [int(i) for i in str(cfg["frames"]).split(",")]
        cfg["fps"] = Fraction(str(cfg["fps"]))
    except ValueError as e:
        raise UsageError(str(e)) from None
    if min(cfg["frames"]) < 0:
        raise UsageError("frame indices must be non-negative")
    if cfg["lambda_q16"] is None:
        cfg["lambda_q16"] = lambda_from_qp(cfg["qp"])
    if cfg["true_mv"] is not None and not isinstance(cfg["true_mv"], (list, tuple)):
        cfg["true_mv"] = tuple(int(v) for v in str(cfg["true_mv"]).split(","))
    return cfg


def _load_pairs(cfg):
    n = max(cfg["frames"]) + 1
    origs = load_raw_frames(cfg["orig"], cfg["width"], cfg["height"], cfg["format"], n)
    refs = load_raw_frames(cfg["ref"], cfg["width"], cfg["height"], cfg["format"], n)
    return [(i, origs[i], refs[i]) for i in cfg["frames"]]


def _estimate(cfg):
    est = EstimationConfig(SearchConfig(cfg["range"], cfg["metric"]), cfg["lambda_q16"],
                           cfg["max_quarters"])
    sizes = cu_size_set(cfg["sizes"])
    # one pel for the cost grid, one for bilinear taps of the evaluator
    margin = cfg["range"] + 2
    report = None
    pairs = _load_pairs(cfg)
    for i, orig, ref in pairs:
        log.info("frame %d: %dx%d", i, orig.width, orig.height)
        r = run_frame(orig, pad_edges(ref, margin), sizes, est, margin, i, cfg["fps"],
                      cfg["ctu_count_mode"])
        if report is None:
            report = r
        else:
            report.records.extend(r.records)
    return report, pairs, margin


def _write(text: str, path: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as f:
            f.write(text)


def cmd_estimate(cfg) -> int:
    report, _, _ = _estimate(cfg)
    text = report.to_csv() if cfg["output_format"] == "csv" else report.to_json()
    _write(text, cfg["output"])
    return EXIT_OK


def cmd_evaluate(cfg) -> int:
    from .evaluate import evaluate_records, summarize

    report, pairs, margin = _estimate(cfg)
    frames = {i: (orig, pad_edges(ref, margin)) for i, orig, ref in pairs}
    evals = []
    for i, (orig, ref) in frames.items():
        recs = [r for r in report.records if r.frame == i]
        evals.extend(evaluate_records(orig, ref, recs, cfg["lambda_q16"], margin))
    out = {
        "frames": cfg["frames"],
        "lambda_q16": cfg["lambda_q16"],
        "sizes": cfg["sizes"],
        "metrics": summarize(evals, cfg["true_mv"]),
    }
    _write(json.dumps(out, indent=1) + "\n", cfg["output"])
    return EXIT_OK


def schedule_summary(mode: str, width: int, height: int, fps, ctu_count_mode: str) -> dict:
    sizes = cu_size_set(mode)
    hz = required_hz(sizes, width, height, Fraction(fps), ctu_count_mode)
    ctus = ctus_per_frame(width, height, ctu_count_mode)
    return {
        "mode": mode,
        "cu_sizes": len(sizes),
        "frame": [width, height],
        "fps": str(Fraction(fps)),
        "ctu_count_mode": ctu_count_mode,
        "cycles_per_ctu": cycle_count(sizes),
        "ctus_per_frame": {"numerator": ctus.numerator, "denominator": ctus.denominator},
        "required_hz": {"numerator": hz.numerator, "denominator": hz.denominator},
        "required_mhz": f"{float(hz) / 1e6:.3f}",
    }


def cmd_schedule(args) -> int:
    if args.width <= 0 or args.height <= 0:
        raise UsageError("width and height must be positive")
    try:
        fps = Fraction(args.fps)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if fps <= 0:
        raise UsageError("fps must be positive")
    s = schedule_summary(args.mode, args.width, args.height, fps, args.ctu_count_mode)
    print(f"{'mode':<16}{s['mode']} ({s['cu_sizes']} CU sizes)")
    print(f"{'frame':<16}{args.width}x{args.height} @ {s['fps']} fps, {s['ctu_count_mode']}")
    print(f"{'cycles/CTU':<16}{s['cycles_per_ctu']}")
    print(f"{'required clock':<16}{s['required_mhz']} MHz")
    print(json.dumps(s))
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .selftest import run_all

    failures = run_all(samples=args.samples, seed=args.seed, out=sys.stdout)
    return EXIT_INTERNAL if failures else EXIT_OK


def _fail(code: int, kind: str, msg) -> int:
    sys.stderr.write(f"esfme: error: {kind}: {' '.join(str(msg).split())}\n")
    return code


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("ESFME_LOG", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "schedule":
            return cmd_schedule(args)
        if args.command == "selftest":
            return cmd_selftest(args)
        cfg = resolve_config(args)
        return cmd_estimate(cfg) if args.command == "estimate" else cmd_evaluate(cfg)
    except UsageError as e:
        return _fail(EXIT_USAGE, "usage", e)
    except (FileNotFoundError, FileTooShortError, tomllib.TOMLDecodeError) as e:
        return _fail(EXIT_IO, "io", e)
    except OSError as e:
        return _fail(EXIT_IO, "io", e)
    except (ScheduleViolation, AssertionError) as e:
        return _fail(EXIT_INTERNAL, "internal", e)
    except ValueError as e:
        return _fail(EXIT_USAGE, "config", e)


if __name__ == "__main__":
    sys.exit(main())

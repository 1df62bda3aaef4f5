"""Command line interface: `slideconv bench` and `slideconv verify`."""

from __future__ import annotations

import argparse
import sys

from .bench import (
    BenchConfig,
    DEFAULT_FILTER_SIZES,
    emit_csv,
    emit_plot_data,
    pin_to_single_core,
    run_benchmark,
    write_reference_plot_data,
)
from .kernels import KernelVariant
from .lanes import VALID_LANES, VectorModel
from .verify import verify_suite


def _parse_sizes(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad filter-size list: {text!r}")


def _parse_hw(text: str) -> tuple[int, int]:
    try:
        h, w = text.lower().split("x")
        return int(h), int(w)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected HxW, got {text!r}")


def _parse_variant(text: str) -> KernelVariant:
    try:
        return KernelVariant(text)
    except ValueError:
        names = ", ".join(v.value for v in KernelVariant)
        raise argparse.ArgumentTypeError(f"unknown variant {text!r}; one of: {names}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="slideconv",
                                description="Sliding-window convolution bench/verify harness")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bench", help="time kernels and emit CSV/plot data")
    b.add_argument("--filter-sizes", type=_parse_sizes,
                   default=DEFAULT_FILTER_SIZES, metavar="3,5,11,...")
    b.add_argument("--input", type=_parse_hw, default=(512, 512), metavar="HxW")
    b.add_argument("--reps", type=int, default=30)
    b.add_argument("--warmup", type=int, default=5)
    b.add_argument("--seed", type=int, default=0x5EED)
    b.add_argument("--lanes", type=int, default=16, choices=VALID_LANES)
    b.add_argument("--baseline", type=_parse_variant, default=KernelVariant.IM2COL_GEMM)
    b.add_argument("--variant", type=_parse_variant, action="append", default=None,
                   help="restrict to these variants (repeatable)")
    b.add_argument("--out", default="bench.csv", metavar="PATH.csv")
    b.add_argument("--plot-dir", default=None, metavar="DIR")
    b.add_argument("--roofline", type=float, default=None, metavar="G",
                   help="add a constant GFLOPS roofline series to throughput.dat")

    v = sub.add_parser("verify", help="run the randomized verification suite")
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--lanes", type=int, default=16, choices=VALID_LANES)
    return p


def cmd_bench(args) -> int:
    cfg = BenchConfig(
        filter_sizes=args.filter_sizes,
        input_h=args.input[0], input_w=args.input[1],
        reps=args.reps, warmup=args.warmup, seed=args.seed,
        vector_lanes=args.lanes, baseline=args.baseline,
        variants=tuple(args.variant) if args.variant else None,
        roofline_gflops=args.roofline,
    )
    pinned = pin_to_single_core()
    print(f"single-core pinning: {'ok' if pinned else 'unavailable'}", file=sys.stderr)
    records = run_benchmark(cfg)
    emit_csv(records, args.out)
    print(f"wrote {len(records)} records to {args.out}", file=sys.stderr)
    if args.plot_dir:
        sp, tp = emit_plot_data(records, cfg, args.plot_dir)
        write_reference_plot_data(args.plot_dir)
        print(f"wrote plot data to {sp} and {tp} (+ reference series)", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    report = verify_suite(seed=args.seed, trials=args.trials,
                          vm=VectorModel(lanes=args.lanes))
    print(report.summary())
    return 0 if report.passed else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "bench":
            return cmd_bench(args)
        return cmd_verify(args)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())

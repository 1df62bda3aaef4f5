"""Single-core benchmark harness: timing, speedup/GFLOPS, CSV and plot data."""

from __future__ import annotations

import csv
import math
import os
import statistics
import time
import warnings
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .kernels import KernelVariant, applicable_variants, run_variant
from .lanes import VectorModel

DEFAULT_FILTER_SIZES = (3, 5, 11, 17, 21, 29, 33, 37, 51)

CSV_FIELDS = (
    "variant", "kh", "kw", "in_h", "in_w", "median_ns", "min_ns",
    "macs", "slides", "im2col_elems", "gflops", "speedup",
)


@dataclass
class BenchConfig:
    filter_sizes: tuple[int, ...] = DEFAULT_FILTER_SIZES
    input_h: int = 512
    input_w: int = 512
    reps: int = 30
    warmup: int = 5
    seed: int = 0x5EED
    vector_lanes: int = 16
    baseline: KernelVariant = KernelVariant.IM2COL_GEMM
    variants: tuple[KernelVariant, ...] | None = None  # None = all applicable
    roofline_gflops: float | None = None

    def validate(self) -> None:
        if self.reps < 3:
            raise ValueError("reps must be >= 3")
        if self.warmup < 0:
            raise ValueError("warmup must be >= 0")
        if not self.filter_sizes:
            raise ValueError("at least one filter size is required")
        limit = min(self.input_h, self.input_w)
        for k in self.filter_sizes:
            if not 1 <= k < limit:
                raise ValueError(f"filter size {k} must be in [1, {limit})")


@dataclass
class BenchRecord:
    variant: KernelVariant
    kh: int
    kw: int
    in_h: int
    in_w: int
    median_ns: int
    min_ns: int
    macs: int
    slides: int
    im2col_elems: int
    gflops: float
    speedup_vs_baseline: float
    checksum: float


def pin_to_single_core() -> bool:
    """Best-effort: restrict the process to one CPU. Returns success."""
    try:
        cpus = os.sched_getaffinity(0)
        os.sched_setaffinity(0, {min(cpus)})
        return True
    except (AttributeError, OSError):
        return False


def _timer_resolution_ns() -> float:
    return time.get_clock_info("perf_counter").resolution * 1e9


def run_benchmark(cfg: BenchConfig) -> list[BenchRecord]:
    """Time every applicable (filter size, variant) cell on seeded random inputs."""
    cfg.validate()
    vm = VectorModel(lanes=cfg.vector_lanes, backend="fast")
    res_ns = _timer_resolution_ns()
    records: list[BenchRecord] = []
    order = {v: i for i, v in enumerate(KernelVariant)}
    for k in sorted(cfg.filter_sizes):
        rng = np.random.default_rng([cfg.seed, k])
        x = rng.uniform(-1.0, 1.0, (cfg.input_h, cfg.input_w)).astype(np.float32)
        f = rng.uniform(-1.0, 1.0, (k, k)).astype(np.float32)
        variants = list(cfg.variants) if cfg.variants else applicable_variants(k, k, vm)
        variants = [v for v in variants if v in applicable_variants(k, k, vm)]
        if cfg.baseline not in variants:
            variants.append(cfg.baseline)
        variants.sort(key=order.__getitem__)
        per_k: dict[KernelVariant, BenchRecord] = {}
        for variant in variants:
            out, counters = run_variant(variant, x, f, vm)
            checksum = float(np.sum(out, dtype=np.float64))
            for _ in range(cfg.warmup):
                run_variant(variant, x, f, vm)
            times = []
            for _ in range(cfg.reps):
                t0 = time.perf_counter_ns()
                run_variant(variant, x, f, vm)
                times.append(time.perf_counter_ns() - t0)
            median_ns = int(statistics.median(times))
            if median_ns < 1000 * res_ns:
                warnings.warn(
                    f"{variant} at k={k}: median {median_ns} ns is below 1000x "
                    f"timer resolution ({res_ns:.0f} ns); timings are noisy"
                )
            gflops = 2.0 * counters.macs / (median_ns * 1e-9) / 1e9
            per_k[variant] = BenchRecord(
                variant=variant, kh=k, kw=k, in_h=cfg.input_h, in_w=cfg.input_w,
                median_ns=median_ns, min_ns=int(min(times)), macs=counters.macs,
                slides=counters.slides, im2col_elems=counters.im2col_elems,
                gflops=gflops, speedup_vs_baseline=math.nan, checksum=checksum,
            )
        base_ns = per_k[cfg.baseline].median_ns
        for rec in per_k.values():
            rec.speedup_vs_baseline = base_ns / rec.median_ns
        records.extend(per_k[v] for v in variants)
    return records


def emit_csv(records: list[BenchRecord], path) -> None:
    """Write one header line plus one row per record; repr floats round-trip."""
    if not records:
        raise ValueError("no records to emit")
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_FIELDS)
            for r in records:
                w.writerow([
                    str(r.variant), r.kh, r.kw, r.in_h, r.in_w, r.median_ns,
                    r.min_ns, r.macs, r.slides, r.im2col_elems,
                    repr(r.gflops), repr(r.speedup_vs_baseline),
                ])
    except OSError as e:
        raise OSError(f"writing benchmark CSV to {path}: {e}") from e


def _write_series(fh, name: str, points: list[tuple[int, float]]) -> None:
    fh.write(f"# {name}\n")
    for k, y in sorted(points):
        fh.write(f"{k} {y!r}\n")
    fh.write("\n")


def emit_plot_data(records: list[BenchRecord], cfg: BenchConfig, out_dir) -> tuple[Path, Path]:
    """Write speedup.dat and throughput.dat, one series block per variant."""
    sizes = {r.kw for r in records}
    if len(sizes) < 2:
        raise ValueError("plot data needs records for at least 2 filter sizes")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    by_variant: dict[KernelVariant, list[BenchRecord]] = {}
    for r in records:
        by_variant.setdefault(r.variant, []).append(r)
    speedup_path = out_dir / "speedup.dat"
    throughput_path = out_dir / "throughput.dat"
    try:
        with open(speedup_path, "w") as fh:
            for variant in KernelVariant:
                if variant in by_variant:
                    pts = [(r.kw, r.speedup_vs_baseline) for r in by_variant[variant]]
                    _write_series(fh, str(variant), pts)
        with open(throughput_path, "w") as fh:
            for variant in KernelVariant:
                if variant in by_variant:
                    pts = [(r.kw, r.gflops) for r in by_variant[variant]]
                    _write_series(fh, str(variant), pts)
            if cfg.roofline_gflops is not None:
                pts = [(k, float(cfg.roofline_gflops)) for k in sorted(sizes)]
                _write_series(fh, "roofline", pts)
    except OSError as e:
        raise OSError(f"writing plot data under {out_dir}: {e}") from e
    return speedup_path, throughput_path


def load_reference_series() -> dict[tuple[str, str], list[tuple[int, float]]]:
    """Published reference measurements (MLAS-relative, Xeon Platinum 8272CL).

    Shipped for side-by-side plotting only; this package never asserts
    its own timings against them.
    """
    series: dict[tuple[str, str], list[tuple[int, float]]] = {}
    data = resources.files("slideconv.data").joinpath("reference_results.csv").read_text()
    for row in csv.DictReader(data.splitlines()):
        key = (row["metric"], row["series"])
        series.setdefault(key, []).append((int(row["filter_size"]), float(row["value"])))
    return series


def write_reference_plot_data(out_dir) -> tuple[Path, Path]:
    """Dump the shipped reference series next to freshly measured plot data."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    series = load_reference_series()
    sp = out_dir / "reference_speedup.dat"
    tp = out_dir / "reference_throughput.dat"
    with open(sp, "w") as fh:
        for (metric, name), pts in series.items():
            if metric == "speedup":
                _write_series(fh, name, pts)
    with open(tp, "w") as fh:
        for (metric, name), pts in series.items():
            if metric == "throughput":
                _write_series(fh, name, pts)
    return sp, tp

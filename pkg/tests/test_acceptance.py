"""Acceptance suite: one test per exit criterion, one printed line each."""

import csv
import math
import time

import numpy as np
import pytest

from slideconv import (
    BenchConfig,
    ConvShape,
    CostCounters,
    KernelVariant,
    VectorModel,
    conv2d_im2col,
    emit_csv,
    emit_plot_data,
    im2col_2d,
    mac_count,
    oracle_conv2d,
    run_benchmark,
    run_variant,
    select_kernel,
    sliding_window_max,
    sliding_window_sum,
)
from slideconv.bench import CSV_FIELDS
from slideconv.kernels import analytic_counters, applicable_variants, compound_width
from slideconv.reference import relative_error

SLIDE_VARIANTS = (KernelVariant.SLIDE_GENERIC, KernelVariant.SLIDE_COMPOUND,
                  KernelVariant.CUSTOM3, KernelVariant.CUSTOM5)


def report(num, name, ok, detail=""):
    line = f"[criterion {num}] {name}: {'PASS' if ok else 'FAIL'}"
    print(line + (f"  ({detail})" if detail else ""))
    assert ok, line


def test_criterion_1_and_2_oracle_equivalence_and_flop_parity():
    rng = np.random.default_rng(2026)
    t0 = time.monotonic()
    worst = 0.0
    lanes_cycle = (4, 8, 16)
    for t in range(1000):
        v = lanes_cycle[t % 3]
        vm = VectorModel(v, "fast")
        k = int(rng.integers(1, v + 10))
        h = int(rng.integers(k, 129))
        w = int(rng.integers(k, 129))
        x = rng.uniform(-1, 1, (h, w)).astype(np.float32)
        f = rng.uniform(-1, 1, (k, k)).astype(np.float32)
        ref = oracle_conv2d(x, f)
        tol = 1e-5 * max(1.0, k * k / 64.0)
        want_macs = mac_count(ConvShape.of(x, f))
        for variant in applicable_variants(k, k, vm):
            out, counters = run_variant(variant, x, f, vm)
            err = relative_error(out, ref)
            worst = max(worst, err)
            assert err <= tol, (variant, v, k, h, w, err)
            assert counters.macs == want_macs, (variant, v, k, h, w)
    elapsed = time.monotonic() - t0
    report(1, "oracle equivalence, 1000 instances", elapsed < 120 and worst <= 1e-5 * (25 * 25 / 64),
           f"worst rel err {worst:.2e}, {elapsed:.1f}s")
    report(2, "FLOP parity, exact", True, "macs == out_h*out_w*kh*kw on every instance")


def test_criterion_3_memory_bloat():
    c = CostCounters()
    conv2d_im2col(np.zeros((512, 512), dtype=np.float32),
                  np.zeros((3, 3), dtype=np.float32), c)
    ratio_2d = c.im2col_elems / (512 * 512)
    c1 = CostCounters()
    im2col_2d(np.zeros((1, 4096), dtype=np.float32), 1, 11, c1)
    ratio_1d = c1.im2col_elems / 4096
    ok = 0.9 * 9 <= ratio_2d <= 9 and 0.9 * 11 <= ratio_1d <= 11
    report(3, "im2col memory bloat", ok,
           f"2-D ratio {ratio_2d:.3f}, 1-D ratio {ratio_1d:.3f}")


def test_criterion_4_slide_count_laws():
    vm = VectorModel(16, "simd")
    rng = np.random.default_rng(4)
    x64 = rng.uniform(-1, 1, (64, 64)).astype(np.float32)
    # custom kernels strictly beat generic on counted slides
    strict_ok = True
    for k, custom in ((3, KernelVariant.CUSTOM3), (5, KernelVariant.CUSTOM5)):
        f = rng.uniform(-1, 1, (k, k)).astype(np.float32)
        _, cg = run_variant(KernelVariant.SLIDE_GENERIC, x64, f, vm)
        _, cc = run_variant(custom, x64, f, vm)
        strict_ok &= cc.slides < cg.slides
    # compound totals follow m*(kw-1) per output vector per filter row
    formula_ok = True
    for k in (29, 33, 37):
        f = rng.uniform(-1, 1, (k, k)).astype(np.float32)
        _, c = run_variant(KernelVariant.SLIDE_COMPOUND, x64, f, vm)
        s = ConvShape(64, 64, k, k)
        m = compound_width(k, vm)
        nvec = math.ceil(s.out_w / 16)
        formula_ok &= c.slides == s.out_h * s.kh * nvec * m * (k - 1)
    # alignment zigzag at 512x512: slides per MAC dips at kw-1 = 2V then jumps
    ratios = []
    for k in (29, 33, 37):
        s = ConvShape(512, 512, k, k)
        c = analytic_counters(KernelVariant.SLIDE_COMPOUND, s, vm)
        ratios.append(c.slides / c.macs)
    zigzag_ok = ratios[1] < ratios[0] < ratios[2]
    report(4, "slide-count laws", strict_ok and formula_ok and zigzag_ok,
           f"custom<generic {strict_ok}, m-formula {formula_ok}, "
           f"zigzag {[round(r, 4) for r in ratios]}")


def test_criterion_5_boundary_dispatch():
    ok = True
    for v in (4, 8, 16):
        vm = VectorModel(v)
        for k in range(1, v + 10):
            got = select_kernel(k, k, vm)
            if k == 3:
                want = KernelVariant.CUSTOM3
            elif k == 5:
                want = KernelVariant.CUSTOM5
            elif k <= v:
                want = KernelVariant.SLIDE_GENERIC
            else:
                want = KernelVariant.SLIDE_COMPOUND
            ok &= got is want
    ok &= select_kernel(17, 17, VectorModel(16)) is KernelVariant.SLIDE_COMPOUND
    report(5, "boundary dispatch", ok, "k = V+1 goes to compound")


def test_criterion_6_pooling():
    rng = np.random.default_rng(6)
    x = rng.uniform(-1, 1, 4096).astype(np.float32)
    x64 = x.astype(np.float64)
    t0 = time.monotonic()
    ok = True
    worst = 0.0
    for k in range(1, 65):
        y, stages = sliding_window_sum(x, k)
        direct = np.convolve(x64, np.ones(k), mode="valid")
        err = relative_error(y, direct)
        worst = max(worst, err)
        ok &= err < 1e-5 and stages <= 2 * math.ceil(math.log2(max(k, 2)))
        ym, _ = sliding_window_max(x, k)
        exact = np.array([x[i : i + k].max() for i in range(4096 - k + 1)], dtype=np.float32)
        ok &= np.array_equal(ym, exact)
    elapsed = time.monotonic() - t0
    report(6, "pooling vs direct oracles", ok and elapsed < 10,
           f"worst sum err {worst:.2e}, max exact, {elapsed:.1f}s")


def test_criterion_7_scalar_simd_equivalence():
    rng = np.random.default_rng(7)
    ok = True
    for t in range(100):
        v = (4, 8)[t % 2]
        k = int(rng.integers(1, v + 2))
        h = int(rng.integers(k, 2 * v + 5))
        w = int(rng.integers(k, 2 * v + 5))
        x = rng.uniform(-1, 1, (h, w)).astype(np.float32)
        f = rng.uniform(-1, 1, (k, k)).astype(np.float32)
        for variant in SLIDE_VARIANTS:
            if variant not in applicable_variants(k, k, VectorModel(v)):
                continue
            scal, _ = run_variant(variant, x, f, VectorModel(v, "scalar"))
            simd, _ = run_variant(variant, x, f, VectorModel(v, "simd"))
            ok &= np.array_equal(scal, simd)
    report(7, "scalar/SIMD bit-identical outputs", ok, "100 instances")


@pytest.mark.xfail(strict=False,
                   reason="wall-clock trend, machine-dependent: expected to pass, not a hard gate")
def test_criterion_8_wallclock_trend():
    cfg = BenchConfig(filter_sizes=(3, 11), reps=5, warmup=2, seed=8,
                      variants=(KernelVariant.SLIDE_GENERIC, KernelVariant.IM2COL_GEMM))
    records = run_benchmark(cfg)
    speedup = {r.kw: r.speedup_vs_baseline for r in records
               if r.variant is KernelVariant.SLIDE_GENERIC}
    ok = speedup[11] >= 1.5 and speedup[11] > speedup[3]
    report(8, "slide vs im2col wall-clock trend", ok,
           f"speedup k=3: {speedup[3]:.2f}x, k=11: {speedup[11]:.2f}x")


def test_criterion_9_output_contracts(tmp_path):
    cfg = BenchConfig(filter_sizes=(3, 5), input_h=32, input_w=32, reps=3,
                      warmup=1, seed=9, vector_lanes=8, roofline_gflops=170.0)
    records = run_benchmark(cfg)
    path = tmp_path / "bench.csv"
    emit_csv(records, path)
    lines = path.read_text().splitlines()
    ok = lines[0] == ",".join(CSV_FIELDS) and len(lines) == len(records) + 1
    with open(path) as fh:
        rows = list(csv.DictReader(fh))
    for rec, row in zip(records, rows):
        ok &= float(row["gflops"]) == rec.gflops
        ok &= float(row["speedup"]) == rec.speedup_vs_baseline
        ok &= int(row["median_ns"]) == rec.median_ns
    sp, tp = emit_plot_data(records, cfg, tmp_path)
    text = tp.read_text()
    present = {r.variant.value for r in records}
    ok &= all(f"# {name}\n" in sp.read_text() for name in present)
    ok &= "# roofline" in text and "170.0" in text
    report(9, "CSV round-trip and plot series", ok)

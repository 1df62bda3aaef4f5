"""Randomized verification suite backing the `verify` CLI command.

Each property runs against independent oracles (float64 brute force,
direct window reductions, closed-form counter formulas) and reports
pass/fail with the worst observed error instead of raising.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .kernels import (
    KernelVariant,
    analytic_counters,
    applicable_variants,
    run_variant,
    select_kernel,
)
from .lanes import VectorModel
from .pooling import sliding_window_max, sliding_window_sum
from .reference import oracle_conv2d, relative_error
from .tensor import ConvShape, mac_count


@dataclass
class PropertyResult:
    name: str
    passed: bool
    worst_error: float = 0.0
    detail: str = ""

    def __str__(self):
        status = "PASS" if self.passed else "FAIL"
        msg = f"{status}  {self.name}  worst_error={self.worst_error:.3e}"
        return msg + (f"  ({self.detail})" if self.detail else "")


@dataclass
class VerifyReport:
    results: list[PropertyResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def summary(self) -> str:
        return "\n".join(str(r) for r in self.results)


def _tolerance(kh: int, kw: int) -> float:
    return 1e-5 * max(1.0, kh * kw / 64.0)


def _random_instance(rng, k: int, lo: int, hi: int):
    h = int(rng.integers(max(k, lo), hi + 1))
    w = int(rng.integers(max(k, lo), hi + 1))
    x = rng.uniform(-1.0, 1.0, (h, w)).astype(np.float32)
    f = rng.uniform(-1.0, 1.0, (k, k)).astype(np.float32)
    return x, f


def verify_suite(seed: int = 0, trials: int = 100,
                 vm: VectorModel | None = None,
                 corrupt: str | None = None) -> VerifyReport:
    """Run all randomized properties; ``corrupt`` injects a single-element
    fault into the named property so the harness can prove it would notice."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    vm = vm or VectorModel()
    fast = VectorModel(vm.lanes, "fast")
    report = VerifyReport()
    rng = np.random.default_rng(seed)

    def bump(out, name):
        if corrupt == name:
            out = out.copy()
            out.flat[0] += 1.0
        return out

    # cross-variant / oracle agreement, FLOP parity ------------------------
    worst = 0.0
    parity_ok = True
    agree_ok = True
    for t in range(trials):
        k = int(rng.integers(1, vm.lanes + 3))
        x, f = _random_instance(rng, k, k, 48)
        ref = oracle_conv2d(x, f)
        for variant in applicable_variants(k, k, fast):
            out, counters = run_variant(variant, x, f, fast)
            err = relative_error(bump(out, "cross_variant_oracle"), ref)
            worst = max(worst, err)
            if err > _tolerance(k, k):
                agree_ok = False
            want = mac_count(ConvShape.of(x, f))
            if counters.macs + (1 if corrupt == "flop_parity" and t == 0 else 0) != want:
                parity_ok = False
    report.results.append(PropertyResult("cross_variant_oracle", agree_ok, worst))
    report.results.append(PropertyResult("flop_parity", parity_ok,
                                         detail="macs == out_h*out_w*kh*kw, exact"))

    # delta filter: exact center crop --------------------------------------
    ok = True
    for k in (3, 5):
        x = np.arange(12 * 13, dtype=np.float32).reshape(12, 13)
        f = np.zeros((k, k), dtype=np.float32)
        c = k // 2
        f[c, c] = 1.0
        for variant in applicable_variants(k, k, fast):
            out, _ = run_variant(variant, x, f, fast)
            crop = x[c : c + out.shape[0], c : c + out.shape[1]]
            if not np.array_equal(bump(out, "delta_filter"), crop):
                ok = False
    report.results.append(PropertyResult("delta_filter", ok, detail="exact crop"))

    # instrumented counters match the closed-form formulas -----------------
    ok = True
    emu = VectorModel(vm.lanes, "simd")
    n_small = min(trials, 8)
    for t in range(n_small):
        k = int(rng.integers(1, vm.lanes + 3))
        x, f = _random_instance(rng, k, k, 3 * vm.lanes)
        for variant in (KernelVariant.SLIDE_GENERIC, KernelVariant.SLIDE_COMPOUND,
                        KernelVariant.CUSTOM3, KernelVariant.CUSTOM5):
            if variant not in applicable_variants(k, k, emu):
                continue
            _, got = run_variant(variant, x, f, emu)
            want = analytic_counters(variant, ConvShape.of(x, f), emu)
            if corrupt == "slide_count_formulas" and t == 0:
                got.slides += 1
            if (got.macs, got.slides, got.loads) != (want.macs, want.slides, want.loads):
                ok = False
    report.results.append(PropertyResult("slide_count_formulas", ok,
                                         detail="instrumented == analytic"))

    # custom kernels beat generic on shuffles -------------------------------
    ok = True
    for k in (3, 5):
        s = ConvShape(8 * vm.lanes, 8 * vm.lanes, k, k)
        custom = KernelVariant.CUSTOM3 if k == 3 else KernelVariant.CUSTOM5
        cs = analytic_counters(custom, s, vm).slides
        gs = analytic_counters(KernelVariant.SLIDE_GENERIC, s, vm).slides
        if corrupt == "custom_fewer_slides":
            cs = gs
        if not cs < gs:
            ok = False
    report.results.append(PropertyResult("custom_fewer_slides", ok))

    # pooling ----------------------------------------------------------------
    worst = 0.0
    ok = True
    for _ in range(min(trials, 32)):
        n = int(rng.integers(64, 1024))
        k = int(rng.integers(1, min(64, n) + 1))
        x = rng.uniform(-1.0, 1.0, n).astype(np.float32)
        y, stages = sliding_window_sum(x, k, vm)
        direct = np.array([np.sum(x[i : i + k].astype(np.float64)) for i in range(n - k + 1)])
        err = relative_error(bump(y, "pooling_sum"), direct)
        worst = max(worst, err)
        if err > 1e-5 or stages > 2 * max(1, int(np.ceil(np.log2(max(k, 2))))):
            ok = False
    report.results.append(PropertyResult("pooling_sum", ok, worst))
    ok = True
    for _ in range(min(trials, 32)):
        n = int(rng.integers(64, 1024))
        k = int(rng.integers(1, min(64, n) + 1))
        x = rng.uniform(-1.0, 1.0, n).astype(np.float32)
        y, _ = sliding_window_max(x, k, vm)
        direct = np.array([np.max(x[i : i + k]) for i in range(n - k + 1)], dtype=np.float32)
        if not np.array_equal(bump(y, "pooling_max"), direct):
            ok = False
    report.results.append(PropertyResult("pooling_max", ok, detail="exact"))

    # boundary filter widths around V, dims coprime with V -------------------
    ok = True
    worst = 0.0
    v = vm.lanes
    dims = [d for d in (3 * v + 1, 2 * v + 3, 4 * v - 1) ]
    for k in (v - 1, v, v + 1, v + 2):
        h, w = dims[k % len(dims)], dims[(k + 1) % len(dims)]
        x = rng.uniform(-1.0, 1.0, (h, w)).astype(np.float32)
        f = rng.uniform(-1.0, 1.0, (k, k)).astype(np.float32)
        ref = oracle_conv2d(x, f)
        for variant in applicable_variants(k, k, fast):
            out, _ = run_variant(variant, x, f, fast)
            err = relative_error(bump(out, "boundary_shapes"), ref)
            worst = max(worst, err)
            if err > _tolerance(k, k):
                ok = False
        chosen = select_kernel(k, k, vm)
        if chosen not in applicable_variants(k, k, vm):
            ok = False
    report.results.append(PropertyResult("boundary_shapes", ok, worst))

    # backend equivalence: scalar / simd / fast bit-identical ----------------
    ok = True
    scal = VectorModel(vm.lanes, "scalar")
    for t in range(min(trials, 6)):
        k = int(rng.integers(1, vm.lanes + 2))
        x, f = _random_instance(rng, k, max(k, vm.lanes), 2 * vm.lanes)
        for variant in (KernelVariant.SLIDE_GENERIC, KernelVariant.SLIDE_COMPOUND,
                        KernelVariant.CUSTOM3, KernelVariant.CUSTOM5):
            if variant not in applicable_variants(k, k, scal):
                continue
            a, _ = run_variant(variant, x, f, scal)
            b, _ = run_variant(variant, x, f, emu)
            c, _ = run_variant(variant, x, f, fast)
            if corrupt == "backend_equivalence" and t == 0:
                a = a.copy()
                a.flat[0] += 1.0
            if not (np.array_equal(a, b) and np.array_equal(b, c)):
                ok = False
    report.results.append(PropertyResult("backend_equivalence", ok,
                                         detail="bit-identical outputs"))
    return report

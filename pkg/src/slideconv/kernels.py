"""Sliding-window convolution kernels over the lane abstraction.

Three variants implement the same arithmetic with different shuffle
economics:

* generic   - one slide per tap per output vector, filter width <= V+1;
* compound  - m consecutive hardware vectors treated as one long vector,
              shifted by one lane per tap with carry between vectors,
              serving any filter width >= 2;
* custom3/5 - 3x3 / 5x5 specializations that compute each input row's
              slid vectors once and reuse them across all output rows
              touching that row.

Every variant accumulates taps in ascending (row, col) order per output
element, so outputs agree bit-for-bit across variants and backends.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from . import gemm as gemm_mod
from .lanes import VectorModel, load_vec, madd, slide, vector_starts
from .reference import _accumulate_taps
from .tensor import (
    ConvShape,
    CostCounters,
    FilterSizeError,
    FilterWidthError,
    ShapeError,
    as_filter2d,
    as_tensor2d,
    mac_count,
)


class KernelVariant(enum.Enum):
    NAIVE = "naive"
    IM2COL_GEMM = "im2col_gemm"
    SLIDE_GENERIC = "slide_generic"
    SLIDE_COMPOUND = "slide_compound"
    CUSTOM3 = "custom3"
    CUSTOM5 = "custom5"

    def __str__(self):
        return self.value


def compound_width(kw: int, vm: VectorModel) -> int:
    """Hardware vectors per compound vector: ceil((V + kw - 1) / V)."""
    return math.ceil((vm.lanes + kw - 1) / vm.lanes)


def counted_offsets(kw: int, vm: VectorModel) -> int:
    """Slide offsets 1..kw-1 that cost a shuffle (offset V is a register reuse)."""
    return sum(1 for j in range(1, kw) if j != vm.lanes)


def variant_applicable(variant: KernelVariant, kh: int, kw: int, vm: VectorModel) -> bool:
    if variant in (KernelVariant.NAIVE, KernelVariant.IM2COL_GEMM):
        return True
    if variant is KernelVariant.SLIDE_GENERIC:
        return kw <= vm.generic_max_kw
    if variant is KernelVariant.SLIDE_COMPOUND:
        return kw >= 2
    if variant is KernelVariant.CUSTOM3:
        return kh == 3 and kw == 3
    return kh == 5 and kw == 5


def applicable_variants(kh: int, kw: int, vm: VectorModel) -> list[KernelVariant]:
    return [v for v in KernelVariant if variant_applicable(v, kh, kw, vm)]


def select_kernel(kh: int, kw: int, vm: VectorModel) -> KernelVariant:
    """Pick the fastest slide variant for a filter shape.

    Size-specialized kernels win outright; otherwise the generic kernel
    serves widths up to V and the compound kernel everything wider. The
    width-V+1 case goes to compound, which measures faster despite being
    within the generic kernel's reach.
    """
    if kh < 1 or kw < 1:
        raise ShapeError("filter dims must be positive")
    if kh == 3 and kw == 3:
        return KernelVariant.CUSTOM3
    if kh == 5 and kw == 5:
        return KernelVariant.CUSTOM5
    if kw <= vm.lanes:
        return KernelVariant.SLIDE_GENERIC
    return KernelVariant.SLIDE_COMPOUND


# ---------------------------------------------------------------------------
# analytic counters (validated against the instrumented emulation in tests)

def analytic_counters(variant: KernelVariant, s: ConvShape, vm: VectorModel) -> CostCounters:
    c = CostCounters(macs=mac_count(s))
    if variant is KernelVariant.IM2COL_GEMM:
        c.im2col_elems = s.out_h * s.out_w * s.kh * s.kw
        return c
    if variant in (KernelVariant.NAIVE, KernelVariant.IM2COL_GEMM):
        return c
    nvec = math.ceil(s.out_w / vm.lanes) if s.out_w >= vm.lanes else 0
    if nvec == 0:
        return c  # pure scalar epilogue: no vector loads or slides
    if variant is KernelVariant.SLIDE_GENERIC:
        c.slides = s.out_h * s.kh * counted_offsets(s.kw, vm) * nvec
        c.loads = s.out_h * s.kh * nvec * (2 if s.kw > 1 else 1)
    elif variant is KernelVariant.SLIDE_COMPOUND:
        m = compound_width(s.kw, vm)
        c.slides = s.out_h * s.kh * nvec * m * (s.kw - 1)
        c.loads = s.out_h * s.kh * nvec * m
    else:  # custom 3/5: slid vectors built once per touched input row
        c.slides = s.in_h * counted_offsets(s.kw, vm) * nvec
        c.loads = 2 * s.in_h * nvec
    return c


# ---------------------------------------------------------------------------
# emulated kernels (simd / scalar backends, instrumented)

def _scalar_epilogue(x, f, out, s: ConvShape, col_lo: int, counters: CostCounters):
    f32 = np.float32
    for r in range(s.out_h):
        for c in range(col_lo, s.out_w):
            acc = f32(0.0)
            for j in range(s.kh):
                for i in range(s.kw):
                    acc = f32(acc + f32(f[j, i] * x[r + j, c + i]))
            out[r, c] = acc
    counters.macs += s.out_h * (s.out_w - col_lo) * s.kh * s.kw


def _conv2d_generic_emu(x, f, vm: VectorModel, counters: CostCounters) -> np.ndarray:
    s = ConvShape.of(x, f)
    v = vm.lanes
    out = np.zeros((s.out_h, s.out_w), dtype=np.float32)
    starts = vector_starts(s.out_w, vm)
    for r in range(s.out_h):
        for st, active in starts:
            acc = np.zeros(v, dtype=np.float32)
            for j in range(s.kh):
                row = x[r + j]
                a = load_vec(row, st, vm, counters)
                b = load_vec(row, st + v, vm, counters) if s.kw > 1 else a
                for i in range(s.kw):
                    madd(acc, f[j, i], slide(a, b, i, vm, counters), vm, counters, active)
            out[r, st : st + v] = acc
    if not starts:
        _scalar_epilogue(x, f, out, s, 0, counters)
    return out


def _conv2d_compound_emu(x, f, vm: VectorModel, counters: CostCounters) -> np.ndarray:
    s = ConvShape.of(x, f)
    v = vm.lanes
    m = compound_width(s.kw, vm)
    zero = np.zeros(v, dtype=np.float32)
    out = np.zeros((s.out_h, s.out_w), dtype=np.float32)
    starts = vector_starts(s.out_w, vm)
    for r in range(s.out_h):
        for st, active in starts:
            acc = np.zeros(v, dtype=np.float32)
            for j in range(s.kh):
                row = x[r + j]
                cur = [load_vec(row, st + t * v, vm, counters) for t in range(m)]
                for i in range(s.kw):
                    madd(acc, f[j, i], cur[0], vm, counters, active)
                    if i < s.kw - 1:
                        # shift the whole compound left one lane, carrying
                        # between adjacent hardware vectors
                        for t in range(m):
                            nxt = cur[t + 1] if t + 1 < m else zero
                            cur[t] = slide(cur[t], nxt, 1, vm, counters)
            out[r, st : st + v] = acc
    if not starts:
        _scalar_epilogue(x, f, out, s, 0, counters)
    return out


def _conv2d_custom_emu(x, f, vm: VectorModel, counters: CostCounters) -> np.ndarray:
    s = ConvShape.of(x, f)
    k = s.kw
    v = vm.lanes
    out = np.zeros((s.out_h, s.out_w), dtype=np.float32)
    starts = vector_starts(s.out_w, vm)
    for st, active in starts:
        acc = np.zeros((s.out_h, v), dtype=np.float32)
        for r_in in range(s.in_h):
            row = x[r_in]
            a = load_vec(row, st, vm, counters)
            b = load_vec(row, st + v, vm, counters)
            slid = [slide(a, b, i, vm, counters) for i in range(k)]
            for j in range(k):
                q = r_in - j
                if 0 <= q < s.out_h:
                    for i in range(k):
                        madd(acc[q], f[j, i], slid[i], vm, counters, active)
        out[:, st : st + v] = acc
    if not starts:
        _scalar_epilogue(x, f, out, s, 0, counters)
    return out


# ---------------------------------------------------------------------------
# public kernel entry points

def _dispatch(x, f, vm: VectorModel, emu, variant: KernelVariant) -> tuple[np.ndarray, CostCounters]:
    if vm.backend == "fast":
        counters = analytic_counters(variant, ConvShape.of(x, f), vm)
        return _accumulate_taps(x, f, np.float32), counters
    counters = CostCounters()
    return emu(x, f, vm, counters), counters


def conv1d_slide(x, f, vm: VectorModel) -> tuple[np.ndarray, CostCounters]:
    """Generic 1-D slide convolution; filter width at most V+1."""
    x = as_tensor2d(x)
    f = as_filter2d(f)
    if x.shape[0] != 1 or f.shape[0] != 1:
        raise ShapeError("conv1d_slide expects height-1 input and filter")
    if f.shape[1] > vm.generic_max_kw:
        raise FilterWidthError(
            f"filter width {f.shape[1]} exceeds the generic limit V+1={vm.generic_max_kw}; "
            "use conv2d_slide_compound"
        )
    ConvShape.of(x, f)
    return _dispatch(x, f, vm, _conv2d_generic_emu, KernelVariant.SLIDE_GENERIC)


def conv2d_slide_generic(x, f, vm: VectorModel) -> tuple[np.ndarray, CostCounters]:
    """Generic 2-D slide convolution: one slide per tap per output vector."""
    x = as_tensor2d(x)
    f = as_filter2d(f)
    if f.shape[1] > vm.generic_max_kw:
        raise FilterWidthError(
            f"filter width {f.shape[1]} exceeds the generic limit V+1={vm.generic_max_kw}; "
            "use conv2d_slide_compound"
        )
    ConvShape.of(x, f)
    return _dispatch(x, f, vm, _conv2d_generic_emu, KernelVariant.SLIDE_GENERIC)


def conv2d_slide_compound(x, f, vm: VectorModel) -> tuple[np.ndarray, CostCounters]:
    """Compound-vector 2-D slide convolution for any filter width >= 2."""
    x = as_tensor2d(x)
    f = as_filter2d(f)
    if f.shape[1] < 2:
        raise ShapeError("compound kernel requires filter width >= 2")
    ConvShape.of(x, f)
    return _dispatch(x, f, vm, _conv2d_compound_emu, KernelVariant.SLIDE_COMPOUND)


def conv2d_custom3(x, f, vm: VectorModel) -> tuple[np.ndarray, CostCounters]:
    """3x3-specialized kernel reusing each input row's slid vectors."""
    x = as_tensor2d(x)
    f = as_filter2d(f)
    if f.shape != (3, 3):
        raise FilterSizeError(f"custom3 requires a 3x3 filter, got {f.shape}")
    ConvShape.of(x, f)
    return _dispatch(x, f, vm, _conv2d_custom_emu, KernelVariant.CUSTOM3)


def conv2d_custom5(x, f, vm: VectorModel) -> tuple[np.ndarray, CostCounters]:
    """5x5-specialized kernel reusing each input row's slid vectors."""
    x = as_tensor2d(x)
    f = as_filter2d(f)
    if f.shape != (5, 5):
        raise FilterSizeError(f"custom5 requires a 5x5 filter, got {f.shape}")
    ConvShape.of(x, f)
    return _dispatch(x, f, vm, _conv2d_custom_emu, KernelVariant.CUSTOM5)


def run_variant(variant: KernelVariant, x, f, vm: VectorModel) -> tuple[np.ndarray, CostCounters]:
    """Run one kernel variant and return (output, per-invocation counters)."""
    x = as_tensor2d(x)
    f = as_filter2d(f)
    if not variant_applicable(variant, f.shape[0], f.shape[1], vm):
        raise ShapeError(f"variant {variant} not applicable to filter {f.shape} at V={vm.lanes}")
    if variant is KernelVariant.NAIVE:
        s = ConvShape.of(x, f)
        return _accumulate_taps(x, f, np.float32), CostCounters(macs=mac_count(s))
    if variant is KernelVariant.IM2COL_GEMM:
        counters = CostCounters()
        return gemm_mod.conv2d_im2col(x, f, counters), counters
    if variant is KernelVariant.SLIDE_GENERIC:
        return conv2d_slide_generic(x, f, vm)
    if variant is KernelVariant.SLIDE_COMPOUND:
        return conv2d_slide_compound(x, f, vm)
    if variant is KernelVariant.CUSTOM3:
        return conv2d_custom3(x, f, vm)
    return conv2d_custom5(x, f, vm)

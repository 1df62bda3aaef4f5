"""Sliding-window convolution kernels, an im2col+GEMM baseline, and a
single-core benchmark/verification harness."""

from .bench import (
    BenchConfig,
    BenchRecord,
    emit_csv,
    emit_plot_data,
    load_reference_series,
    run_benchmark,
)
from .gemm import bloat_ratio, conv2d_im2col, gemm, im2col_2d
from .kernels import (
    KernelVariant,
    applicable_variants,
    conv1d_slide,
    conv2d_custom3,
    conv2d_custom5,
    conv2d_slide_compound,
    conv2d_slide_generic,
    run_variant,
    select_kernel,
)
from .lanes import VectorModel, slide
from .pooling import sliding_window_max, sliding_window_sum
from .reference import conv1d_reference, conv2d_reference, oracle_conv2d
from .tensor import (
    ConvShape,
    CostCounters,
    FilterSizeError,
    FilterWidthError,
    ShapeError,
    mac_count,
)
from .verify import VerifyReport, verify_suite

__version__ = "0.1.0"

__all__ = [
    "BenchConfig", "BenchRecord", "ConvShape", "CostCounters",
    "FilterSizeError", "FilterWidthError", "KernelVariant", "ShapeError",
    "VectorModel", "VerifyReport", "applicable_variants", "bloat_ratio",
    "conv1d_reference", "conv1d_slide", "conv2d_custom3", "conv2d_custom5",
    "conv2d_im2col", "conv2d_reference", "conv2d_slide_compound",
    "conv2d_slide_generic", "emit_csv", "emit_plot_data", "gemm",
    "im2col_2d", "load_reference_series", "mac_count", "oracle_conv2d",
    "run_benchmark", "run_variant", "select_kernel", "slide",
    "sliding_window_max", "sliding_window_sum", "verify_suite",
]

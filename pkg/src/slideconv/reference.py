"""Reference convolutions and the double-precision oracle.

Semantics everywhere: "valid" cross-correlation, stride 1, no padding,
no filter flip. Taps are accumulated in ascending (row, col) order per
output element so every kernel in the package is comparable bit-for-bit.
"""

from __future__ import annotations

import numpy as np

from .tensor import ConvShape, ShapeError, as_filter2d, as_tensor2d


def _accumulate_taps(x: np.ndarray, f: np.ndarray, dtype) -> np.ndarray:
    s = ConvShape.of(x, f)
    x = x.astype(dtype, copy=False)
    acc = np.zeros((s.out_h, s.out_w), dtype=dtype)
    for j in range(s.kh):
        for i in range(s.kw):
            # elementwise multiply-then-add; no fused contraction
            acc += dtype(f[j, i]) * x[j : j + s.out_h, i : i + s.out_w]
    return acc


def conv2d_reference(x, f) -> np.ndarray:
    """Naive 2-D valid convolution in float32, tap order (j, i) ascending."""
    x = as_tensor2d(x)
    f = as_filter2d(f)
    return _accumulate_taps(x, f, np.float32)


def conv1d_reference(x, f) -> np.ndarray:
    """1-D valid convolution; input and filter must be single rows."""
    x = as_tensor2d(x)
    f = as_filter2d(f)
    if x.shape[0] != 1 or f.shape[0] != 1:
        raise ShapeError("conv1d_reference expects height-1 input and filter")
    return _accumulate_taps(x, f, np.float32)


def oracle_conv2d(x, f) -> np.ndarray:
    """Same formula evaluated entirely in float64; ground truth for all kernels."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    f = np.atleast_2d(np.asarray(f, dtype=np.float64))
    ConvShape.of(x, f)  # shape validation only
    return _accumulate_taps(x, f, np.float64)


def relative_error(got: np.ndarray, want: np.ndarray) -> float:
    """Max elementwise error relative to max(1, |want|)."""
    got = np.asarray(got, dtype=np.float64)
    want = np.asarray(want, dtype=np.float64)
    return float(np.max(np.abs(got - want) / np.maximum(1.0, np.abs(want)), initial=0.0))

"""The incumbent convolution path: im2col expansion plus a blocked GEMM.

im2col deliberately materializes the full column matrix so the memory
bloat being measured is actually exhibited. The GEMM updates C with a
K-outer (rank-1) step inside M/K cache blocks, which keeps per-element
accumulation in ascending-k order and therefore comparable against the
direct kernels at tight tolerances.
"""

from __future__ import annotations

import numpy as np

from .tensor import ConvShape, CostCounters, ShapeError, as_filter2d, as_tensor2d

# Block sizes chosen for ~L1/L2-sized float32 panels; fixed at import time.
BLOCK_M = 256
BLOCK_K = 256


def im2col_2d(x, kh: int, kw: int, counters: CostCounters | None = None) -> np.ndarray:
    """Expand each kh x kw input patch into one row of a (out_h*out_w, kh*kw) matrix."""
    x = as_tensor2d(x)
    s = ConvShape(x.shape[0], x.shape[1], kh, kw)
    try:
        cols = np.empty((s.out_h * s.out_w, kh * kw), dtype=np.float32)
    except MemoryError as e:
        raise MemoryError(
            f"im2col allocation of {s.out_h * s.out_w}x{kh * kw} floats failed"
        ) from e
    for j in range(kh):
        for i in range(kw):
            patch = x[j : j + s.out_h, i : i + s.out_w]
            cols[:, j * kw + i] = patch.reshape(-1)
    if counters is not None:
        counters.im2col_elems += cols.size
    return cols


def gemm(a, b, counters: CostCounters | None = None) -> np.ndarray:
    """Blocked float32 matrix product c[m,n] = sum_k a[m,k] * b[k,n]."""
    a = np.ascontiguousarray(np.asarray(a, dtype=np.float32))
    b = np.ascontiguousarray(np.asarray(b, dtype=np.float32))
    if a.ndim != 2 or b.ndim != 2:
        raise ShapeError("gemm expects 2-D matrices")
    m, k = a.shape
    k2, n = b.shape
    if k != k2:
        raise ShapeError(f"inner dimensions disagree: {a.shape} x {b.shape}")
    c = np.zeros((m, n), dtype=np.float32)
    for m0 in range(0, m, BLOCK_M):
        m1 = min(m0 + BLOCK_M, m)
        for k0 in range(0, k, BLOCK_K):
            k1 = min(k0 + BLOCK_K, k)
            for kk in range(k0, k1):
                c[m0:m1, :] += a[m0:m1, kk : kk + 1] * b[kk : kk + 1, :]
    if counters is not None:
        counters.macs += m * n * k
    return c


def conv2d_im2col(x, f, counters: CostCounters | None = None) -> np.ndarray:
    """Convolution as im2col followed by a matrix-vector GEMM."""
    x = as_tensor2d(x)
    f = as_filter2d(f)
    s = ConvShape.of(x, f)
    cols = im2col_2d(x, s.kh, s.kw, counters)
    out = gemm(cols, f.reshape(s.kh * s.kw, 1), counters)
    return out.reshape(s.out_h, s.out_w)


def bloat_ratio(shape: ConvShape) -> float:
    """Column-matrix elements over input elements; tends to kh*kw for large inputs."""
    return (shape.out_h * shape.out_w * shape.kh * shape.kw) / (shape.in_h * shape.in_w)

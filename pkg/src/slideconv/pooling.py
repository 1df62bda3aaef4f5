"""Sliding-window sum and max pooling via logarithmic doubling.

Window reductions of width k are assembled from partial reductions of
power-of-two widths: each doubling stage combines a partial with a slid
copy of itself, and the final width is reached by combining the powers in
k's binary decomposition (sum) or one overlapping combine (max, which is
idempotent). Stage counts are returned alongside the result.
"""

from __future__ import annotations

import numpy as np

from .lanes import VectorModel
from .tensor import ShapeError


def _as_signal(x):
    a = np.asarray(x, dtype=np.float32)
    squeeze = a.ndim == 1
    if not squeeze:
        if a.ndim != 2 or a.shape[0] != 1:
            raise ShapeError("pooling expects a 1-D signal or a height-1 row tensor")
        a = a[0]
    return a, squeeze


def sliding_window_sum(x, k: int, vm: VectorModel | None = None) -> tuple[np.ndarray, int]:
    """Window sums y[i] = sum(x[i:i+k]) in <= 2*ceil(log2 k) slide+add stages."""
    a, squeeze = _as_signal(x)
    n = a.shape[0]
    if not 1 <= k <= n:
        raise ShapeError(f"window {k} out of range for length {n}")
    stages = 0
    partial = {1: a}
    w = 1
    while 2 * w <= k:
        s = partial[w]
        partial[2 * w] = s[: s.shape[0] - w] + s[w:]
        stages += 1
        w *= 2
    # combine remaining bits, largest power first: S_{a+b}(i) = S_a(i) + S_b(i+a)
    acc, width = partial[w], w
    bit = w >> 1
    while bit:
        if k & bit:
            out_len = n - (width + bit) + 1
            acc = acc[:out_len] + partial[bit][width : width + out_len]
            width += bit
            stages += 1
        bit >>= 1
    y = acc[: n - k + 1]
    return (y if squeeze else y.reshape(1, -1)), stages


def sliding_window_max(x, k: int, vm: VectorModel | None = None) -> tuple[np.ndarray, int]:
    """Window maxima, exact, in <= ceil(log2 k) + 1 stages.

    Idempotence lets the final stage overlap: M_k(i) = max(M_p(i), M_p(i+k-p))
    with p the largest power of two <= k.
    """
    a, squeeze = _as_signal(x)
    n = a.shape[0]
    if not 1 <= k <= n:
        raise ShapeError(f"window {k} out of range for length {n}")
    stages = 0
    cur = a
    w = 1
    while 2 * w <= k:
        cur = np.maximum(cur[: cur.shape[0] - w], cur[w:])
        stages += 1
        w *= 2
    if w < k:
        out_len = n - k + 1
        cur = np.maximum(cur[:out_len], cur[k - w : k - w + out_len])
        stages += 1
    y = cur[: n - k + 1]
    return (y if squeeze else y.reshape(1, -1)), stages

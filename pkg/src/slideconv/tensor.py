"""Shared tensor/filter validation, shapes and cost accounting.

All kernels operate on plain numpy arrays: a 2-D float32 array is a tensor
(height 1 means a 1-D signal), and filters are 2-D float32 arrays of taps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class ShapeError(ValueError):
    """An input, filter or matrix has an incompatible shape."""


class FilterWidthError(ShapeError):
    """Filter is too wide for the generic kernel; use the compound kernel."""


class FilterSizeError(ShapeError):
    """A size-specialized kernel was called with the wrong filter size."""


def as_tensor2d(x) -> np.ndarray:
    """Coerce ``x`` to a 2-D float32 array; 1-D input becomes a single row."""
    a = np.asarray(x, dtype=np.float32)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2:
        raise ShapeError(f"expected a 1-D or 2-D array, got ndim={a.ndim}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ShapeError(f"tensor dims must be positive, got {a.shape}")
    return np.ascontiguousarray(a)


def as_filter2d(f) -> np.ndarray:
    a = np.asarray(f, dtype=np.float32)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2:
        raise ShapeError(f"expected a 1-D or 2-D filter, got ndim={a.ndim}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ShapeError(f"filter dims must be positive, got {a.shape}")
    return np.ascontiguousarray(a)


@dataclass(frozen=True)
class ConvShape:
    """Valid-convolution geometry: output dim = input dim - filter dim + 1."""

    in_h: int
    in_w: int
    kh: int
    kw: int

    def __post_init__(self):
        if self.kh < 1 or self.kw < 1 or self.in_h < 1 or self.in_w < 1:
            raise ShapeError(f"dims must be positive: {self}")
        if self.kh > self.in_h or self.kw > self.in_w:
            raise ShapeError(
                f"filter {self.kh}x{self.kw} exceeds input {self.in_h}x{self.in_w}"
            )

    @property
    def out_h(self) -> int:
        return self.in_h - self.kh + 1

    @property
    def out_w(self) -> int:
        return self.in_w - self.kw + 1

    @classmethod
    def of(cls, x: np.ndarray, f: np.ndarray) -> "ConvShape":
        return cls(x.shape[0], x.shape[1], f.shape[0], f.shape[1])


@dataclass
class CostCounters:
    """Exact, deterministic operation counts for one kernel invocation.

    macs counts useful multiply-accumulates only (1 MAC = 2 FLOPs);
    slides counts shuffle micro-ops, with offsets 0 and V free;
    im2col_elems counts elements written by im2col (0 off the GEMM path).
    """

    macs: int = 0
    slides: int = 0
    loads: int = 0
    im2col_elems: int = 0

    def merge(self, other: "CostCounters") -> None:
        self.macs += other.macs
        self.slides += other.slides
        self.loads += other.loads
        self.im2col_elems += other.im2col_elems


def mac_count(shape: ConvShape) -> int:
    """Multiply-accumulates any direct convolution of this shape performs."""
    return shape.out_h * shape.out_w * shape.kh * shape.kw

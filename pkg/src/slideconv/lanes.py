"""Portable lane-width abstraction the slide kernels are written against.

A VectorModel fixes the hardware vector width V and picks one of three
backends:

* ``fast``   - whole-array numpy realization with analytically computed
               counters; the default, and the one the benchmark times.
* ``simd``   - lane-granular numpy emulation of V-lane vectors with fully
               instrumented counters (stands in for the SIMD build).
* ``scalar`` - the same emulation with per-lane scalar arithmetic (stands
               in for the scalar build).

All backends apply taps per output element in the same float32 order with
no fused contraction, so their outputs are bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensor import CostCounters

VALID_LANES = (4, 8, 16, 32)
BACKENDS = ("fast", "simd", "scalar")


@dataclass(frozen=True)
class VectorModel:
    lanes: int = 16
    backend: str = "fast"

    def __post_init__(self):
        if self.lanes not in VALID_LANES:
            raise ValueError(f"lanes must be one of {VALID_LANES}, got {self.lanes}")
        if self.backend not in BACKENDS:
            raise ValueError(f"backend must be one of {BACKENDS}, got {self.backend}")

    @property
    def generic_max_kw(self) -> int:
        # widest filter the generic kernel serves: slide offsets go up to V
        return self.lanes + 1


def load_vec(row: np.ndarray, start: int, vm: VectorModel,
             counters: CostCounters | None = None) -> np.ndarray:
    """Load V lanes starting at ``start``, zero-padding past the row end."""
    v = vm.lanes
    out = np.zeros(v, dtype=np.float32)
    avail = min(v, max(0, row.shape[0] - start))
    if avail > 0:
        out[:avail] = row[start : start + avail]
    if counters is not None:
        counters.loads += 1
    return out


def slide(a: np.ndarray, b: np.ndarray, offset: int, vm: VectorModel,
          counters: CostCounters | None = None) -> np.ndarray:
    """Lanes offset..offset+V of the concatenation a||b.

    Offsets 0 and V are register reuses and cost nothing; every other
    offset counts as one shuffle.
    """
    v = vm.lanes
    if not 0 <= offset <= v:
        raise ValueError(f"slide offset must be in [0, {v}], got {offset}")
    if offset == 0:
        return a
    if offset == v:
        return b
    if counters is not None:
        counters.slides += 1
    if vm.backend == "scalar":
        out = np.empty(v, dtype=np.float32)
        for lane in range(v):
            src = offset + lane
            out[lane] = a[src] if src < v else b[src - v]
        return out
    return np.concatenate((a[offset:], b[: offset]))


def madd(acc: np.ndarray, tap: np.float32, vec: np.ndarray, vm: VectorModel,
         counters: CostCounters | None = None, active: int | None = None) -> None:
    """acc += tap * vec in place, multiply then add (no fusion).

    ``active`` is how many lanes hold useful outputs; overlapped tail
    vectors recompute some lanes, which are excluded from the MAC count.
    """
    if counters is not None:
        counters.macs += vm.lanes if active is None else active
    if vm.backend == "scalar":
        for lane in range(vm.lanes):
            acc[lane] = np.float32(acc[lane] + np.float32(tap * vec[lane]))
    else:
        acc += tap * vec


def vector_starts(out_len: int, vm: VectorModel) -> list[tuple[int, int]]:
    """(start, active_lanes) pairs covering out_len outputs with full vectors.

    The last partial vector is shifted back to start at out_len - V so every
    vector is full; outputs shorter than V get no vector positions at all
    (the scalar epilogue serves them).
    """
    v = vm.lanes
    if out_len < v:
        return []
    starts = [(s, v) for s in range(0, out_len - v + 1, v)]
    rem = out_len - (starts[-1][0] + v)
    if rem > 0:
        starts.append((out_len - v, rem))
    return starts

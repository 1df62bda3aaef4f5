import math

import numpy as np
import pytest

from slideconv import ShapeError, sliding_window_max, sliding_window_sum
from slideconv.reference import relative_error


def direct_sums(x, k):
    x64 = np.asarray(x, dtype=np.float64)
    return np.array([x64[i : i + k].sum() for i in range(len(x64) - k + 1)])


def test_sum_basic():
    y, stages = sliding_window_sum([1, 2, 3, 4, 5], 3)
    assert y.tolist() == [6, 9, 12]
    assert stages <= 4


def test_sum_k1_identity_zero_stages():
    x = np.arange(8, dtype=np.float32)
    y, stages = sliding_window_sum(x, 1)
    assert np.array_equal(y, x)
    assert stages == 0


def test_sum_4096_k13_stage_budget():
    rng = np.random.default_rng(13)
    x = rng.uniform(-1, 1, 4096).astype(np.float32)
    y, stages = sliding_window_sum(x, 13)
    assert relative_error(y, direct_sums(x, 13)) < 1e-5
    assert stages <= 8


@pytest.mark.parametrize("k", [1, 2, 3, 4, 7, 15, 16, 31, 33, 64])
def test_sum_stage_bound_across_widths(k):
    rng = np.random.default_rng(k)
    x = rng.uniform(-1, 1, 300).astype(np.float32)
    y, stages = sliding_window_sum(x, k)
    assert relative_error(y, direct_sums(x, k)) < 1e-5
    assert stages <= 2 * math.ceil(math.log2(max(k, 2)))


def test_max_basic():
    y, _ = sliding_window_max([3, 1, 4, 1, 5], 3)
    assert y.tolist() == [4, 4, 5]
    y, _ = sliding_window_max([3, 1, 4, 1, 5], 1)
    assert y.tolist() == [3, 1, 4, 1, 5]


@pytest.mark.parametrize("k", [2, 3, 7, 8, 20, 64])
def test_max_exact_with_stage_budget(k):
    rng = np.random.default_rng(100 + k)
    x = rng.uniform(-1, 1, 4096).astype(np.float32)
    y, stages = sliding_window_max(x, k)
    direct = np.array([x[i : i + k].max() for i in range(len(x) - k + 1)], dtype=np.float32)
    assert np.array_equal(y, direct)
    assert stages <= math.ceil(math.log2(k)) + 1


def test_window_out_of_range():
    with pytest.raises(ShapeError):
        sliding_window_sum([1.0, 2.0], 3)
    with pytest.raises(ShapeError):
        sliding_window_max([1.0, 2.0], 0)


def test_row_tensor_shape_preserved():
    x = np.arange(10, dtype=np.float32).reshape(1, 10)
    y, _ = sliding_window_sum(x, 4)
    assert y.shape == (1, 7)

"""Pure-Python versions of the compiled kernels (used when the extension is unavailable)."""
from __future__ import annotations

from bisect import bisect_left, bisect_right

import numpy as np


def lis_length(values, weak: bool = False) -> int:
    """Length of the longest increasing (``weak``: non-decreasing) subsequence."""
    find = bisect_right if weak else bisect_left
    tails: list[float] = []
    for x in np.asarray(values, dtype=np.float64).tolist():
        i = find(tails, x)
        if i == len(tails):
            tails.append(x)
        else:
            tails[i] = x
    return len(tails)


def lis_segments(values, offsets, weak: bool = False) -> np.ndarray:
    """LIS of each segment ``values[offsets[k]:offsets[k + 1]]``."""
    v = np.asarray(values, dtype=np.float64)
    off = np.asarray(offsets, dtype=np.int64)
    return np.array([lis_length(v[off[k]:off[k + 1]], weak) for k in range(len(off) - 1)], dtype=np.int64)


def last_passage_batch(weights) -> np.ndarray:
    """``L(n, n)`` for each matrix of an ``(m, n + 1, n + 1)`` integer stack."""
    x = np.asarray(weights, dtype=np.int64)
    m, r, c = x.shape
    if r == 0 or c == 0:
        return np.zeros(m, dtype=np.int64)
    # sweep anti-diagonals row by row, vectorized over the batch
    row = np.zeros((m, c), dtype=np.int64)
    for i in range(r):
        left = np.zeros(m, dtype=np.int64)
        for j in range(c):
            left = np.maximum(left, row[:, j]) + x[:, i, j]
            row[:, j] = left
    return row[:, -1].copy()


def last_passage(weights) -> int:
    """``L(n, n)`` of one matrix by ``L(i, j) = x(i, j) + max(L(i - 1, j), L(i, j - 1))``."""
    w = np.asarray(weights, dtype=np.int64)
    if w.size == 0:
        return 0
    return int(last_passage_batch(w[None, :, :])[0])

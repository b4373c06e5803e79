"""Compiled hot loops for the Monte Carlo drivers.

Same signatures and results as :mod:`kpzlab._kernels_py`.
"""
import numpy as np

from libc.stdlib cimport malloc, free


cdef Py_ssize_t _lis(const double[:] v, Py_ssize_t start, Py_ssize_t stop, bint weak, double *tails) nogil:
    cdef Py_ssize_t n = 0, lo, hi, mid, i
    cdef double x
    for i in range(start, stop):
        x = v[i]
        lo = 0
        hi = n
        if weak:
            while lo < hi:
                mid = (lo + hi) >> 1
                if tails[mid] <= x:
                    lo = mid + 1
                else:
                    hi = mid
        else:
            while lo < hi:
                mid = (lo + hi) >> 1
                if tails[mid] < x:
                    lo = mid + 1
                else:
                    hi = mid
        tails[lo] = x
        if lo == n:
            n += 1
    return n


def lis_length(values, bint weak=False):
    """Length of the longest increasing (``weak``: non-decreasing) subsequence."""
    cdef const double[:] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef Py_ssize_t n = v.shape[0]
    if n == 0:
        return 0
    cdef double *tails = <double *> malloc(n * sizeof(double))
    if tails == NULL:
        raise MemoryError()
    try:
        return int(_lis(v, 0, n, weak, tails))
    finally:
        free(tails)


def lis_segments(values, offsets, bint weak=False):
    """LIS of each segment ``values[offsets[k]:offsets[k + 1]]``."""
    cdef const double[:] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef const long long[:] off = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef Py_ssize_t m = off.shape[0] - 1, k, longest = 1
    out = np.zeros(max(m, 0), dtype=np.int64)
    cdef long long[:] res = out
    for k in range(m):
        if off[k + 1] - off[k] > longest:
            longest = off[k + 1] - off[k]
    cdef double *tails = <double *> malloc(longest * sizeof(double))
    if tails == NULL:
        raise MemoryError()
    try:
        with nogil:
            for k in range(m):
                res[k] = _lis(v, off[k], off[k + 1], weak, tails)
    finally:
        free(tails)
    return out


def last_passage_batch(weights):
    """``L(n, n)`` for each matrix of an ``(m, n + 1, n + 1)`` integer stack."""
    cdef const long long[:, :, :] x = np.ascontiguousarray(weights, dtype=np.int64)
    cdef Py_ssize_t m = x.shape[0], r = x.shape[1], c = x.shape[2], k, i, j
    out = np.zeros(m, dtype=np.int64)
    cdef long long[:] res = out
    row_buf = np.zeros(c, dtype=np.int64)
    cdef long long[:] row = row_buf
    cdef long long left
    with nogil:
        for k in range(m):
            for j in range(c):
                row[j] = 0
            for i in range(r):
                left = 0
                for j in range(c):
                    if row[j] > left:
                        left = row[j]
                    left = left + x[k, i, j]
                    row[j] = left
            res[k] = row[c - 1] if c > 0 else 0
    return out


def last_passage(weights):
    """``L(n, n)`` of one matrix by ``L(i, j) = x(i, j) + max(L(i - 1, j), L(i, j - 1))``."""
    w = np.asarray(weights, dtype=np.int64)
    if w.size == 0:
        return 0
    return int(last_passage_batch(w[None, :, :])[0])

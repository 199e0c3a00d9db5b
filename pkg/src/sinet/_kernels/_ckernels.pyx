# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled mining kernels; semantics mirror ``_pykernels`` exactly."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

ALG_SUM = 0
ALG_MOMENTS1 = 1
ALG_MOMENTS2 = 2

cdef int _ALG_SUM = 0
cdef int _ALG_MOMENTS1 = 1
cdef int _ALG_MOMENTS2 = 2


def conditional_paths(items, parents, heads):
    cdef cnp.int32_t[::1] items_v = np.ascontiguousarray(items, dtype=np.int32)
    cdef cnp.int32_t[::1] parents_v = np.ascontiguousarray(parents, dtype=np.int32)
    cdef cnp.int32_t[::1] heads_v = np.ascontiguousarray(heads, dtype=np.int32)
    cdef Py_ssize_t n_heads = heads_v.shape[0]

    cdef cnp.ndarray offsets = np.empty(n_heads + 1, dtype=np.int64)
    cdef cnp.int64_t[::1] offsets_v = offsets
    cdef Py_ssize_t i
    cdef int p
    cdef Py_ssize_t total = 0

    offsets_v[0] = 0
    for i in range(n_heads):
        p = parents_v[heads_v[i]]
        while p > 0:
            total += 1
            p = parents_v[p]
        offsets_v[i + 1] = total

    cdef cnp.ndarray buf = np.empty(total, dtype=np.int32)
    cdef cnp.int32_t[::1] buf_v = buf
    cdef Py_ssize_t pos
    for i in range(n_heads):
        pos = offsets_v[i + 1]
        p = parents_v[heads_v[i]]
        while p > 0:
            pos -= 1
            buf_v[pos] = items_v[p]
            p = parents_v[p]
    return buf, offsets


cdef inline void _merge_into(double* acc, const double* row, int algebra) nogil:
    cdef double na, nb, n, delta, dx, dy
    if algebra == _ALG_SUM:
        return  # handled outside (width varies)
    nb = row[0]
    if nb == 0.0:
        return
    na = acc[0]
    if na == 0.0:
        if algebra == _ALG_MOMENTS1:
            acc[0] = row[0]; acc[1] = row[1]; acc[2] = row[2]
        else:
            acc[0] = row[0]; acc[1] = row[1]; acc[2] = row[2]
            acc[3] = row[3]; acc[4] = row[4]; acc[5] = row[5]
        return
    n = na + nb
    if algebra == _ALG_MOMENTS1:
        delta = row[1] - acc[1]
        acc[1] += delta * nb / n
        acc[2] += row[2] + delta * delta * na * nb / n
    else:
        dx = row[1] - acc[1]
        dy = row[2] - acc[2]
        acc[1] += dx * nb / n
        acc[2] += dy * nb / n
        acc[3] += row[3] + dx * dx * na * nb / n
        acc[4] += row[4] + dy * dy * na * nb / n
        acc[5] += row[5] + dx * dy * na * nb / n
    acc[0] = n


def merge_pair(acc, row, algebra):
    cdef cnp.float64_t[::1] acc_v = acc
    cdef cnp.float64_t[::1] row_v = np.ascontiguousarray(row, dtype=np.float64)
    cdef int alg = algebra
    cdef Py_ssize_t j
    if alg == _ALG_SUM:
        for j in range(acc_v.shape[0]):
            acc_v[j] += row_v[j]
    else:
        _merge_into(&acc_v[0], &row_v[0], alg)
    return acc


def merge_rows(payload, idx, algebra):
    cdef cnp.float64_t[:, ::1] payload_v = payload
    cdef int alg = algebra
    cdef Py_ssize_t width = payload_v.shape[1]
    cdef cnp.ndarray out = np.zeros(width, dtype=np.float64)
    cdef cnp.float64_t[::1] out_v = out
    cdef cnp.int32_t[::1] idx_v
    cdef Py_ssize_t i, j, k, count

    if idx is None:
        count = payload_v.shape[0]
        for i in range(count):
            if alg == _ALG_SUM:
                for j in range(width):
                    out_v[j] += payload_v[i, j]
            else:
                _merge_into(&out_v[0], &payload_v[i, 0], alg)
    else:
        idx_v = np.ascontiguousarray(idx, dtype=np.int32)
        count = idx_v.shape[0]
        for i in range(count):
            k = idx_v[i]
            if alg == _ALG_SUM:
                for j in range(width):
                    out_v[j] += payload_v[k, j]
            else:
                _merge_into(&out_v[0], &payload_v[k, 0], alg)
    return out


def scatter_merge(dest, dest_idx, rows, row_idx, algebra):
    cdef cnp.float64_t[:, ::1] dest_v = dest
    cdef cnp.float64_t[:, ::1] rows_v = rows
    cdef cnp.int32_t[::1] dest_idx_v = np.ascontiguousarray(dest_idx, dtype=np.int32)
    cdef cnp.int32_t[::1] row_idx_v = np.ascontiguousarray(row_idx, dtype=np.int32)
    cdef int alg = algebra
    cdef Py_ssize_t width = dest_v.shape[1]
    cdef Py_ssize_t k, j, d, r
    for k in range(dest_idx_v.shape[0]):
        d = dest_idx_v[k]
        r = row_idx_v[k]
        if alg == _ALG_SUM:
            for j in range(width):
                dest_v[d, j] += rows_v[r, j]
        else:
            _merge_into(&dest_v[d, 0], &rows_v[r, 0], alg)
    return dest

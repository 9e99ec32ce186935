# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled transfer-table kernel; same contract as evinet._kernels_py."""

import numpy as np


def backend_name():
    return "cython"


def fill_rows(int n, pre_place, post_place, rmasks):
    """rows[k][x] = image mask of subset mask x under receptivity mask rmasks[k]."""
    cdef Py_ssize_t nrows = len(rmasks)
    cdef Py_ssize_t size = (<Py_ssize_t> 1) << n
    rows_arr = np.empty((nrows, size), dtype=np.uint32)
    cdef unsigned int[:, ::1] rows = rows_arr
    cdef int[::1] pre = np.ascontiguousarray(pre_place, dtype=np.intc)
    cdef int[::1] post = np.ascontiguousarray(post_place, dtype=np.intc)
    cdef unsigned long long[::1] rs = np.ascontiguousarray(rmasks, dtype=np.uint64)
    cdef int m = pre.shape[0]
    cdef unsigned int succ[32]
    cdef unsigned long long rmask
    cdef unsigned int bit
    cdef Py_ssize_t k, x, span
    cdef int i, t

    if n < 1 or n > 31:
        raise ValueError("place count out of range for the compiled kernel")

    with nogil:
        for k in range(nrows):
            rmask = rs[k]
            for i in range(n):
                succ[i] = (<unsigned int> 1) << i
            for t in range(m):
                if (rmask >> t) & 1:
                    succ[pre[t]] = (<unsigned int> 1) << post[t]
            rows[k, 0] = 0
            span = 1
            for i in range(n):
                bit = succ[i]
                for x in range(span):
                    rows[k, span + x] = rows[k, x] | bit
                span <<= 1
    return rows_arr

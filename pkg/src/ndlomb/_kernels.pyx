# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-frequency trigonometric sums.

For every frequency vector w the kernels return, in this column order,

    sum cos^2(w.t), sum sin^2(w.t), sum cos(w.t) sin(w.t),
    sum y cos(w.t), sum y sin(w.t)

Each frequency is reduced by one thread in a fixed order (blocks of
BLOCK samples, then the block partials), so results do not depend on the
thread count.
"""

import numpy as np
cimport numpy as cnp
from cython.parallel cimport parallel, prange
from libc.math cimport sin, cos
from libc.stdlib cimport malloc, free

cnp.import_array()

DEF BLOCK = 256


def direct_sums(const double[:, ::1] coords, const double[::1] values,
                const double[:, ::1] omegas, int threads=1):
    cdef Py_ssize_t n_samples = coords.shape[0]
    cdef Py_ssize_t dims = coords.shape[1]
    cdef Py_ssize_t n_freq = omegas.shape[0]
    out_arr = np.zeros((n_freq, 5), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t f, n, d, start, stop
    cdef double theta, c, s, y
    cdef double p0, p1, p2, p3, p4, t0, t1, t2, t3, t4
    if threads < 1:
        threads = 1
    for f in prange(n_freq, nogil=True, schedule="static", num_threads=threads):
        t0 = 0.0
        t1 = 0.0
        t2 = 0.0
        t3 = 0.0
        t4 = 0.0
        start = 0
        while start < n_samples:
            stop = start + BLOCK
            if stop > n_samples:
                stop = n_samples
            p0 = 0.0
            p1 = 0.0
            p2 = 0.0
            p3 = 0.0
            p4 = 0.0
            for n in range(start, stop):
                theta = omegas[f, 0] * coords[n, 0]
                for d in range(1, dims):
                    theta = theta + omegas[f, d] * coords[n, d]
                c = cos(theta)
                s = sin(theta)
                y = values[n]
                p0 = p0 + c * c
                p1 = p1 + s * s
                p2 = p2 + c * s
                p3 = p3 + y * c
                p4 = p4 + y * s
            t0 = t0 + p0
            t1 = t1 + p1
            t2 = t2 + p2
            t3 = t3 + p3
            t4 = t4 + p4
            start = stop
        out[f, 0] = t0
        out[f, 1] = t1
        out[f, 2] = t2
        out[f, 3] = t3
        out[f, 4] = t4
    return out_arr


def product_sums(const double[:, ::1] tab_cos, const double[:, ::1] tab_sin,
                 const Py_ssize_t[::1] offsets, const Py_ssize_t[::1] sizes,
                 const double[::1] values, int threads=1):
    """Same sums on a Cartesian-product grid from per-axis phase tables.

    Row ``offsets[d] + j`` of the tables holds cos/sin of the j-th angular
    frequency of axis d times the d-th coordinate of every sample. The
    flattened frequency index runs with the first axis slowest.
    """
    cdef Py_ssize_t n_samples = tab_cos.shape[1]
    cdef Py_ssize_t dims = sizes.shape[0]
    cdef Py_ssize_t n_freq = 1
    cdef Py_ssize_t d
    for d in range(dims):
        n_freq *= sizes[d]
    out_arr = np.zeros((n_freq, 5), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t f, n, rem, start, stop, row
    cdef double c, s, cd, sd, tmp, y
    cdef double p0, p1, p2, p3, p4, t0, t1, t2, t3, t4
    cdef Py_ssize_t* rows
    if threads < 1:
        threads = 1
    with nogil, parallel(num_threads=threads):
        rows = <Py_ssize_t*> malloc(dims * sizeof(Py_ssize_t))
        for f in prange(n_freq, schedule="static"):
            rem = f
            for d in range(dims - 1, -1, -1):
                rows[d] = offsets[d] + rem % sizes[d]
                rem = rem // sizes[d]
            t0 = 0.0
            t1 = 0.0
            t2 = 0.0
            t3 = 0.0
            t4 = 0.0
            start = 0
            while start < n_samples:
                stop = start + BLOCK
                if stop > n_samples:
                    stop = n_samples
                p0 = 0.0
                p1 = 0.0
                p2 = 0.0
                p3 = 0.0
                p4 = 0.0
                for n in range(start, stop):
                    row = rows[0]
                    c = tab_cos[row, n]
                    s = tab_sin[row, n]
                    for d in range(1, dims):
                        row = rows[d]
                        cd = tab_cos[row, n]
                        sd = tab_sin[row, n]
                        tmp = c * cd - s * sd
                        s = s * cd + c * sd
                        c = tmp
                    y = values[n]
                    p0 = p0 + c * c
                    p1 = p1 + s * s
                    p2 = p2 + c * s
                    p3 = p3 + y * c
                    p4 = p4 + y * s
                t0 = t0 + p0
                t1 = t1 + p1
                t2 = t2 + p2
                t3 = t3 + p3
                t4 = t4 + p4
                start = stop
            out[f, 0] = t0
            out[f, 1] = t1
            out[f, 2] = t2
            out[f, 3] = t3
            out[f, 4] = t4
        free(rows)
    return out_arr

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled recurrence kernels; see ``_pykernels`` for the reference versions."""
import numpy as np

from libc.math cimport fabs, log, sqrt, M_PI

cdef double _BIG = 1e150
cdef double _LOG_BIG = log(1e150)


def laguerre_rows(ks, double a, x):
    cdef long[::1] kv = np.ascontiguousarray(ks, dtype=np.int64)
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t nk = kv.shape[0], nx = xv.shape[0]
    out_m_arr = np.empty((nk, nx))
    out_l_arr = np.zeros((nk, nx))
    cdef double[:, ::1] out_m = out_m_arr
    cdef double[:, ::1] out_l = out_l_arr
    if nk == 0:
        return out_m_arr, out_l_arr
    # recurrence outer, points inner: every store is contiguous
    cdef double[::1] prev = np.zeros(nx)
    cdef double[::1] cur = np.ones(nx)
    cdef double[::1] logs = np.zeros(nx)
    cdef long kmax = kv[nk - 1]
    cdef Py_ssize_t i, row = 0
    cdef long j
    cdef double nxt, c1, c2, d
    for j in range(kmax + 1):
        while row < nk and kv[row] == j:
            out_m[row, :] = cur
            out_l[row, :] = logs
            row += 1
        if j == kmax:
            break
        c1 = 2 * j + 1 + a
        c2 = j + a
        d = j + 1
        for i in range(nx):
            nxt = ((c1 - xv[i]) * cur[i] - c2 * prev[i]) / d
            prev[i] = cur[i]
            cur[i] = nxt
            if fabs(nxt) > _BIG:
                cur[i] = nxt / _BIG
                prev[i] /= _BIG
                logs[i] += _LOG_BIG
    return out_m_arr, out_l_arr


def hermite_fn_rows(long kmax, z):
    z = np.ascontiguousarray(z, dtype=np.complex128)
    cdef double[::1] zr = np.ascontiguousarray(z.real)
    cdef double[::1] zi = np.ascontiguousarray(z.imag)
    cdef Py_ssize_t nz = zr.shape[0], i
    out_arr = np.empty((kmax + 1, nz), dtype=np.complex128)
    out_arr[0] = M_PI ** -0.25 * np.exp(-0.5 * z * z)
    # view the complex rows as interleaved (re, im) doubles
    cdef double[:, ::1] out = out_arr.view(np.float64)
    cdef long k
    cdef double s1, s2, ar, ai
    if kmax >= 1:
        s1 = sqrt(2.0)
        for i in range(nz):
            ar = out[0, 2 * i]
            ai = out[0, 2 * i + 1]
            out[1, 2 * i] = s1 * (zr[i] * ar - zi[i] * ai)
            out[1, 2 * i + 1] = s1 * (zr[i] * ai + zi[i] * ar)
    for k in range(1, kmax):
        s1 = sqrt(2.0 / (k + 1))
        s2 = sqrt(k / (k + 1.0))
        for i in range(nz):
            ar = out[k, 2 * i]
            ai = out[k, 2 * i + 1]
            out[k + 1, 2 * i] = s1 * (zr[i] * ar - zi[i] * ai) - s2 * out[k - 1, 2 * i]
            out[k + 1, 2 * i + 1] = s1 * (zr[i] * ai + zi[i] * ar) - s2 * out[k - 1, 2 * i + 1]
    return out_arr


def christoffel_log(diag, offdiag, double mu0, x):
    cdef double[::1] dv = np.ascontiguousarray(diag, dtype=np.float64)
    cdef double[::1] ov = np.ascontiguousarray(offdiag, dtype=np.float64)
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t m = dv.shape[0], nx = xv.shape[0], i, j
    res_arr = np.empty(nx)
    cdef double[::1] res = res_arr
    cdef double prev, cur, nxt, acc, logs, xi, p0 = 1.0 / sqrt(mu0)
    for i in range(nx):
        xi = xv[i]
        prev = 0.0
        cur = p0
        logs = 0.0
        acc = cur * cur
        for j in range(m - 1):
            if j > 0:
                nxt = ((xi - dv[j]) * cur - ov[j - 1] * prev) / ov[j]
            else:
                nxt = (xi - dv[j]) * cur / ov[j]
            prev = cur
            cur = nxt
            acc += cur * cur
            if fabs(cur) > _BIG:
                cur /= _BIG
                prev /= _BIG
                acc /= _BIG * _BIG
                logs += _LOG_BIG
        res[i] = log(acc) + 2.0 * logs
    return res_arr

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled batch kernels. Mirrors :mod:`qorbit._kernels_py` exactly."""

import numpy as np
from libc.math cimport fabs, sqrt

BACKEND = "cython"


def power_sums(double[:, ::1] x, int kmax):
    cdef Py_ssize_t n = x.shape[0], d = x.shape[1]
    cdef Py_ssize_t s, i, k
    cdef double p, acc
    out_arr = np.zeros((n, kmax), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    for s in range(n):
        for i in range(d):
            p = 1.0
            for k in range(kmax):
                p *= x[s, i]
                out[s, k] += p
    return out_arr


def elementary_from_power_sums(double[:, ::1] t):
    cdef Py_ssize_t n = t.shape[0], m = t.shape[1]
    cdef Py_ssize_t s, k, i
    cdef double acc, sign
    out_arr = np.empty((n, m), dtype=np.float64)
    cdef double[:, ::1] e = out_arr
    for s in range(n):
        for k in range(1, m + 1):
            acc = 0.0
            sign = 1.0
            for i in range(1, k + 1):
                if i == k:
                    acc += sign * t[s, i - 1]
                else:
                    acc += sign * e[s, k - i - 1] * t[s, i - 1]
                sign = -sign
            e[s, k - 1] = acc / k
    return out_arr


def extend_power_sums(double[:, ::1] t, double[:, ::1] e, int kmax):
    cdef Py_ssize_t n = t.shape[0], d = t.shape[1]
    cdef Py_ssize_t s, k, i, j
    cdef double acc, sign, tj
    out_arr = np.empty((n, kmax), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    for s in range(n):
        for k in range(min(d, kmax)):
            out[s, k] = t[s, k]
        for k in range(d + 1, kmax + 1):
            acc = 0.0
            sign = 1.0
            for i in range(1, d + 1):
                j = k - i
                tj = <double>d if j == 0 else out[s, j - 1]
                acc += sign * e[s, i - 1] * tj
                sign = -sign
            out[s, k - 1] = acc
    return out_arr


cdef double _jacobi_min(double* a, Py_ssize_t m) nogil:
    # Cyclic Jacobi on a packed row-major m x m buffer, destroyed in place.
    cdef Py_ssize_t p, q, r, sweep
    cdef double off, norm, app, aqq, apq, theta, tt, c, sn, arp, arq
    cdef double mn
    norm = 0.0
    for p in range(m * m):
        norm += a[p] * a[p]
    if norm == 0.0:
        return 0.0
    for sweep in range(60):
        off = 0.0
        for p in range(m):
            for q in range(p + 1, m):
                off += a[p * m + q] * a[p * m + q]
        if off <= 1e-34 * norm:
            break
        for p in range(m):
            for q in range(p + 1, m):
                apq = a[p * m + q]
                if apq == 0.0:
                    continue
                app = a[p * m + p]
                aqq = a[q * m + q]
                theta = (aqq - app) / (2.0 * apq)
                tt = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    tt = -tt
                c = 1.0 / sqrt(tt * tt + 1.0)
                sn = tt * c
                for r in range(m):
                    arp = a[r * m + p]
                    arq = a[r * m + q]
                    a[r * m + p] = c * arp - sn * arq
                    a[r * m + q] = sn * arp + c * arq
                for r in range(m):
                    arp = a[p * m + r]
                    arq = a[q * m + r]
                    a[p * m + r] = c * arp - sn * arq
                    a[q * m + r] = sn * arp + c * arq
    mn = a[0]
    for p in range(1, m):
        if a[p * m + p] < mn:
            mn = a[p * m + p]
    return mn


def min_eigvalsh(double[:, :, ::1] mats):
    cdef Py_ssize_t n = mats.shape[0], m = mats.shape[1]
    cdef Py_ssize_t s, i, j
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    work_arr = np.empty(m * m, dtype=np.float64)
    cdef double[::1] work = work_arr
    with nogil:
        for s in range(n):
            for i in range(m):
                for j in range(m):
                    # symmetrize; the caller guarantees near-symmetry
                    work[i * m + j] = 0.5 * (mats[s, i, j] + mats[s, j, i])
            out[s] = _jacobi_min(&work[0], m)
    return out_arr


def casimir_contract(double[:, ::1] xi, long long[:, ::1] ijk, double[::1] vals):
    cdef Py_ssize_t n = xi.shape[0], dim = xi.shape[1], nnz = ijk.shape[0]
    cdef Py_ssize_t s, q, k
    cdef double c2, c3, c4
    out_arr = np.empty((n, 3), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    v_arr = np.empty(dim, dtype=np.float64)
    cdef double[::1] v = v_arr
    with nogil:
        for s in range(n):
            for k in range(dim):
                v[k] = 0.0
            for q in range(nnz):
                v[ijk[q, 2]] += vals[q] * xi[s, ijk[q, 0]] * xi[s, ijk[q, 1]]
            c2 = 0.0
            c3 = 0.0
            c4 = 0.0
            for k in range(dim):
                c2 += xi[s, k] * xi[s, k]
                c3 += v[k] * xi[s, k]
                c4 += v[k] * v[k]
            out[s, 0] = c2
            out[s, 1] = sqrt(1.5) * c3
            out[s, 2] = 1.5 * c4
    return out_arr

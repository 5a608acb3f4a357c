# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``_kernels_py``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, exp, fabs

cnp.import_array()


def nonlocal_source(const double[::1] a, const double[::1] b,
                    const double[::1] a_x, const double[::1] b_x,
                    const double[::1] a_xx, const double[::1] b_xx,
                    const double[::1] rho2, double sign):
    cdef Py_ssize_t i, n = a.shape[0]
    cdef double acc
    out = np.empty(n)
    cdef double[::1] o = out
    for i in range(n):
        acc = 3.0 * a[i] * b[i] * a_x[i]
        acc = acc + 2.0 * a[i] * b_x[i] * a_xx[i]
        acc = acc + 2.0 * a_x[i] * a_x[i] * b_x[i]
        acc = acc + a[i] * b_xx[i] * a_x[i]
        acc = acc + sign * rho2[i] * a[i]
        o[i] = acc
    return out


def flux_source(const double[::1] a, const double[::1] b,
                const double[::1] a_x, const double[::1] b_xx,
                const double[::1] rho2, double sign):
    cdef Py_ssize_t i, n = a.shape[0]
    cdef double acc
    out = np.empty(n)
    cdef double[::1] o = out
    for i in range(n):
        acc = 3.0 * b[i] * a[i] * a_x[i]
        acc = acc - a[i] * a_x[i] * b_xx[i]
        acc = acc + sign * rho2[i] * a[i]
        o[i] = acc
    return out


def trig_eval(const double[::1] re, const double[::1] im,
              const double[::1] k, xr):
    cdef double[::1] xv = np.ascontiguousarray(xr, dtype=np.float64)
    cdef Py_ssize_t i, j, m = xv.shape[0], nk = k.shape[0]
    cdef double acc, ph
    out = np.empty(m)
    cdef double[::1] o = out
    for i in range(m):
        acc = 0.0
        for j in range(nk):
            ph = k[j] * xv[i]
            acc += re[j] * cos(ph) - im[j] * sin(ph)
        o[i] = acc
    return out


def omega_profile(const double[::1] w, const double[::1] x, double period):
    cdef Py_ssize_t i, j, n = x.shape[0]
    cdef double dx = period / n
    cdef double acc, d
    out = np.empty(n)
    cdef double[::1] o = out
    inv_arr = 1.0 / np.asarray(w)
    cdef double[::1] inv = inv_arr
    for i in range(n):
        acc = 0.0
        for j in range(n):
            d = fabs(x[j] - x[i])
            if period - d < d:
                d = period - d
            acc += exp(-d) * inv[j]
        o[i] = w[i] * acc * dx
    return out

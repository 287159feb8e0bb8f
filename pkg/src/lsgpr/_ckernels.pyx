# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled array kernels: distance scans, localization weights, Gram assembly.

Semantics match lsgpr._npkernels exactly (same family/profile codes,
same inf sentinel for the Hilbert profile at zero distance).  Inputs are
taken as const memoryviews so read-only arrays pass through without
copies.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, sqrt, INFINITY, M_PI

cnp.import_array()

FAMILY_RBF = 0
FAMILY_EXPONENTIAL = 1
FAMILY_POLYNOMIAL = 2

PROFILE_RECTANGULAR = 0
PROFILE_EPANECHNIKOV = 1
PROFILE_GAUSSIAN = 2
PROFILE_HILBERT = 3

cdef double INV_TWO_PI = 1.0 / (2.0 * M_PI)


cdef inline double _sqdist_row(const double[:, ::1] X, Py_ssize_t i,
                               const double[::1] x0, Py_ssize_t d) nogil:
    cdef double acc = 0.0, diff
    cdef Py_ssize_t k
    for k in range(d):
        diff = X[i, k] - x0[k]
        acc += diff * diff
    return acc


cdef inline double _cov_scalar(double r2, double dot, int family,
                               double lengthscale, double amplitude,
                               int degree, double offset) nogil:
    cdef double base, out
    cdef int k
    if family == 0:
        return amplitude * exp(-r2 / (2.0 * lengthscale * lengthscale))
    if family == 1:
        return amplitude * exp(-sqrt(r2) / lengthscale)
    # polynomial: integer power by repeated multiplication
    base = offset + dot
    out = 1.0
    for k in range(degree):
        out *= base
    return amplitude * out


def sq_dists(X, x0):
    """Squared Euclidean distances from each row of X to the point x0."""
    cdef const double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef const double[::1] xv = np.ascontiguousarray(x0, dtype=np.float64)
    cdef Py_ssize_t n = Xv.shape[0], d = Xv.shape[1], i
    cdef cnp.ndarray[double, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    with nogil:
        for i in range(n):
            ov[i] = _sqdist_row(Xv, i, xv, d)
    return out


def local_weights(X, x0, double h, int profile, double epan_const):
    """Localization weights k_h(x_i, x0) = (1/h) * k(||x_i - x0|| / h)."""
    cdef const double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef const double[::1] xv = np.ascontiguousarray(x0, dtype=np.float64)
    cdef Py_ssize_t n = Xv.shape[0], d = Xv.shape[1], i
    cdef cnp.ndarray[double, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    cdef double u, w
    if profile < 0 or profile > 3:
        raise ValueError(f"unknown profile code {profile}")
    with nogil:
        for i in range(n):
            u = sqrt(_sqdist_row(Xv, i, xv, d)) / h
            if profile == 0:
                w = 1.0 if u <= 1.0 else 0.0
            elif profile == 1:
                w = epan_const * (1.0 - u * u) if u <= 1.0 else 0.0
            elif profile == 2:
                w = INV_TWO_PI * exp(-u * u)
            else:
                if u > 1.0:
                    w = 0.0
                elif u == 0.0:
                    w = INFINITY
                else:
                    w = 1.0 / u
            ov[i] = w / h
    return out


def cov_vector(X, x0, int family, double lengthscale, double amplitude,
               int degree, double offset):
    """Covariances K(x_i, x0) against a single point."""
    cdef const double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef const double[::1] xv = np.ascontiguousarray(x0, dtype=np.float64)
    cdef Py_ssize_t n = Xv.shape[0], d = Xv.shape[1], i, k
    cdef cnp.ndarray[double, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    cdef double r2, dot
    if family < 0 or family > 2:
        raise ValueError(f"unknown family code {family}")
    with nogil:
        for i in range(n):
            r2 = 0.0
            dot = 0.0
            if family == 2:
                for k in range(d):
                    dot += Xv[i, k] * xv[k]
            else:
                r2 = _sqdist_row(Xv, i, xv, d)
            ov[i] = _cov_scalar(r2, dot, family, lengthscale, amplitude, degree, offset)
    return out


def gram(X, Y, int family, double lengthscale, double amplitude,
         int degree, double offset):
    """Cross-covariance matrix with entries K(X_i, Y_j)."""
    cdef const double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef const double[:, ::1] Yv = np.ascontiguousarray(Y, dtype=np.float64)
    cdef Py_ssize_t n = Xv.shape[0], m = Yv.shape[0], d = Xv.shape[1], i, j, k
    cdef cnp.ndarray[double, ndim=2] out = np.empty((n, m), dtype=np.float64)
    cdef double[:, :] ov = out
    cdef double r2, dot, diff
    if family < 0 or family > 2:
        raise ValueError(f"unknown family code {family}")
    with nogil:
        for i in range(n):
            for j in range(m):
                r2 = 0.0
                dot = 0.0
                if family == 2:
                    for k in range(d):
                        dot += Xv[i, k] * Yv[j, k]
                else:
                    for k in range(d):
                        diff = Xv[i, k] - Yv[j, k]
                        r2 += diff * diff
                ov[i, j] = _cov_scalar(r2, dot, family, lengthscale, amplitude, degree, offset)
    return out


def gram_sym(X, int family, double lengthscale, double amplitude,
             int degree, double offset):
    """Gram matrix of X against itself; fills the upper triangle and mirrors."""
    cdef const double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef Py_ssize_t n = Xv.shape[0], d = Xv.shape[1], i, j, k
    cdef cnp.ndarray[double, ndim=2] out = np.empty((n, n), dtype=np.float64)
    cdef double[:, :] ov = out
    cdef double r2, dot, diff, val
    if family < 0 or family > 2:
        raise ValueError(f"unknown family code {family}")
    with nogil:
        for i in range(n):
            for j in range(i, n):
                r2 = 0.0
                dot = 0.0
                if family == 2:
                    for k in range(d):
                        dot += Xv[i, k] * Xv[j, k]
                else:
                    for k in range(d):
                        diff = Xv[i, k] - Xv[j, k]
                        r2 += diff * diff
                val = _cov_scalar(r2, dot, family, lengthscale, amplitude, degree, offset)
                ov[i, j] = val
                ov[j, i] = val
    return out

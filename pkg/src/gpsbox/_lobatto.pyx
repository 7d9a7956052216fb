# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Legendre recurrence used to locate and polish Lobatto nodes."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def legendre_with_derivative(int order, const double[::1] x):
    """Return ``(P_N(x), P_N'(x))`` by the three-term recurrence."""
    cdef Py_ssize_t i, n = x.shape[0]
    cdef int k
    cdef double p0, p1, p2, xi, dp
    cdef cnp.ndarray[cnp.float64_t, ndim=1] p = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] d = np.empty(n)
    for i in range(n):
        xi = x[i]
        p0 = 1.0
        p1 = xi
        dp = 1.0
        for k in range(2, order + 1):
            p2 = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k
            # P_k' = k P_{k-1} + x P_{k-1}'
            dp = k * p1 + xi * dp
            p0 = p1
            p1 = p2
        if order == 0:
            p[i] = 1.0
            d[i] = 0.0
        else:
            p[i] = p1
            d[i] = dp
    return p, d

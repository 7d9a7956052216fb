# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Numerov outward integration for the shooting oracle."""
from libc.math cimport fabs


def shoot(const double[::1] veff, double energy, double h, double u0, double u1):
    """Integrate ``u'' = 2 (veff - E) u`` outward on a uniform mesh.

    Summed Numerov form: ``y = f u`` and its first difference ``d`` are
    carried instead of three consecutive ``u`` values.

    Returns ``(u_end, nodes)``: the (rescaled) value at the last mesh point
    and the number of sign changes strictly inside the mesh.
    """
    cdef Py_ssize_t i, m = veff.shape[0]
    cdef double h2 = h * h
    cdef double c = h2 / 12.0
    cdef double y_prev, y, d, u, up
    cdef long nodes = 0
    y_prev = (1.0 - c * 2.0 * (veff[0] - energy)) * u0
    u = u1
    y = (1.0 - c * 2.0 * (veff[1] - energy)) * u
    d = y - y_prev
    for i in range(2, m):
        d += h2 * 2.0 * (veff[i - 1] - energy) * u
        y += d
        up = y / (1.0 - c * 2.0 * (veff[i] - energy))
        if i < m - 1 and up * u < 0.0:
            nodes += 1
        elif i < m - 1 and up == 0.0:
            # an exact zero counts once, against the previous sign
            nodes += 1
            up = -1e-300 if u > 0 else 1e-300
        u = up
        if fabs(u) > 1e150:
            u *= 1e-150
            y *= 1e-150
            d *= 1e-150
    return u, nodes

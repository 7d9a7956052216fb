"""Pure-numpy fallback for :mod:`gpsbox._lobatto`."""
import numpy as np


def legendre_with_derivative(order, x):
    """Return ``(P_N(x), P_N'(x))`` by the three-term recurrence."""
    x = np.asarray(x, dtype=float)
    if order == 0:
        return np.ones_like(x), np.zeros_like(x)
    p0 = np.ones_like(x)
    p1 = x.copy()
    dp = np.ones_like(x)
    for k in range(2, order + 1):
        p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
        dp = k * p1 + x * dp
        p0, p1 = p1, p2
    return p1, dp

"""Independent reference values used across the test modules."""
import numpy as np
from scipy.special import spherical_jn


def bessel_zero(ell, k, step=0.05):
    """``(k+1)``-th positive zero of the spherical Bessel function ``j_l``.

    Coarse scan for sign changes, then plain bisection to full precision.
    """
    f = lambda z: spherical_jn(ell, z)
    z = max(step, ell * 0.5)
    found = -1
    while True:
        a, b = z, z + step
        if f(a) * f(b) < 0:
            found += 1
            if found == k:
                break
        z = b
    fa = f(a)
    for _ in range(200):
        m = 0.5 * (a + b)
        if m in (a, b):
            break
        fm = f(m)
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def box_energy(ell, k, r_c):
    return bessel_zero(ell, k) ** 2 / (2.0 * r_c**2)


def hulthen_free_s(n, delta):
    """Closed-form unconfined Hulthen s levels."""
    return -0.5 * (1.0 / n - n * delta / 2.0) ** 2


def tan_root():
    """First positive root of tan z = z (the l = 1 box zero), by bisection."""
    a, b = np.pi + 1e-9, 1.5 * np.pi - 1e-9
    g = lambda z: np.sin(z) - z * np.cos(z)
    for _ in range(200):
        m = 0.5 * (a + b)
        if (g(m) > 0) == (g(a) > 0):
            a = m
        else:
            b = m
    return 0.5 * (a + b)

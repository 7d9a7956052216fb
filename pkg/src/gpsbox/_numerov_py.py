"""Pure-Python fallback for :mod:`gpsbox._numerov`."""


def shoot(veff, energy, h, u0, u1):
    """Integrate ``u'' = 2 (veff - E) u`` outward on a uniform mesh.

    Uses the summed form of Numerov's recurrence: with ``y = f u`` the
    first difference ``d = y[i+1] - y[i]`` is advanced by ``h^2 2 (v - E) u``,
    which avoids the cancellation of the three-term form at fine meshes.

    Returns ``(u_end, nodes)``: the (rescaled) value at the last mesh point
    and the number of sign changes strictly inside the mesh.
    """
    h2 = h * h
    c = h2 / 12.0
    m = len(veff)
    y_prev = (1.0 - c * 2.0 * (veff[0] - energy)) * u0
    u = u1
    y = (1.0 - c * 2.0 * (veff[1] - energy)) * u
    d = y - y_prev
    nodes = 0
    for i in range(2, m):
        d += h2 * 2.0 * (veff[i - 1] - energy) * u
        y += d
        up = y / (1.0 - c * 2.0 * (veff[i] - energy))
        if i < m - 1:
            if up * u < 0.0:
                nodes += 1
            elif up == 0.0:
                nodes += 1
                up = -1e-300 if u > 0 else 1e-300
        u = up
        if abs(u) > 1e150:
            u *= 1e-150
            y *= 1e-150
            d *= 1e-150
    return u, nodes

"""Numerov shooting oracle for the confined radial problem.

This is deliberately independent of the collocation code: a uniform mesh on
``[r_min, r_c]``, outward integration from the small-r series
``u = r^(l+1) (1 + a1 r + a2 r^2)`` of ``v = -Z/r + v0 + ...``, a node-count
bisection to isolate the requested level, then Brent on ``u(r_c)``.
Only the potential objects are shared.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from gpsbox._backend import shoot as _shoot
from gpsbox.potentials import Potential

__all__ = ["OracleError", "ShootingResult", "numerov_energy"]


class OracleError(RuntimeError):
    """The shooting search could not bracket the requested level."""


@dataclass(frozen=True)
class ShootingResult:
    energy: float
    step: float
    nodes: int
    mismatch: float


def _mesh(potential, ell, r_c, points):
    r_min = r_c * 1e-6
    r = np.linspace(r_min, r_c, points + 1)
    h = r[1] - r[0]
    v = potential(r)
    veff = ell * (ell + 1) / (2.0 * r**2) + v
    # r v(r) = -Z + v0 r + O(r^2) from the first two mesh points
    rv = r[:2] * v[:2]
    v0 = (rv[1] - rv[0]) / (r[1] - r[0])
    z = v0 * r[0] - rv[0]
    return r, h, np.ascontiguousarray(veff), (z, v0)


def _start(r, ell, z, v0, e):
    # Frobenius series; a truncated start costs the recurrence its fourth order
    a1 = -z / (ell + 1)
    a2 = (-2.0 * z * a1 + 2.0 * (v0 - e)) / (2.0 * (2 * ell + 3))
    x = r[:2]
    u = x ** (ell + 1) * (1.0 + a1 * x + a2 * x * x)
    return float(u[0]), float(u[1])


def numerov_energy(
    potential: Potential,
    ell: int,
    r_c: float,
    k: int,
    points: int = 20000,
    tol: float = 1e-13,
    kernel=None,
) -> ShootingResult:
    """Energy of the ``k``-node level for angular momentum ``ell``.

    ``kernel`` overrides the compiled/pure-Python backend (testing only).
    """
    if points < 2000:
        raise ValueError(f"oracle needs at least 2000 mesh points, got {points}")
    if k < 0 or ell < 0:
        raise ValueError("k and ell must be non-negative")
    shoot = _shoot if kernel is None else kernel
    r, h, veff, (z, v0) = _mesh(potential, ell, r_c, points)

    def run(e):
        u0, u1 = _start(r, ell, z, v0, e)
        return shoot(veff, float(e), h, u0, u1)

    def below(e):
        # nodes of u in (0, r_c) count the levels strictly below e
        return run(e)[1] <= k

    lo = float(np.min(veff))
    if not below(lo):
        raise OracleError(f"lower energy bound {lo!r} already exceeds level {k}")
    # kinetic scale of a k-node wave in the box bounds the level from above
    hi = float(np.max(veff[len(veff) // 100:])) + 0.5 * ((k + ell + 2) * np.pi / r_c) ** 2
    for _ in range(200):
        if not below(hi):
            break
        lo = hi
        hi = hi + 2.0 * abs(hi) + 1.0
    else:
        raise OracleError(f"no upper bracket for level {k} of l={ell}")

    # bisect on the node count until the bracket holds exactly one sign change
    for _ in range(400):
        ulo, nlo = run(lo)
        uhi, nhi = run(hi)
        if nlo == k and nhi == k + 1 and (ulo > 0) != (uhi > 0):
            break
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if below(mid):
            lo = mid
        else:
            hi = mid
    else:
        raise OracleError("node-count bisection did not settle")

    e = brentq(lambda x: run(x)[0], lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=200)
    u_end, nodes = run(e)
    scale = max(abs(run(lo)[0]), abs(run(hi)[0]))
    return ShootingResult(energy=float(e), step=float(h), nodes=int(nodes),
                          mismatch=float(abs(u_end) / scale) if scale else 0.0)

"""Legendre-Gauss-Lobatto collocation grids and the algebraic radial map.

The grid lives on ``x in [-1, 1]``: the endpoints plus the ``N - 1`` roots of
``P_N'``. The map ``r(x) = L (1 + x) / (1 - x + alpha)`` with
``alpha = 2 L / r_max`` takes it onto ``[0, r_max]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from gpsbox._backend import legendre_with_derivative

__all__ = [
    "GridError",
    "RadialMapping",
    "SpectralGrid",
    "lobatto_grid",
    "map_to_radius",
    "mapping_jacobian",
]

_MAX_BISECT = 200
_MAX_NEWTON = 12


class GridError(RuntimeError):
    """Raised when node construction fails; indicates a bug, not bad input."""


@dataclass(frozen=True, eq=False)
class SpectralGrid:
    """Lobatto nodes, quadrature weights and first-derivative matrix.

    Attributes
    ----------
    order : int
        Polynomial order ``N``; there are ``N + 1`` nodes.
    nodes : ndarray
        Strictly increasing nodes with ``nodes[0] = -1`` and ``nodes[-1] = 1``.
    weights : ndarray
        Gauss-Lobatto weights ``2 / (N (N + 1) P_N(x_j)^2)``.
    d1 : ndarray
        ``d1[i, j] = g_j'(x_i)`` for the cardinal functions ``g_j``.
    """

    order: int
    nodes: np.ndarray
    weights: np.ndarray
    d1: np.ndarray

    @property
    def size(self) -> int:
        return self.order + 1


@dataclass(frozen=True)
class RadialMapping:
    """Algebraic map between ``x in [-1, 1]`` and ``r in [0, r_max]``."""

    scale: float
    r_max: float

    def __post_init__(self):
        if not (self.scale > 0 and np.isfinite(self.scale)):
            raise ValueError(f"mapping scale must be positive, got {self.scale!r}")
        if not (self.r_max > 0 and np.isfinite(self.r_max)):
            raise ValueError(f"r_max must be positive, got {self.r_max!r}")

    @property
    def alpha(self) -> float:
        return 2.0 * self.scale / self.r_max

    def radius(self, x):
        a = self.alpha
        return self.scale * (1.0 + x) / (1.0 - x + a)

    def jacobian(self, x):
        a = self.alpha
        return self.scale * (2.0 + a) / (1.0 - x + a) ** 2


def map_to_radius(mapping: RadialMapping, x):
    """Radius ``r(x)`` for ``x`` in ``[-1, 1]`` (scalar or array)."""
    r = mapping.radius(x)
    # r(1) = 2L/alpha algebraically; pin it so the wall sits exactly at r_max
    if np.ndim(x) == 0:
        return mapping.r_max if x == 1.0 else r
    r = np.array(r, dtype=float)
    r[np.asarray(x) == 1.0] = mapping.r_max
    return r


def mapping_jacobian(mapping: RadialMapping, x):
    """Derivative ``dr/dx`` of :func:`map_to_radius`."""
    return mapping.jacobian(x)


def _bisect_root(order, lo, hi, plo):
    """Bisect ``P_N'`` on ``[lo, hi]`` until the bracket is a few ulps wide."""
    for _ in range(_MAX_BISECT):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return mid
        _, pm = legendre_with_derivative(order, np.array([mid]))
        pm = pm[0]
        if pm == 0.0:
            return mid
        if (pm > 0) == (plo > 0):
            lo, plo = mid, pm
        else:
            hi = mid
        if hi - lo < 1e-3 / order**2:
            return 0.5 * (lo + hi)
    raise GridError(f"bisection on P_{order}' did not converge in [{lo!r}, {hi!r}]")


def _interior_nodes(order):
    k = np.arange(1, order)
    # Chebyshev-Lobatto midpoints bracket the Legendre-Lobatto roots
    edges = -np.cos(np.pi * np.arange(0.5, order, 1.0) / order)
    _, dedge = legendre_with_derivative(order, edges)
    roots = np.empty(order - 1)
    for i in range(order - 1):
        lo, hi = edges[i], edges[i + 1]
        if np.sign(dedge[i]) == np.sign(dedge[i + 1]):
            raise GridError(
                f"no sign change of P_{order}' in bracket {i} [{lo!r}, {hi!r}]"
            )
        roots[i] = _bisect_root(order, lo, hi, dedge[i])

    # Newton on P_N' with P_N'' from the Legendre ODE
    n1 = order * (order + 1)
    x = roots
    for _ in range(_MAX_NEWTON):
        p, dp = legendre_with_derivative(order, x)
        d2 = (2.0 * x * dp - n1 * p) / (1.0 - x * x)
        step = dp / d2
        x = x - step
        if np.max(np.abs(step)) < 4e-16:
            break
    else:
        bad = int(np.argmax(np.abs(step)))
        raise GridError(
            f"Newton polish of P_{order}' root {k[bad]} stalled at {x[bad]!r}"
        )
    # exact symmetry; the middle root of even N is 0
    x = 0.5 * (x - x[::-1])
    return x


@lru_cache(maxsize=32)
def _build(order):
    x = np.empty(order + 1)
    x[0], x[-1] = -1.0, 1.0
    x[1:-1] = _interior_nodes(order)
    p, _ = legendre_with_derivative(order, x)
    w = 2.0 / (order * (order + 1) * p**2)
    w = 0.5 * (w + w[::-1])

    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    d1 = (p[:, None] / p[None, :]) / diff
    np.fill_diagonal(d1, 0.0)
    # negative-sum trick: rows annihilate constants
    np.fill_diagonal(d1, -d1.sum(axis=1))
    for arr in (x, w, d1):
        arr.setflags(write=False)
    return SpectralGrid(order=order, nodes=x, weights=w, d1=d1)


def lobatto_grid(order: int) -> SpectralGrid:
    """Build the Legendre-Gauss-Lobatto grid of polynomial order ``N``.

    Interior nodes are bracketed between Chebyshev-Lobatto midpoints,
    bisected, then Newton-polished. Results are cached, so repeated calls
    return the same (read-only) arrays.
    """
    if int(order) != order or order < 4:
        raise ValueError(f"grid order must be an integer >= 4, got {order!r}")
    return _build(int(order))

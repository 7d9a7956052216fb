"""Parametric studies over the cavity radius."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from gpsbox.hamiltonian import (
    DEFAULT_ORDER,
    ConfinedProblem,
    SolverError,
    StateLabel,
    UnboundStateError,
    energy,
    free_limit_energies,
    solve,
)
from gpsbox.potentials import Coulomb, Hulthen, Potential

__all__ = [
    "CriticalRadius",
    "NoRootError",
    "SweepResult",
    "brent",
    "choose_order",
    "critical_radius",
    "critical_screening",
    "degeneracy_check",
    "free_ordering",
    "small_box_ordering",
    "sweep",
]

R_MIN, R_MAX = 1e-2, 1e4


class NoRootError(SolverError):
    """No sign change of the energy was found."""


@dataclass(frozen=True)
class CriticalRadius:
    state: StateLabel
    potential: Potential
    radius: float
    residual: float
    bracket_width: float


@dataclass
class SweepResult:
    state: StateLabel
    potential: Potential
    points: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    order: int = DEFAULT_ORDER

    @property
    def radii(self):
        return np.array([p[0] for p in self.points])

    @property
    def energies(self):
        return np.array([p[1] for p in self.points])


def _brent_pass(f, a, b, fa, fb, xtol, maxiter):
    # classic Brent (van Wijngaarden-Dekker-Brent); returns the final bracket
    c, fc = a, fa
    d = e = b - a
    for _ in range(maxiter):
        if (fb > 0) == (fc > 0):
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * np.finfo(float).eps * abs(b) + 0.5 * xtol
        xm = 0.5 * (c - b)
        if abs(xm) <= tol1 or fb == 0.0:
            return b, fb, c, fc
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * xm * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0:
                q = -q
            p = abs(p)
            if 2.0 * p < min(3.0 * xm * q - abs(tol1 * q), abs(e * q)):
                e, d = d, p / q
            else:
                d = e = xm
        else:
            d = e = xm
        a, fa = b, fb
        b += d if abs(d) > tol1 else math.copysign(tol1, xm)
        fb = f(b)
    raise NoRootError(f"Brent iteration did not converge (bracket {b!r}..{c!r})")


def brent(f: Callable[[float], float], a: float, b: float, xtol: float, ftol: float,
          fa: float | None = None, fb: float | None = None, maxiter: int = 200):
    """Brent's method on a sign-changing bracket.

    Returns ``(root, f(root), width)``, ``width`` being the final bracket
    that still straddles the sign change. The bracket tolerance is tightened
    until ``|f(root)| <= ftol`` as well.
    """
    fa = f(a) if fa is None else fa
    fb = f(b) if fb is None else fb
    if fa == 0.0:
        return a, fa, 0.0
    if fb == 0.0:
        return b, fb, 0.0
    if (fa > 0) == (fb > 0):
        raise NoRootError(f"no sign change on [{a!r}, {b!r}]")
    for _ in range(8):
        b, fb, c, fc = _brent_pass(f, a, b, fa, fb, xtol, maxiter)
        if abs(fb) <= ftol:
            return b, fb, abs(c - b)
        a, fa = c, fc
        xtol *= 1e-2
    raise NoRootError(f"|f| = {abs(fb):.3e} above {ftol:g} at the resolution limit near {b!r}")


def critical_radius(
    potential: Potential,
    state: StateLabel,
    tol: float = 1e-9,
    xtol: float = 1e-8,
    order: int = DEFAULT_ORDER,
) -> CriticalRadius:
    """Cavity radius at which the level of ``state`` crosses zero."""

    def f(r_c):
        return energy(potential, state, r_c, order)

    start = float(state.n * (state.n + 1))
    lo = hi = start
    flo = fhi = f(start)
    if fhi > 0:
        while fhi > 0:
            lo, flo = hi, fhi
            hi *= 2.0
            if hi > R_MAX:
                raise NoRootError(f"{state} has no critical radius below r_c = {R_MAX:g}")
            fhi = f(hi)
    else:
        while flo <= 0:
            hi, fhi = lo, flo
            lo *= 0.5
            if lo < R_MIN:
                raise NoRootError(f"{state} has no critical radius above r_c = {R_MIN:g}")
            flo = f(lo)

    root, resid, width = brent(f, lo, hi, xtol=xtol, ftol=tol, fa=flo, fb=fhi)
    h = 10.0 * max(width, np.finfo(float).eps * root)
    below, above = f(root - h), f(root + h)
    if not (below > 0 > above):
        raise SolverError(
            f"critical radius of {state} failed its bracket certificate:"
            f" E({root - h!r}) = {below!r}, E({root + h!r}) = {above!r}"
        )
    return CriticalRadius(state, potential, float(root), abs(float(resid)), float(width))


def critical_screening(
    state: StateLabel,
    r_c: float,
    delta_range: tuple[float, float] = (1e-4, 5.0),
    tol: float = 1e-9,
    order: int = DEFAULT_ORDER,
) -> float:
    """Hulthen screening at which ``state`` reaches zero energy for fixed ``r_c``."""

    def f(delta):
        return energy(Hulthen(delta), state, r_c, order)

    root, _, _ = brent(f, delta_range[0], delta_range[1], xtol=1e-10, ftol=tol)
    return float(root)


ORDER_CANDIDATES = (64, 96, 128, 160, 200)


def choose_order(
    potential: Potential,
    state: StateLabel,
    r_c: float,
    tol: float = 1e-10,
    candidates: Sequence[int] = ORDER_CANDIDATES,
) -> int:
    """Smallest grid order whose energy agrees with the next candidate to ``tol``.

    The comparison is relative for ``|E| > 1``. Falls back to the largest
    candidate if no pair agrees.
    """
    prev = None
    for n_prev, n_cur in zip(candidates, candidates[1:]):
        e_prev = energy(potential, state, r_c, n_prev) if prev is None else prev
        e_cur = energy(potential, state, r_c, n_cur)
        if abs(e_cur - e_prev) <= tol * max(1.0, abs(e_cur)):
            return int(n_prev)
        prev = e_cur
    return int(candidates[-1])


def sweep(
    potential: Potential,
    state: StateLabel,
    radii: Sequence[float],
    order: int | None = DEFAULT_ORDER,
) -> SweepResult:
    """Energy of ``state`` along an ascending list of cavity radii.

    ``order=None`` picks one grid order for the whole sweep with
    :func:`choose_order` at the smallest radius, the hardest point.
    Failed points are recorded in ``failures`` as ``(r_c, message)`` and
    skipped; a non-decreasing step between computed points raises.
    """
    radii = [float(r) for r in radii]
    if any(r <= 0 for r in radii) or any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("sweep radii must be positive and strictly increasing")
    if order is None:
        order = choose_order(potential, state, radii[0])
    result = SweepResult(state=state, potential=potential, order=order)
    for r_c in radii:
        try:
            result.points.append((r_c, energy(potential, state, r_c, order)))
        except SolverError as exc:
            result.failures.append((r_c, str(exc)))
    e = result.energies
    if len(e) > 1 and np.any(np.diff(e) >= 0):
        i = int(np.flatnonzero(np.diff(e) >= 0)[0])
        raise SolverError(
            f"{state} energy not decreasing between r_c = {result.points[i][0]}"
            f" and {result.points[i + 1][0]}"
        )
    return result


def degeneracy_check(n: int, ell: int, order: int = DEFAULT_ORDER, charge: float = 1.0):
    """Gap between confined Coulomb ``(n, l)`` and ``(n+1, l+2)`` at ``r_c = (l+1)(l+2)``."""
    if ell < 0 or n < ell + 2:
        raise ValueError(f"degeneracy pair needs n >= l + 2, got n={n}, l={ell}")
    r_c = float((ell + 1) * (ell + 2))
    pot = Coulomb(charge)
    e1 = energy(pot, StateLabel(n, ell), r_c, order)
    e2 = energy(pot, StateLabel(n + 1, ell + 2), r_c, order)
    return r_c, abs(e1 - e2)


def _merge(blocks, max_states):
    levels = []
    for ell, energies in blocks.items():
        for k, e in enumerate(energies):
            levels.append((float(e), StateLabel.from_index(ell, k)))
    levels.sort(key=lambda t: t[0])
    return levels[:max_states]


def small_box_ordering(
    potential: Potential,
    r_c: float,
    max_states: int,
    order: int = DEFAULT_ORDER,
    with_energies: bool = False,
):
    """Lowest ``max_states`` confined levels across all ``l``, ascending.

    Levels rise with both ``k`` and ``l``, so the lowest ``max_states``
    levels all have ``k, l < max_states``.
    """
    if max_states < 1:
        raise ValueError("max_states must be positive")
    blocks = {}
    for ell in range(max_states):
        spec = solve(ConfinedProblem(potential, ell, r_c, order), max_states)
        blocks[ell] = spec.energies
    levels = _merge(blocks, max_states)
    return levels if with_energies else [s for _, s in levels]


def free_ordering(
    potential: Potential,
    max_states: int,
    order: int = DEFAULT_ORDER,
    with_energies: bool = False,
):
    """Lowest ``max_states`` unconfined bound levels, ascending.

    Shells are added until the last kept level lies below ``-Z^2/(2 (n+1)^2)``,
    a lower bound for every level of the next shell whenever ``v >= -Z/r``
    (the Hulthen potential satisfies this with ``Z = 1``). Once one level of
    an ``l`` block is unbound, the block is closed.
    """
    if max_states < 1:
        raise ValueError("max_states must be positive")
    if isinstance(potential, Coulomb):
        charge = potential.charge
    elif isinstance(potential, Hulthen):
        charge = 1.0
    else:
        raise TypeError("free ordering needs a Coulomb or Hulthen potential")
    blocks: dict[int, np.ndarray] = {}
    closed: set[int] = set()
    for n_max in range(1, 41):
        for ell in range(n_max):
            count = n_max - ell
            if ell in closed or len(blocks.get(ell, ())) >= count:
                continue
            try:
                blocks[ell] = free_limit_energies(potential, ell, count, order)
            except UnboundStateError:
                closed.add(ell)
                blocks.setdefault(ell, np.empty(0))
        levels = _merge(blocks, max_states)
        threshold = -(charge**2) / (2.0 * (n_max + 1) ** 2)
        if len(levels) == max_states and levels[-1][0] < threshold:
            return levels if with_energies else [s for _, s in levels]
        if len(closed) == n_max:
            # higher l and higher k only raise the level
            break
    raise UnboundStateError(
        f"fewer than {max_states} bound states for {potential.describe()}"
    )

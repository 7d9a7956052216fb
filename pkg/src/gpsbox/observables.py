"""Radial moments, confinement shifts, densities and dipole polarizabilities."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gpsbox.grid import lobatto_grid
from gpsbox.hamiltonian import (
    DEFAULT_ORDER,
    Spectrum,
    StateLabel,
    energy,
    free_limit_energy,
)
from gpsbox.potentials import Potential

__all__ = [
    "MOMENT_POWERS",
    "FormulaError",
    "MomentSet",
    "PolarizabilityPair",
    "energy_shift",
    "expectation",
    "moments",
    "polarizability",
    "radial_density",
]

MOMENT_POWERS = (-2, -1, 1, 2, 3)


class FormulaError(ArithmeticError):
    """A closed-form expression hit a non-positive denominator."""


@dataclass(frozen=True)
class MomentSet:
    state: StateLabel
    r_c: float
    moments: dict

    def __getitem__(self, power):
        return self.moments[power]


@dataclass(frozen=True)
class PolarizabilityPair:
    kirkwood: float
    buckingham: float


def expectation(spectrum: Spectrum, state: StateLabel, power: int, include_origin: bool = False) -> float:
    """Quadrature estimate of ``<r^power>`` for ``state``.

    The sum runs over the interior nodes only, matching the normalization.
    For ``power = -2`` and an s state the integrand ``psi^2 / r^2`` is finite
    at ``r = 0`` and the plain rule drops that endpoint term, which is of
    size ``w_0 psi'(0)^2 r'(-1)``. ``include_origin=True`` adds it back.
    """
    if int(power) != power or not -2 <= power <= 3:
        raise ValueError(f"moment power must be an integer in [-2, 3], got {power!r}")
    k = spectrum.index(state)
    y2 = spectrum.vectors[:, k] ** 2
    if power == 0:
        return float(np.sum(y2))
    value = float(np.sum(y2 * spectrum.radii ** float(power)))
    if include_origin and power == -2 and state.ell == 0:
        value += _origin_term(spectrum, k)
    return value


def _origin_term(spectrum, k):
    problem = spectrum.problem
    grid = lobatto_grid(problem.order)
    psi = np.zeros(grid.size)
    psi[1:-1] = spectrum.psi(k)
    dpsi_dx = grid.d1[0] @ psi
    jac0 = problem.mapping.jacobian(-1.0)
    return float(grid.weights[0] * dpsi_dx**2 / jac0)


def moments(spectrum: Spectrum, state: StateLabel, powers=MOMENT_POWERS) -> MomentSet:
    return MomentSet(
        state=state,
        r_c=spectrum.problem.r_c,
        moments={p: expectation(spectrum, state, p) for p in powers},
    )


def energy_shift(
    potential: Potential, state: StateLabel, r_c: float, order: int = DEFAULT_ORDER
) -> float:
    """Rise of the confined level above its free-space value."""
    return energy(potential, state, r_c, order) - free_limit_energy(potential, state, order)


def polarizability(m: MomentSet) -> PolarizabilityPair:
    """Kirkwood and Buckingham estimates from ``<r>``, ``<r^2>``, ``<r^3>``.

    The Buckingham quotient is used exactly as published, including its
    ``9<r^2> - 8<r>^2`` denominator.
    """
    r1, r2, r3 = m[1], m[2], m[3]
    kirkwood = 4.0 / 9.0 * r2**2
    denom = 9.0 * r2 - 8.0 * r1**2
    if not denom > 0:
        raise FormulaError(f"Buckingham denominator 9<r^2> - 8<r>^2 = {denom!r} is not positive")
    buckingham = 2.0 / 3.0 * (6.0 * r2**3 + 3.0 * r3**2 - 8.0 * r1 * r2 * r3) / denom
    return PolarizabilityPair(kirkwood=kirkwood, buckingham=buckingham)


def radial_density(spectrum: Spectrum, state: StateLabel) -> np.ndarray:
    """``(r_j, psi(r_j)^2)`` rows over the interior nodes, ascending in ``r``."""
    psi = spectrum.psi(state)
    return np.column_stack([spectrum.radii, psi**2])

"""Hard-wall spherical confinement of one-electron central potentials.

Generalized pseudospectral (mapped Legendre-Lobatto) solver for the radial
Schrodinger equation inside an impenetrable sphere, with Coulomb, Hulthen
and free-particle potentials.
"""
from gpsbox._backend import BACKEND
from gpsbox.analysis import (
    CriticalRadius,
    SweepResult,
    critical_radius,
    degeneracy_check,
    free_ordering,
    small_box_ordering,
    sweep,
)
from gpsbox.grid import RadialMapping, SpectralGrid, lobatto_grid, map_to_radius, mapping_jacobian
from gpsbox.hamiltonian import (
    ConfinedProblem,
    Spectrum,
    StateLabel,
    assemble,
    energy,
    free_limit_energy,
    solve,
)
from gpsbox.observables import (
    MomentSet,
    PolarizabilityPair,
    energy_shift,
    expectation,
    moments,
    polarizability,
    radial_density,
)
from gpsbox.potentials import Coulomb, Custom, Hulthen, ParticleInBox

__version__ = "0.1.0"

"""Discrete radial Hamiltonian in a hard spherical cavity.

The reduced radial function is expanded in the Lobatto cardinal functions of
the mapped variable, restricted to the interior nodes so that
``psi(0) = psi(r_c) = 0``. With ``y_j = sqrt(w_j r'_j) psi(r_j)`` the problem
is the symmetric matrix eigenproblem ``H y = E y`` where

    H = 1/2 S D^T diag(w / r') D S + diag(l(l+1) / 2r^2 + v(r)),
    S = diag(1 / sqrt(w r'))   (interior nodes only).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import linalg

from gpsbox.grid import RadialMapping, lobatto_grid, map_to_radius, mapping_jacobian
from gpsbox.potentials import Potential

__all__ = [
    "DEFAULT_ORDER",
    "TABLE_GRID",
    "QUICK_ORDER",
    "ConfinedProblem",
    "LabelError",
    "SolverError",
    "Spectrum",
    "StateLabel",
    "UnboundStateError",
    "assemble",
    "count_nodes",
    "energy",
    "free_limit_energies",
    "free_limit_energy",
    "solve",
]

DEFAULT_ORDER = 128
QUICK_ORDER = 64
# Grid (order, scale) that reproduces the published <r^-2> of s states; see README.
TABLE_GRID = {"order": 201, "scale": 1.0}

FREE_LADDER = (50.0, 100.0, 200.0, 400.0, 800.0, 1600.0)

_LETTERS = "spdfghiklmnoqrtuvwxyz"


class SolverError(RuntimeError):
    """Eigensolver or assembly failure."""


class LabelError(SolverError):
    """Node count of an eigenvector disagrees with its radial index."""


class UnboundStateError(SolverError):
    """The requested state has no converged free-space bound energy."""


@dataclass(frozen=True, order=True)
class StateLabel:
    """Principal and angular quantum numbers ``(n, l)`` with ``n >= l + 1``."""

    n: int
    ell: int

    def __post_init__(self):
        if self.ell < 0 or self.n < self.ell + 1:
            raise ValueError(f"invalid state n={self.n}, l={self.ell}: need n >= l + 1 >= 1")

    @property
    def k(self) -> int:
        """Radial index, the number of interior nodes."""
        return self.n - self.ell - 1

    @classmethod
    def from_index(cls, ell: int, k: int) -> "StateLabel":
        return cls(k + ell + 1, ell)

    @classmethod
    def parse(cls, text: str) -> "StateLabel":
        """Parse ``'2p'``, ``'10m'`` or ``'8,7'`` (n, l)."""
        text = text.strip().lower()
        m = re.fullmatch(r"(\d+)\s*,\s*(\d+)", text)
        if m:
            return cls(int(m.group(1)), int(m.group(2)))
        m = re.fullmatch(r"(\d+)([a-z])", text)
        if not m or m.group(2) not in _LETTERS:
            raise ValueError(f"cannot parse state label {text!r}")
        return cls(int(m.group(1)), _LETTERS.index(m.group(2)))

    def __str__(self):
        if self.ell < len(_LETTERS):
            return f"{self.n}{_LETTERS[self.ell]}"
        return f"{self.n},{self.ell}"


@dataclass(frozen=True)
class ConfinedProblem:
    """A potential, an angular momentum and a cavity radius, plus grid knobs.

    ``scale`` is the mapping parameter ``L``; ``None`` means ``r_c / 2``.
    """

    potential: Potential
    ell: int
    r_c: float
    order: int = DEFAULT_ORDER
    scale: float | None = None

    def __post_init__(self):
        if int(self.ell) != self.ell or self.ell < 0:
            raise ValueError(f"angular quantum number must be a non-negative integer, got {self.ell!r}")
        if not (self.r_c > 0 and np.isfinite(self.r_c)):
            raise ValueError(f"cavity radius must be positive, got {self.r_c!r}")
        if int(self.order) != self.order or self.order < 8:
            raise ValueError(f"grid order must be an integer >= 8, got {self.order!r}")
        if self.scale is not None and not self.scale > 0:
            raise ValueError(f"mapping scale must be positive, got {self.scale!r}")

    @property
    def mapping(self) -> RadialMapping:
        scale = 0.5 * self.r_c if self.scale is None else self.scale
        return RadialMapping(scale=float(scale), r_max=float(self.r_c))


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Lowest eigenpairs of one :class:`ConfinedProblem`.

    ``vectors[:, k]`` holds the orthonormal ``y`` coefficients; the reduced
    radial function at the interior radii is ``psi = y / sqrt(w r')``, so
    that the Lobatto quadrature of ``psi**2`` is one.
    """

    problem: ConfinedProblem
    energies: np.ndarray
    vectors: np.ndarray
    radii: np.ndarray
    measure: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.energies)

    def index(self, state: StateLabel) -> int:
        if state.ell != self.problem.ell:
            raise KeyError(f"state {state} not in an l={self.problem.ell} spectrum")
        if state.k >= len(self.energies):
            raise KeyError(f"state {state} beyond the {len(self.energies)} computed levels")
        return state.k

    def energy(self, state: StateLabel) -> float:
        return float(self.energies[self.index(state)])

    def psi(self, state_or_k) -> np.ndarray:
        k = state_or_k if isinstance(state_or_k, (int, np.integer)) else self.index(state_or_k)
        return self.vectors[:, k] / np.sqrt(self.measure)

    def labels(self) -> list[StateLabel]:
        return [StateLabel.from_index(self.problem.ell, k) for k in range(len(self))]


def _interior(problem):
    grid = lobatto_grid(problem.order)
    mapping = problem.mapping
    x = grid.nodes
    r = map_to_radius(mapping, x)
    jac = mapping_jacobian(mapping, x)
    return grid, r, jac


def assemble(problem: ConfinedProblem) -> np.ndarray:
    """Symmetric ``(N-1) x (N-1)`` Hamiltonian over the interior nodes."""
    grid, r, jac = _interior(problem)
    w = grid.weights
    g = np.sqrt(w / jac)[:, None] * grid.d1[:, 1:-1]
    s = 1.0 / np.sqrt(w[1:-1] * jac[1:-1])
    g *= s[None, :]
    h = 0.5 * (g.T @ g)

    ri = r[1:-1]
    ell = problem.ell
    with np.errstate(all="ignore"):
        veff = ell * (ell + 1) / (2.0 * ri**2) + problem.potential(ri)
    bad = np.flatnonzero(~np.isfinite(veff))
    if bad.size:
        j = int(bad[0]) + 1
        raise SolverError(f"potential is not finite at node {j} (r = {r[j]!r})")
    h[np.diag_indices_from(h)] += veff

    asym = np.max(np.abs(h - h.T))
    if asym > 1e-12 * max(1.0, np.max(np.abs(h))):
        raise SolverError(f"assembled Hamiltonian asymmetric by {asym:.3e}")
    return 0.5 * (h + h.T)


def count_nodes(values, rel_tol: float = 1e-8) -> int:
    """Sign changes of ``values``, ignoring entries below ``rel_tol * max``.

    Skipping tiny entries keeps round-off in exponentially small tails from
    registering as spurious nodes.
    """
    values = np.asarray(values)
    big = values[np.abs(values) > rel_tol * np.max(np.abs(values))]
    return int(np.count_nonzero(np.signbit(big[1:]) != np.signbit(big[:-1])))


def solve(problem: ConfinedProblem, count: int) -> Spectrum:
    """Lowest ``count`` eigenpairs, normalized and node-checked.

    Each eigenvector's sign is fixed so its first significant value is
    positive (``psi'(0+) > 0``).
    """
    size = problem.order - 1
    if not 1 <= count <= size:
        raise ValueError(f"count must be in [1, {size}], got {count!r}")
    h = assemble(problem)
    try:
        # full-spectrum tridiagonal QL/QR; subset drivers lose digits on this graded matrix
        energies, vectors = linalg.eigh(h, driver="ev")
    except linalg.LinAlgError as exc:
        diag = np.diag(h)
        raise SolverError(
            f"eigensolver failed ({exc}); diag range [{diag.min():.3e}, {diag.max():.3e}],"
            f" max |H| {np.max(np.abs(h)):.3e}"
        ) from exc

    vectors = vectors[:, :count].copy()
    # Rayleigh quotients: the vectors are accurate where H is large, so this
    # removes most of the eps*||H|| round-off the tridiagonal QL leaves in E
    energies = np.einsum("ij,ij->j", vectors, h @ vectors)
    for k in range(count):
        v = vectors[:, k]
        first = np.flatnonzero(np.abs(v) > 1e-8 * np.max(np.abs(v)))[0]
        if v[first] < 0:
            vectors[:, k] = -v
        nodes = count_nodes(vectors[:, k])
        if nodes != k:
            raise LabelError(
                f"eigenvector {k} of l={problem.ell}, r_c={problem.r_c} has {nodes} nodes;"
                f" grid order {problem.order} may be too low"
            )
    if np.any(np.diff(energies) <= 0):
        raise SolverError("eigenvalues are not strictly increasing")

    grid, r, jac = _interior(problem)
    measure = grid.weights[1:-1] * jac[1:-1]
    for arr in (energies, vectors):
        arr.setflags(write=False)
    measure.setflags(write=False)
    radii = r[1:-1].copy()
    radii.setflags(write=False)
    return Spectrum(problem=problem, energies=energies, vectors=vectors, radii=radii, measure=measure)


def energy(
    potential: Potential,
    state: StateLabel,
    r_c: float,
    order: int = DEFAULT_ORDER,
    scale: float | None = None,
) -> float:
    """Confined energy of ``state`` at cavity radius ``r_c``."""
    spec = solve(ConfinedProblem(potential, state.ell, r_c, order, scale), state.k + 1)
    return float(spec.energies[state.k])


def free_limit_energies(
    potential: Potential,
    ell: int,
    count: int,
    order: int = DEFAULT_ORDER,
    tol: float = 1e-11,
    ladder: Sequence[float] = FREE_LADDER,
) -> np.ndarray:
    """Unconfined energies of the lowest ``count`` states of one ``l`` block.

    Solves on a geometric ladder of cavity radii until successive values
    agree to ``tol``. Raises :class:`UnboundStateError` if the largest
    radius is reached first or the converged energy is not negative.
    """
    prev = None
    for r_c in ladder:
        cur = solve(ConfinedProblem(potential, ell, r_c, order), count).energies
        if prev is not None and np.all(np.abs(cur - prev) <= tol):
            if np.any(cur >= 0):
                k = int(np.flatnonzero(cur >= 0)[0])
                raise UnboundStateError(
                    f"state {StateLabel.from_index(ell, k)} is unbound (E -> {cur[k]:.3e})"
                )
            return np.array(cur)
        prev = cur
    worst = int(np.argmax(np.abs(cur - prev)))
    raise UnboundStateError(
        f"state {StateLabel.from_index(ell, worst)} is unbound or tolerance {tol:g}"
        f" unreachable by r_c = {ladder[-1]:g}"
    )


def free_limit_energy(
    potential: Potential,
    state: StateLabel,
    order: int = DEFAULT_ORDER,
    tol: float = 1e-11,
) -> float:
    """Unconfined energy of one state; see :func:`free_limit_energies`."""
    return float(free_limit_energies(potential, state.ell, state.k + 1, order, tol)[state.k])

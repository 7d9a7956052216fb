"""Central potentials ``v(r)`` for the radial problem."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = ["Coulomb", "Custom", "Hulthen", "ParticleInBox", "Potential", "parse_potential"]


class Potential:
    """Base class; subclasses are callables ``v(r)`` acting on arrays."""

    kind: str = "potential"

    def __call__(self, r):
        raise NotImplementedError

    def describe(self) -> dict:
        return {"kind": self.kind}


@dataclass(frozen=True)
class Coulomb(Potential):
    """Hydrogenic ``v(r) = -Z / r``."""

    charge: float = 1.0
    kind = "coulomb"

    def __post_init__(self):
        if not self.charge > 0:
            raise ValueError(f"Coulomb charge must be positive, got {self.charge!r}")

    def __call__(self, r):
        return -self.charge / np.asarray(r, dtype=float)

    def describe(self):
        return {"kind": self.kind, "charge": self.charge}


@dataclass(frozen=True)
class Hulthen(Potential):
    """Screened Coulomb ``v(r) = -delta e^{-delta r} / (1 - e^{-delta r})``."""

    delta: float
    kind = "hulthen"

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError(f"Hulthen screening must be positive, got {self.delta!r}")

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        # delta / (e^{delta r} - 1), stable for small delta*r
        return -self.delta / np.expm1(self.delta * r)

    def describe(self):
        return {"kind": self.kind, "delta": self.delta}


@dataclass(frozen=True)
class ParticleInBox(Potential):
    """Free particle, ``v(r) = 0``; used as an analytic test case."""

    kind = "box"

    def __call__(self, r):
        return np.zeros_like(np.asarray(r, dtype=float))


@dataclass(frozen=True)
class Custom(Potential):
    """User-supplied radial function."""

    func: Callable = field(compare=False)
    name: str = "custom"
    kind = "custom"

    def __call__(self, r):
        return np.asarray(self.func(np.asarray(r, dtype=float)), dtype=float)

    def describe(self):
        return {"kind": self.kind, "name": self.name}


def parse_potential(kind: str, charge: float | None = None, delta: float | None = None) -> Potential:
    """Build a potential from its CLI/config name."""
    kind = kind.lower()
    if kind in ("coulomb", "h", "hydrogen"):
        return Coulomb(1.0 if charge is None else float(charge))
    if kind in ("hulthen", "hulthén"):
        if delta is None:
            raise ValueError("hulthen potential needs a screening parameter delta")
        return Hulthen(float(delta))
    if kind in ("box", "free", "particle-in-box"):
        return ParticleInBox()
    raise ValueError(f"unknown potential kind {kind!r}")

"""Physical parameters, the dimensionless reduction and the shared value types.

Everything downstream of this module works in canonical units where the
half-separation ``L`` is 1 and energies are measured in
``e0 = hbar**2 / (2 m L**2)``. In those units the potential is
``-alpha * [delta(x + L) + delta(x - L)]`` with ``alpha = 1 / a`` and a bound
state with decay parameter ``xi`` has energy ``-xi**2``.

Sign convention: a positive ``alpha`` multiplies the negative (attractive)
potential, so ``a > 0`` is a pair of wells and ``a < 0`` a pair of barriers.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"

    @property
    def sign(self) -> int:
        """+1 for even, -1 for odd: ``phi(-x) = sign * phi(x)``."""
        return 1 if self is Parity.EVEN else -1


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class PhysicalParams:
    """Dimensionful inputs: Planck constant, mass, delta strength, half-separation."""

    hbar: float
    mass: float
    alpha: float
    halfsep: float

    def __post_init__(self) -> None:
        for name in ("hbar", "mass", "alpha", "halfsep"):
            object.__setattr__(self, name, _require_finite(name, getattr(self, name)))
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")
        if self.mass <= 0:
            raise ValueError("mass must be positive")
        if self.halfsep <= 0:
            raise ValueError("halfsep must be positive")
        if self.alpha == 0:
            raise ValueError("alpha must be nonzero")


@dataclass(frozen=True)
class Coupling:
    """Dimensionless strength ``a = hbar**2 / (2 m alpha L)``.

    ``a > 0`` is attractive, ``a < 0`` repulsive. ``a = 0`` is the singular
    infinite-strength point and is rejected.
    """

    a: float

    def __post_init__(self) -> None:
        a = _require_finite("a", self.a)
        if a == 0:
            raise ValueError("a = 0 is singular (infinite delta strength)")
        object.__setattr__(self, "a", a)

    @property
    def attractive(self) -> bool:
        return self.a > 0

    @property
    def alpha(self) -> float:
        """Delta strength in canonical units (L = 1, e0 = 1)."""
        return 1.0 / self.a


@dataclass(frozen=True)
class EnergyScale:
    e0: float = 1.0

    def __post_init__(self) -> None:
        e0 = _require_finite("e0", self.e0)
        if e0 <= 0:
            raise ValueError("e0 must be positive")
        object.__setattr__(self, "e0", e0)


CANONICAL = EnergyScale(1.0)


@dataclass(frozen=True)
class BoundState:
    """One bound state: parity, decay parameter ``xi`` and its energy.

    ``energy`` is expressed in the same units as the scale it was built with
    (``-xi**2`` in canonical units).
    """

    parity: Parity
    xi: float
    coupling: Coupling
    energy: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.xi) and self.xi > 0):
            raise ValueError(f"xi must be positive and finite, got {self.xi!r}")
        if not self.energy <= 0:
            raise ValueError("bound-state energy must be non-positive")

    @property
    def a(self) -> float:
        return self.coupling.a


def coupling_from_physical(p: PhysicalParams) -> Coupling:
    return Coupling(p.hbar**2 / (2.0 * p.mass * p.alpha * p.halfsep))


def scale_from_physical(p: PhysicalParams) -> EnergyScale:
    return EnergyScale(p.hbar**2 / (2.0 * p.mass * p.halfsep**2))


def energy_from_xi(xi: float, scale: EnergyScale = CANONICAL) -> float:
    """Bound-state energy ``-xi**2 * e0``."""
    xi = _require_finite("xi", xi)
    if xi <= 0:
        raise ValueError("xi must be positive for a bound state")
    return -xi * xi * scale.e0


def make_state(
    parity: Parity, xi: float, coupling: Coupling, scale: EnergyScale = CANONICAL
) -> BoundState:
    return BoundState(parity, xi, coupling, energy_from_xi(xi, scale))

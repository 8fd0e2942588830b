"""Physical constants and the derived length/energy scales.

The default unit system is trap units: ``hbar = mass = 1`` and lengths
measured in units of the trap length.  SI values can be passed explicitly;
nothing here converts units behind the caller's back.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

DILUTE_THRESHOLD = 1e-2


@dataclass(frozen=True)
class PhysicalParams:
    hbar: float = 1.0
    mass: float = 1.0
    scattering_length: float = 0.0
    trap_frequency: float = 1.0
    density: Optional[float] = None
    effective_radius: Optional[float] = None

    def __post_init__(self) -> None:
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        if not self.mass > 0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        if not self.trap_frequency > 0:
            raise ValueError(f"trap_frequency must be positive, got {self.trap_frequency}")
        if self.density is not None and self.density < 0:
            raise ValueError(f"density must be non-negative, got {self.density}")
        if self.effective_radius is not None and self.effective_radius < 0:
            raise ValueError(f"effective_radius must be non-negative, got {self.effective_radius}")


class Diluteness(NamedTuple):
    value: float
    dilute: bool


def coupling_constant(p: PhysicalParams) -> float:
    """Contact coupling ``g = 4 pi a hbar^2 / m``; the sign follows ``a``."""
    return 4.0 * math.pi * p.scattering_length * p.hbar**2 / p.mass


def trap_length(p: PhysicalParams) -> float:
    """Harmonic trap length ``sqrt(hbar / (2 m omega))``."""
    if not p.trap_frequency > 0:
        raise ValueError("trap_frequency must be positive")
    return math.sqrt(p.hbar / (2.0 * p.mass * p.trap_frequency))


def healing_length(p: PhysicalParams, mu: float) -> float:
    """Healing length ``hbar / sqrt(2 m mu)``.

    A non-positive chemical potential means there is no condensate to heal,
    so the scale is undefined and ``ValueError`` is raised.
    """
    if not mu > 0:
        raise ValueError(f"healing length needs mu > 0, got {mu}")
    return p.hbar / math.sqrt(2.0 * p.mass * mu)


def diluteness(p: PhysicalParams, threshold: float = DILUTE_THRESHOLD) -> Diluteness:
    """Gas parameter ``n r_e^3`` and whether it sits below ``threshold``."""
    if p.density is None or p.effective_radius is None:
        raise ValueError("diluteness needs both density and effective_radius")
    value = p.density * p.effective_radius**3
    return Diluteness(value, value < threshold)

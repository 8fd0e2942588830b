"""Closed-form zero-energy solution of the source-driven radial equation.

The pair wavefunction solves ``psi'' + psi'/r = -eps`` on the annulus
``R_a <= r <= R`` with ``psi(R_a) = 0`` and ``psi(R) = Pi``.  It is often
loosely called the 1D solution; mathematically it is the circularly
symmetric reduction of a 2D problem, and that is what is solved here.

The curvature energy ``(hbar^2 / 2m) * integral |grad psi|^2 dA`` is
available three ways: adaptive quadrature, an independently derived closed
form, and an as-printed literature closed form transcribed verbatim.  The
first two must agree; the printed one is kept for auditing only, because its
epsilon-dependent terms do not match the integral (they are not even
dimensionally homogeneous).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import PhysicalParams
from .quadrature import DEFAULT_MAX_EVALS, integrate


@dataclass(frozen=True)
class ZeroEnergyConfig:
    """Annulus radii, source strength ``eps`` and outer amplitude ``Pi``.

    Negative ``eps`` is rejected unless ``allow_negative_source`` is set.
    """

    inner_radius: float
    outer_radius: float
    source: float
    boundary_amplitude: float
    allow_negative_source: bool = False

    def __post_init__(self) -> None:
        if not 0 < self.inner_radius < self.outer_radius:
            raise ValueError(
                f"need 0 < inner_radius < outer_radius, got "
                f"{self.inner_radius}, {self.outer_radius}"
            )
        if not math.isfinite(self.outer_radius):
            raise ValueError("outer_radius must be finite")
        if self.source < 0 and not self.allow_negative_source:
            raise ValueError(f"source must be >= 0, got {self.source}")
        if not (math.isfinite(self.source) and math.isfinite(self.boundary_amplitude)):
            raise ValueError("source and boundary_amplitude must be finite")

    @property
    def log_ratio(self) -> float:
        return math.log(self.outer_radius / self.inner_radius)

    @property
    def log_coefficient(self) -> float:
        """Coefficient ``A`` of the ``1/r`` part of ``psi'``."""
        ra, r = self.inner_radius, self.outer_radius
        return (self.source * (r * r - ra * ra) / 4.0 + self.boundary_amplitude) / self.log_ratio

    @property
    def scale(self) -> float:
        """Magnitude of psi used to judge absolute tolerances."""
        return max(abs(self.boundary_amplitude), abs(self.source) * self.outer_radius**2)


@dataclass(frozen=True)
class EnergyBreakdown:
    quadrature_value: float
    derived_closed_form: float
    paper_eq8_value: float
    relative_gap_quadrature_vs_derived: float
    relative_gap_quadrature_vs_paper: float


def _check_domain(cfg: ZeroEnergyConfig, r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if np.any(r < cfg.inner_radius) or np.any(r > cfg.outer_radius) or np.any(np.isnan(r)):
        raise ValueError(
            f"r must lie in [{cfg.inner_radius}, {cfg.outer_radius}]"
        )
    return r


def _evaluate(cfg: ZeroEnergyConfig, r: np.ndarray, dtype=float):
    """Return (source shape, log profile) at ``r`` computed in ``dtype``."""
    ra = dtype(cfg.inner_radius)
    rr = dtype(cfg.outer_radius)
    r = r.astype(dtype)
    u = np.log(r / ra) / np.log(rr / ra)
    # ln(r/R) written as ln(r/R_a) - ln(R/R_a) so that both ends vanish exactly
    shape = dtype(0.25) * ((rr * rr - r * r) + (rr * rr - ra * ra) * (u - dtype(1)))
    return shape, u


def source_shape(cfg: ZeroEnergyConfig, r):
    """Coefficient of ``eps`` in psi; non-negative on the annulus."""
    shape, _ = _evaluate(cfg, _check_domain(cfg, r))
    return shape[()] if shape.ndim == 0 else shape


def psi(cfg: ZeroEnergyConfig, r):
    """Evaluate the analytic solution at ``r`` (scalar or array).

    Boundary values are reproduced exactly: ``psi(R_a) == 0`` and
    ``psi(R) == Pi`` bit for bit.
    """
    shape, u = _evaluate(cfg, _check_domain(cfg, r))
    out = cfg.source * shape + cfg.boundary_amplitude * u
    return out[()] if out.ndim == 0 else out


def psi_prime(cfg: ZeroEnergyConfig, r):
    r = _check_domain(cfg, r)
    out = -0.5 * cfg.source * r + cfg.log_coefficient / r
    return out[()] if out.ndim == 0 else out


def pde_residual(cfg: ZeroEnergyConfig, r: float, h: float) -> float:
    """Centred-difference estimate of ``psi'' + psi'/r + eps`` at ``r``.

    Zero for the exact solution up to an O(h^2) truncation term,
    ``-h^2 A / (6 r^4)`` to leading order.
    """
    if not h > 0:
        raise ValueError("h must be positive")
    if not (cfg.inner_radius < r - h and r + h < cfg.outer_radius):
        raise ValueError("stencil [r - h, r + h] must lie strictly inside the annulus")
    # Extended precision keeps rounding in the second difference (~ulp(psi)/h^2)
    # well below the O(h^2) truncation term being measured.
    ld = np.longdouble
    rl, hl = ld(r), ld(h)
    shape, u = _evaluate(cfg, np.array([rl - hl, rl, rl + hl], dtype=ld), ld)
    lo, mid, hi = ld(cfg.source) * shape + ld(cfg.boundary_amplitude) * u
    d2 = (hi - ld(2) * mid + lo) / (hl * hl)
    d1 = (hi - lo) / (ld(2) * hl)
    return float(d2 + d1 / rl + ld(cfg.source))


def _prefactor(p: PhysicalParams) -> float:
    # (hbar^2 / 2m) times the 2*pi of the angular integral
    return math.pi * p.hbar**2 / p.mass


def delta_energy_quadrature(
    cfg: ZeroEnergyConfig,
    p: PhysicalParams,
    tol: float = 1e-10,
    max_evals: int = DEFAULT_MAX_EVALS,
) -> float:
    """Curvature energy by adaptive quadrature of ``psi'(r)^2 r``."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    a_coef, eps = cfg.log_coefficient, cfg.source

    def integrand(r):
        d = -0.5 * eps * r + a_coef / r
        return d * d * r

    res = integrate(integrand, cfg.inner_radius, cfg.outer_radius, rtol=tol, max_evals=max_evals)
    return _prefactor(p) * res.value


def delta_energy_closed_form(cfg: ZeroEnergyConfig, p: PhysicalParams) -> float:
    """Curvature energy from the term-by-term integral of ``(-eps r/2 + A/r)^2 r``."""
    ra, r = cfg.inner_radius, cfg.outer_radius
    eps, a_coef = cfg.source, cfg.log_coefficient
    integral = (
        eps * eps * (r**4 - ra**4) / 16.0
        - eps * a_coef * (r * r - ra * ra) / 2.0
        + a_coef * a_coef * cfg.log_ratio
    )
    return _prefactor(p) * integral


def delta_energy_paper_eq8(cfg: ZeroEnergyConfig, p: PhysicalParams) -> float:
    """The as-printed literature closed form, transcribed term for term.

    Matches the true integral only at ``eps = 0``.  Do not use it as a
    reference value.
    """
    ra, r = cfg.inner_radius, cfg.outer_radius
    eps, amp = cfg.source, cfg.boundary_amplitude
    lg = cfg.log_ratio
    width = r - ra
    braces = eps * (
        (r**3 - ra**3) / 12.0
        + eps * (r * r - ra * ra) / lg * (1.0 / 16.0 - width / 4.0)
    ) + amp / lg * (amp + eps * width * (width / 2.0 - 1.0))
    return _prefactor(p) * braces


def relative_gap(value: float, reference: float) -> float:
    if value == reference:
        return 0.0
    if reference == 0.0:
        return math.inf
    return abs(value - reference) / abs(reference)


def energy_audit(cfg: ZeroEnergyConfig, p: PhysicalParams, tol: float = 1e-10) -> EnergyBreakdown:
    quad = delta_energy_quadrature(cfg, p, tol)
    derived = delta_energy_closed_form(cfg, p)
    printed = delta_energy_paper_eq8(cfg, p)
    return EnergyBreakdown(
        quadrature_value=quad,
        derived_closed_form=derived,
        paper_eq8_value=printed,
        relative_gap_quadrature_vs_derived=relative_gap(derived, quad),
        relative_gap_quadrature_vs_paper=relative_gap(printed, quad),
    )

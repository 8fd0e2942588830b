"""Stationary 1D Gross-Pitaevskii ground state in a harmonic trap.

The ground state is found by normalised gradient flow (imaginary time).
Each step solves

    (1 + dt * (T + V + g |psi_old|^2)) psi_new = psi_old

and rescales ``psi_new`` to the particle number.  ``T`` is the centred
second-difference kinetic operator and ``V = m omega^2 x^2 / 2``.  The
density coefficient is frozen at the old iterate, so every step is a single
tridiagonal solve.  A fully explicit Euler step is kept for comparison; it
is only stable below ``explicit_stability_bound``.

The 1D coupling ``g`` is a direct input.  No dimensional reduction from the
3D scattering length is imposed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np
from scipy.linalg import solve_banded

from .params import PhysicalParams, trap_length
from .radial_bvp import RadialGrid, WaveFunction

DEFAULT_DT = 1e-2
MAX_HALVINGS = 10
# tolerated energy rise per step, relative to max(1, |E|)
ENERGY_SLACK = 1e-12
GROWTH_LIMIT = 10.0


class StepSizeError(ArithmeticError):
    pass


class GroundStateNotConverged(RuntimeError):
    """Carries the last iterate so callers can still inspect or dump it."""

    def __init__(self, message: str, state: "GroundState"):
        super().__init__(message)
        self.state = state


@dataclass(frozen=True)
class GpeProblem:
    grid: RadialGrid
    trap_frequency: float
    coupling: float
    particle_number: float
    params: PhysicalParams = field(default_factory=PhysicalParams)

    def __post_init__(self) -> None:
        if abs(self.grid.r_min + self.grid.r_max) > self.grid.spacing:
            raise ValueError("GPE grid must be symmetric about x = 0")
        if not self.particle_number > 0:
            raise ValueError("particle_number must be positive")
        if self.coupling < 0:
            raise ValueError("only repulsive coupling (g >= 0) is supported")
        if not self.trap_frequency > 0:
            raise ValueError("trap_frequency must be positive")

    @classmethod
    def harmonic(
        cls,
        coupling: float,
        particle_number: float,
        trap_frequency: float = 1.0,
        points: int = 2001,
        half_width: Optional[float] = None,
        params: Optional[PhysicalParams] = None,
    ) -> "GpeProblem":
        """Build a problem, choosing the box as 8 x max(trap length, TF radius)."""
        base = params or PhysicalParams()
        base = PhysicalParams(
            hbar=base.hbar,
            mass=base.mass,
            scattering_length=base.scattering_length,
            trap_frequency=trap_frequency,
            density=base.density,
            effective_radius=base.effective_radius,
        )
        if half_width is None:
            half_width = default_half_width(base, coupling, particle_number)
        return cls(RadialGrid.symmetric(half_width, points), trap_frequency, coupling, particle_number, base)

    @property
    def x(self) -> np.ndarray:
        return self.grid.nodes

    @property
    def potential(self) -> np.ndarray:
        m, w = self.params.mass, self.trap_frequency
        return 0.5 * m * w * w * self.x**2

    @property
    def kinetic_scale(self) -> float:
        """``hbar^2 / (2 m h^2)``, the off-diagonal magnitude of ``T``."""
        return self.params.hbar**2 / (2.0 * self.params.mass * self.grid.spacing**2)


@dataclass(frozen=True)
class SolveReport:
    iterations: int
    final_residual: float
    converged: bool
    wall_steps: int
    final_dt: float = DEFAULT_DT
    energy_history: tuple[float, ...] = ()
    max_norm_drift: float = 0.0


@dataclass(frozen=True)
class GroundState:
    wavefunction: WaveFunction
    chemical_potential: float
    total_energy: float
    report: SolveReport


class EnergyTerms(NamedTuple):
    kinetic: float
    potential: float
    interaction: float

    @property
    def total(self) -> float:
        return self.kinetic + self.potential + self.interaction


def default_half_width(p: PhysicalParams, coupling: float, particle_number: float) -> float:
    scale = trap_length(p)
    if coupling > 0:
        mu = _tf_mu(coupling, particle_number, p.trap_frequency, p.mass)
        scale = max(scale, math.sqrt(2.0 * mu / p.mass) / p.trap_frequency)
    return 8.0 * scale


def _check_grid(prob: GpeProblem, psi: WaveFunction) -> None:
    if psi.grid != prob.grid:
        raise ValueError("wavefunction grid does not match the problem grid")


def _h_interior(prob: GpeProblem, u: np.ndarray, density: np.ndarray) -> np.ndarray:
    """Apply H to interior values ``u`` with zero Dirichlet ends."""
    k = prob.kinetic_scale
    padded = np.concatenate(([0.0], u, [0.0]))
    lap = padded[2:] - 2.0 * u + padded[:-2]
    return -k * lap + (prob.potential[1:-1] + prob.coupling * density) * u


def apply_hamiltonian(prob: GpeProblem, psi: WaveFunction) -> WaveFunction:
    """``(-hbar^2/2m) D2 psi + V psi + g |psi|^2 psi`` on interior nodes; zero at the ends."""
    _check_grid(prob, psi)
    u = psi.values[1:-1]
    out = np.zeros(prob.grid.points)
    out[1:-1] = _h_interior(prob, u, u * u)
    return WaveFunction(prob.grid, out)


def norm(prob: GpeProblem, psi: WaveFunction) -> float:
    """``integral |psi|^2 dx`` (trapezoid; the end nodes carry zero)."""
    return prob.grid.spacing * float(np.sum(psi.values[1:-1] ** 2))


def energy_functional(prob: GpeProblem, psi: WaveFunction) -> EnergyTerms:
    """Kinetic, trap and interaction energies of ``psi``.

    The kinetic term is the edge sum ``(hbar^2/2m) sum (dpsi/h)^2 h``, which
    by summation by parts equals ``<psi| T |psi>`` for the discrete Laplacian.
    """
    _check_grid(prob, psi)
    h = prob.grid.spacing
    v = psi.values.copy()
    v[0] = v[-1] = 0.0
    grad = np.diff(v) / h
    kinetic = prob.params.hbar**2 / (2.0 * prob.params.mass) * h * float(np.sum(grad * grad))
    dens = v * v
    potential = h * float(np.sum(prob.potential * dens))
    interaction = 0.5 * prob.coupling * h * float(np.sum(dens * dens))
    return EnergyTerms(kinetic, potential, interaction)


def chemical_potential(prob: GpeProblem, psi: WaveFunction) -> float:
    """Rayleigh quotient ``<psi|H[psi]|psi> / <psi|psi>``."""
    _check_grid(prob, psi)
    n = norm(prob, psi)
    if n == 0.0:
        raise ValueError("chemical potential undefined for a zero wavefunction")
    terms = energy_functional(prob, psi)
    return (terms.kinetic + terms.potential + 2.0 * terms.interaction) / n


def residual(prob: GpeProblem, psi: WaveFunction, mu: Optional[float] = None) -> float:
    """``||H psi - mu psi|| / ||psi||`` over interior nodes."""
    if mu is None:
        mu = chemical_potential(prob, psi)
    u = psi.values[1:-1]
    r = _h_interior(prob, u, u * u) - mu * u
    return float(np.linalg.norm(r) / np.linalg.norm(u))


def explicit_stability_bound(prob: GpeProblem, psi: WaveFunction) -> float:
    """Largest stable forward-Euler step, ``2 / lambda_max`` with a Gershgorin bound."""
    u = psi.values[1:-1]
    lam = 4.0 * prob.kinetic_scale + float(np.max(prob.potential)) + prob.coupling * float(np.max(u * u))
    return 2.0 / lam


def _renormalise(prob: GpeProblem, values: np.ndarray) -> np.ndarray:
    n = prob.grid.spacing * float(np.sum(values[1:-1] ** 2))
    return values * math.sqrt(prob.particle_number / n)


def imaginary_time_step(
    prob: GpeProblem,
    psi: WaveFunction,
    dt: float,
    scheme: str = "semi-implicit",
) -> WaveFunction:
    """One normalised gradient-flow step.

    Raises :class:`StepSizeError` if the explicit scheme is asked for a step
    above its stability bound, or if the un-normalised norm grows more than
    tenfold.
    """
    _check_grid(prob, psi)
    if not dt > 0:
        raise ValueError("dt must be positive")
    u = psi.values[1:-1]
    dens = u * u

    if scheme == "semi-implicit":
        k = prob.kinetic_scale
        ab = np.empty((3, u.size))
        ab[0, :] = -dt * k
        ab[2, :] = -dt * k
        ab[1, :] = 1.0 + dt * (2.0 * k + prob.potential[1:-1] + prob.coupling * dens)
        new = solve_banded((1, 1), ab, u, check_finite=False)
    elif scheme == "explicit":
        bound = explicit_stability_bound(prob, psi)
        if dt > bound:
            raise StepSizeError(f"dt={dt:g} exceeds explicit stability bound {bound:g}")
        new = u - dt * _h_interior(prob, u, dens)
    else:
        raise ValueError(f"unknown scheme {scheme!r}")

    old_norm = float(np.linalg.norm(u))
    new_norm = float(np.linalg.norm(new))
    if not math.isfinite(new_norm) or new_norm == 0.0 or new_norm > GROWTH_LIMIT * old_norm:
        raise StepSizeError(f"unstable step: norm ratio {new_norm / old_norm:g} at dt={dt:g}")

    values = np.zeros(prob.grid.points)
    values[1:-1] = new
    return WaveFunction(prob.grid, _renormalise(prob, values))


def initial_guess(prob: GpeProblem) -> WaveFunction:
    """Gaussian of width equal to the trap length, normalised to N."""
    width = trap_length(prob.params)
    values = np.exp(-0.5 * (prob.x / width) ** 2)
    values[0] = values[-1] = 0.0
    return WaveFunction(prob.grid, _renormalise(prob, values))


def solve_ground_state(
    prob: GpeProblem,
    tol: float = 1e-8,
    max_iters: int = 100_000,
    dt: float = DEFAULT_DT,
    initial: Optional[WaveFunction] = None,
    scheme: str = "semi-implicit",
) -> GroundState:
    """Iterate gradient-flow steps until ``residual <= tol * |mu|``.

    A step that is unstable or raises the energy is retried at half the
    step size, at most ``MAX_HALVINGS`` times over the whole run.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    psi = initial if initial is not None else initial_guess(prob)
    _check_grid(prob, psi)
    psi = WaveFunction(prob.grid, _renormalise(prob, psi.values))

    energy = energy_functional(prob, psi).total
    history = [energy]
    halvings = 0
    wall_steps = 0
    drift = 0.0
    mu = chemical_potential(prob, psi)
    res = residual(prob, psi, mu)
    converged = res <= tol * abs(mu)
    iterations = 0

    def state(flag: bool) -> GroundState:
        report = SolveReport(
            iterations=iterations,
            final_residual=res,
            converged=flag,
            wall_steps=wall_steps,
            final_dt=dt,
            energy_history=tuple(history),
            max_norm_drift=drift,
        )
        return GroundState(psi, mu, energy, report)

    while not converged and iterations < max_iters:
        while True:
            wall_steps += 1
            try:
                trial = imaginary_time_step(prob, psi, dt, scheme)
                trial_energy = energy_functional(prob, trial).total
                accepted = trial_energy <= energy + ENERGY_SLACK * max(1.0, abs(energy))
            except StepSizeError:
                accepted = False
            if accepted:
                break
            if halvings == MAX_HALVINGS:
                raise GroundStateNotConverged(
                    f"step size exhausted after {MAX_HALVINGS} halvings (dt={dt:g})",
                    state(False),
                )
            dt *= 0.5
            halvings += 1

        psi, energy = trial, trial_energy
        iterations += 1
        history.append(energy)
        drift = max(drift, abs(norm(prob, psi) / prob.particle_number - 1.0))
        mu = chemical_potential(prob, psi)
        res = residual(prob, psi, mu)
        converged = res <= tol * abs(mu)

    if not converged:
        raise GroundStateNotConverged(
            f"residual {res:.3e} above {tol:g} * |mu| after {iterations} iterations",
            state(False),
        )
    return state(True)


def _tf_mu(coupling: float, particle_number: float, omega: float, mass: float) -> float:
    return 0.5 * (1.5 * coupling * particle_number * omega * math.sqrt(mass)) ** (2.0 / 3.0)


def thomas_fermi_mu(prob: GpeProblem) -> float:
    """Chemical potential with the kinetic term dropped.

    Integrating ``n(x) = (mu - m omega^2 x^2 / 2) / g`` over its support and
    setting it to N gives ``mu = (1/2) (3 g N omega sqrt(m) / 2)^(2/3)``.
    """
    if not prob.coupling > 0:
        raise ValueError("Thomas-Fermi limit needs g > 0")
    return _tf_mu(prob.coupling, prob.particle_number, prob.trap_frequency, prob.params.mass)

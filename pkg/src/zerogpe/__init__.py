"""Zero-energy radial solutions of the modified GPE, their cross-checks, and a 1D GPE ground-state solver."""

from .gpe import GpeProblem, GroundState, SolveReport, solve_ground_state, thomas_fermi_mu
from .params import PhysicalParams, coupling_constant, diluteness, healing_length, trap_length
from .radial_bvp import RadialGrid, WaveFunction, convergence_study, solve_bvp
from .zero_energy import EnergyBreakdown, ZeroEnergyConfig, energy_audit, psi, psi_prime

__all__ = [
    "EnergyBreakdown",
    "GpeProblem",
    "GroundState",
    "PhysicalParams",
    "RadialGrid",
    "SolveReport",
    "WaveFunction",
    "ZeroEnergyConfig",
    "convergence_study",
    "coupling_constant",
    "diluteness",
    "energy_audit",
    "healing_length",
    "psi",
    "psi_prime",
    "solve_bvp",
    "solve_ground_state",
    "thomas_fermi_mu",
    "trap_length",
]

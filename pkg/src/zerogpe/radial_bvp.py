"""Finite-difference solver for ``psi'' + psi'/r = -eps`` with Dirichlet ends.

Centred second-order stencil on a uniform mesh; boundary values are folded
into the right-hand side and the interior tridiagonal system is solved by
the Thomas algorithm.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import zero_energy
from .zero_energy import ZeroEnergyConfig

# smallest admissible |pivot| relative to the row scale
_PIVOT_FLOOR = 1e-300


class SingularSystemError(ArithmeticError):
    pass


@dataclass(frozen=True)
class RadialGrid:
    """Uniform mesh of ``points`` nodes on ``[r_min, r_max]``.

    The GPE solver reuses this as a Cartesian mesh with ``r_min < 0``; the
    radial assembly checks ``r_min > 0`` itself.
    """

    r_min: float
    r_max: float
    points: int

    def __post_init__(self) -> None:
        if not self.r_min < self.r_max:
            raise ValueError(f"need r_min < r_max, got {self.r_min}, {self.r_max}")
        if self.points < 3:
            raise ValueError(f"need at least 3 grid points, got {self.points}")

    @classmethod
    def symmetric(cls, half_width: float, points: int) -> "RadialGrid":
        return cls(-half_width, half_width, points)

    @property
    def spacing(self) -> float:
        return (self.r_max - self.r_min) / (self.points - 1)

    @property
    def nodes(self) -> np.ndarray:
        # linspace pins both end nodes exactly to r_min and r_max
        return np.linspace(self.r_min, self.r_max, self.points)


@dataclass(frozen=True)
class WaveFunction:
    grid: RadialGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.points,):
            raise ValueError(
                f"expected {self.grid.points} values, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("wavefunction contains non-finite values")
        object.__setattr__(self, "values", values)

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.nodes


@dataclass(frozen=True)
class TridiagonalSystem:
    """Interior system ``sub[i-1] u[i-1] + diag[i] u[i] + sup[i] u[i+1] = rhs[i]``.

    ``sub`` and ``sup`` have one entry fewer than ``diag``; the boundary
    couplings have already been moved into ``rhs``.
    """

    grid: RadialGrid
    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray
    rhs: np.ndarray
    left: float = 0.0
    right: float = 0.0

    def matvec(self, u: np.ndarray) -> np.ndarray:
        out = self.diag * u
        out[1:] += self.sub * u[:-1]
        out[:-1] += self.sup * u[1:]
        return out


def assemble_system(grid: RadialGrid, eps: float, pi_amp: float, psi_inner: float = 0.0) -> TridiagonalSystem:
    """Discretise the radial operator on the interior nodes of ``grid``."""
    if not grid.r_min > 0:
        raise ValueError("radial assembly needs r_min > 0 (the 1/r term)")
    h = grid.spacing
    r = grid.nodes[1:-1]
    lower = 1.0 / h**2 - 1.0 / (2.0 * h * r)
    upper = 1.0 / h**2 + 1.0 / (2.0 * h * r)
    diag = np.full(r.size, -2.0 / h**2)
    rhs = np.full(r.size, -float(eps))
    rhs[0] -= lower[0] * psi_inner
    rhs[-1] -= upper[-1] * pi_amp
    return TridiagonalSystem(
        grid=grid,
        sub=lower[1:].copy(),
        diag=diag,
        sup=upper[:-1].copy(),
        rhs=rhs,
        left=float(psi_inner),
        right=float(pi_amp),
    )


def thomas(sub: np.ndarray, diag: np.ndarray, sup: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve a tridiagonal system without pivoting."""
    n = diag.size
    if rhs.size != n or sub.size != n - 1 or sup.size != n - 1:
        raise ValueError("inconsistent tridiagonal band sizes")
    c = np.empty(n)
    d = np.empty(n)
    scale = max(float(np.max(np.abs(diag))), 1.0)
    piv = diag[0]
    if abs(piv) <= _PIVOT_FLOOR * scale or not math.isfinite(piv):
        raise SingularSystemError("zero pivot at row 0")
    c[0] = sup[0] / piv if n > 1 else 0.0
    d[0] = rhs[0] / piv
    for i in range(1, n):
        piv = diag[i] - sub[i - 1] * c[i - 1]
        if abs(piv) <= _PIVOT_FLOOR * scale or not math.isfinite(piv):
            raise SingularSystemError(f"zero pivot at row {i}")
        if i < n - 1:
            c[i] = sup[i] / piv
        d[i] = (rhs[i] - sub[i - 1] * d[i - 1]) / piv
    x = np.empty(n)
    x[-1] = d[-1]
    for i in range(n - 2, -1, -1):
        x[i] = d[i] - c[i] * x[i + 1]
    return x


def solve_tridiagonal(system: TridiagonalSystem) -> WaveFunction:
    interior = thomas(system.sub, system.diag, system.sup, system.rhs)
    values = np.concatenate(([system.left], interior, [system.right]))
    return WaveFunction(system.grid, values)


def solve_bvp(cfg: ZeroEnergyConfig, points: int) -> WaveFunction:
    grid = RadialGrid(cfg.inner_radius, cfg.outer_radius, points)
    return solve_tridiagonal(assemble_system(grid, cfg.source, cfg.boundary_amplitude))


def max_error(cfg: ZeroEnergyConfig, wf: WaveFunction) -> float:
    """Max-norm distance between a numerical solution and the closed form."""
    return float(np.max(np.abs(wf.values - zero_energy.psi(cfg, wf.nodes))))


@dataclass(frozen=True)
class ConvergenceStudy:
    points: tuple[int, ...]
    spacings: tuple[float, ...]
    errors: tuple[float, ...]
    order: float
    ratios: tuple[float, ...] = field(default=())

    @property
    def exact(self) -> bool:
        """True when every level hit the closed form to rounding."""
        return math.isinf(self.order)


def convergence_study(cfg: ZeroEnergyConfig, points_list, floor: float = 1e-13) -> ConvergenceStudy:
    """Max-norm errors per grid level and the least-squares order in h.

    If all errors are below ``floor * cfg.scale`` the discretisation is exact
    (e.g. ``eps = Pi = 0``) and ``order`` is ``inf``.
    """
    points = tuple(int(n) for n in points_list)
    if len(points) < 2:
        raise ValueError("convergence study needs at least two grid levels")
    if any(n < 3 for n in points) or any(b <= a for a, b in zip(points, points[1:])):
        raise ValueError("grid sizes must be >= 3 and strictly increasing")

    spacings = tuple((cfg.outer_radius - cfg.inner_radius) / (n - 1) for n in points)
    errors = tuple(max_error(cfg, solve_bvp(cfg, n)) for n in points)

    if max(errors) <= floor * max(cfg.scale, np.finfo(float).tiny):
        return ConvergenceStudy(points, spacings, errors, math.inf)

    ratios = tuple(e0 / e1 if e1 > 0 else math.inf for e0, e1 in zip(errors, errors[1:]))
    slope, _ = np.polyfit(np.log(spacings), np.log(errors), 1)
    return ConvergenceStudy(points, spacings, errors, float(slope), ratios)

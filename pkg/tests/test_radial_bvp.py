import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.linalg import solve_banded

from zerogpe import zero_energy
from zerogpe.radial_bvp import (
    RadialGrid,
    SingularSystemError,
    TridiagonalSystem,
    WaveFunction,
    assemble_system,
    convergence_study,
    max_error,
    solve_bvp,
    solve_tridiagonal,
    thomas,
)
from zerogpe.zero_energy import ZeroEnergyConfig

from conftest import random_configs

FIGURE_SWEEP = ZeroEnergyConfig(0.1, 1.0, 0.01, 0.01)


class TestGrid:
    def test_nodes_and_spacing(self):
        g = RadialGrid(1.0, 2.0, 5)
        assert g.spacing == 0.25
        np.testing.assert_array_equal(g.nodes, [1.0, 1.25, 1.5, 1.75, 2.0])

    def test_end_nodes_exact(self):
        g = RadialGrid(0.1, 1.0, 2001)
        assert g.nodes[0] == 0.1 and g.nodes[-1] == 1.0

    @pytest.mark.parametrize("args", [(2.0, 1.0, 5), (1.0, 1.0, 5), (0.0, 1.0, 2)])
    def test_invalid(self, args):
        with pytest.raises(ValueError):
            RadialGrid(*args)

    def test_wavefunction_validation(self):
        g = RadialGrid(1.0, 2.0, 3)
        with pytest.raises(ValueError):
            WaveFunction(g, np.zeros(4))
        with pytest.raises(ValueError):
            WaveFunction(g, np.array([0.0, np.nan, 1.0]))


class TestAssembly:
    def test_three_points(self):
        g = RadialGrid(1.0, 3.0, 3)
        h, r1 = 1.0, 2.0
        s = assemble_system(g, 0.5, 2.0)
        assert s.sub.size == 0 and s.sup.size == 0
        assert s.diag[0] == -2 / h**2
        expected = -0.5 - 0.0 * (1 / h**2 - 1 / (2 * h * r1)) - 2.0 * (1 / h**2 + 1 / (2 * h * r1))
        assert s.rhs[0] == pytest.approx(expected, rel=1e-15)

    def test_homogeneous_rhs_zero(self):
        s = assemble_system(RadialGrid(0.5, 2.0, 11), 0.0, 0.0)
        assert np.all(s.rhs == 0.0)

    def test_hand_assembled_five_points(self):
        # R_a=1, R=2, N=5, eps=1, Pi=0; exact rational coefficients
        h = Fraction(1, 4)
        rs = [Fraction(5, 4), Fraction(3, 2), Fraction(7, 4)]
        lower = [1 / h**2 - 1 / (2 * h * r) for r in rs]
        upper = [1 / h**2 + 1 / (2 * h * r) for r in rs]
        s = assemble_system(RadialGrid(1.0, 2.0, 5), 1.0, 0.0)
        np.testing.assert_allclose(s.sub, [float(x) for x in lower[1:]], rtol=1e-15)
        np.testing.assert_allclose(s.sup, [float(x) for x in upper[:-1]], rtol=1e-15)
        np.testing.assert_allclose(s.diag, [-32.0] * 3, rtol=0)
        np.testing.assert_allclose(s.rhs, [-1.0] * 3, rtol=0)
        assert float(lower[0]) == pytest.approx(14.4)
        assert float(upper[2]) == pytest.approx(16 + 8 / 7)

    def test_boundary_folding(self):
        s = assemble_system(RadialGrid(1.0, 2.0, 5), 0.0, 3.0)
        np.testing.assert_allclose(s.rhs, [0.0, 0.0, -3.0 * (16 + 2 / 1.75)], rtol=1e-15)

    def test_rejects_nonpositive_inner_radius(self):
        with pytest.raises(ValueError):
            assemble_system(RadialGrid(-1.0, 1.0, 5), 0.0, 0.0)


class TestThomas:
    def test_identity(self):
        b = np.array([1.0, -2.0, 3.5, 4.0])
        x = thomas(np.zeros(3), np.ones(4), np.zeros(3), b)
        np.testing.assert_array_equal(x, b)

    def test_agrees_with_lapack_banded(self):
        rng = np.random.default_rng(0)
        n = 50
        sub, sup = rng.uniform(-1, 1, n - 1), rng.uniform(-1, 1, n - 1)
        diag = 4.0 + rng.uniform(0, 1, n)
        rhs = rng.normal(size=n)
        ab = np.zeros((3, n))
        ab[0, 1:], ab[1], ab[2, :-1] = sup, diag, sub
        np.testing.assert_allclose(thomas(sub, diag, sup, rhs), solve_banded((1, 1), ab, rhs), rtol=1e-13)

    def test_backward_error(self):
        s = assemble_system(RadialGrid(0.1, 1.0, 2001), 0.01, 0.01)
        x = thomas(s.sub, s.diag, s.sup, s.rhs)
        assert np.max(np.abs(s.matvec(x) - s.rhs)) / np.max(np.abs(s.rhs)) <= 1e-10

    def test_zero_pivot(self):
        with pytest.raises(SingularSystemError):
            thomas(np.array([1.0]), np.array([1.0, 1.0]), np.array([1.0]), np.array([1.0, 2.0]))

    def test_single_unknown(self):
        assert thomas(np.empty(0), np.array([2.0]), np.empty(0), np.array([3.0]))[0] == 1.5

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            thomas(np.zeros(2), np.ones(2), np.zeros(1), np.ones(2))

    def test_solve_tridiagonal_adds_boundaries(self):
        g = RadialGrid(1.0, 2.0, 4)
        s = TridiagonalSystem(g, np.zeros(1), np.ones(2), np.zeros(1), np.array([5.0, 6.0]), 0.0, 7.0)
        np.testing.assert_array_equal(solve_tridiagonal(s).values, [0.0, 5.0, 6.0, 7.0])


class TestSolve:
    @pytest.mark.parametrize("n", [3, 10, 101])
    def test_null_solution(self, n):
        assert np.all(solve_bvp(ZeroEnergyConfig(0.5, 2.0, 0.0, 0.0), n).values == 0.0)

    def test_harmonic_log(self):
        cfg = ZeroEnergyConfig(1.0, math.e, 0.0, 1.0)
        for n in (51, 101):
            wf = solve_bvp(cfg, n)
            exact = np.log(wf.nodes)
            h = (math.e - 1) / (n - 1)
            assert np.max(np.abs(wf.values - exact)) < h * h

    def test_e_config_error_constant(self, e_config):
        wf = solve_bvp(e_config, 1001)
        h = (math.e - 1) / 1000
        c = max_error(e_config, wf) / h**2
        # measured C = 0.0546
        assert 0.05 < c < 0.06

    @pytest.mark.parametrize("cfg", random_configs(20, seed=21, amp=(0.0, 1.0)))
    def test_discrete_maximum_principle(self, cfg):
        wf = solve_bvp(cfg, 201)
        assert np.min(wf.values) >= -1e-12

    @pytest.mark.parametrize("cfg", random_configs(30, seed=22) + [FIGURE_SWEEP])
    @pytest.mark.parametrize("n", [101, 401])
    def test_agreement_bound(self, cfg, n):
        h = (cfg.outer_radius - cfg.inner_radius) / (n - 1)
        bound = 10 * h * h * (cfg.source * cfg.outer_radius**2 + abs(cfg.boundary_amplitude))
        assert max_error(cfg, solve_bvp(cfg, n)) <= bound

    @pytest.mark.parametrize("cfg", random_configs(10, seed=23))
    def test_refinement_monotone(self, cfg):
        errs = [max_error(cfg, solve_bvp(cfg, n)) for n in (101, 201, 401, 801)]
        for a, b in zip(errs, errs[1:]):
            assert b <= 1.05 * a


class TestConvergence:
    def test_harmonic_log_order(self):
        st = convergence_study(ZeroEnergyConfig(1.0, math.e, 0.0, 1.0), [51, 101, 201])
        assert 1.9 <= st.order <= 2.1
        assert not st.exact
        assert len(st.errors) == 3

    def test_null_solution_exact(self):
        st = convergence_study(ZeroEnergyConfig(1.0, 2.0, 0.0, 0.0), [11, 21])
        assert st.exact
        assert st.errors == (0.0, 0.0)

    def test_quadratic_profile_exact(self):
        # A = 0 makes psi a pure quadratic, which the stencil reproduces
        ra, r, eps = 1.0, 2.0, 0.4
        cfg = ZeroEnergyConfig(ra, r, eps, -eps * (r * r - ra * ra) / 4)
        assert convergence_study(cfg, [11, 21, 41]).exact

    def test_figure_sweep_order(self):
        st = convergence_study(FIGURE_SWEEP, [101, 201, 401])
        assert 1.9 <= st.order <= 2.1
        assert all(3.5 <= q <= 4.5 for q in st.ratios)

    @pytest.mark.parametrize("levels", [[101], [201, 101], [2, 5]])
    def test_invalid_levels(self, levels):
        with pytest.raises(ValueError):
            convergence_study(FIGURE_SWEEP, levels)


def test_matches_analytic_module_nodes(e_config):
    wf = solve_bvp(e_config, 11)
    assert wf.values[0] == zero_energy.psi(e_config, e_config.inner_radius)
    assert wf.values[-1] == zero_energy.psi(e_config, e_config.outer_radius)

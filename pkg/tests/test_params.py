import math

import mpmath
import pytest
from hypothesis import given, strategies as st

from zerogpe.params import (
    DILUTE_THRESHOLD,
    PhysicalParams,
    coupling_constant,
    diluteness,
    healing_length,
    trap_length,
)

positive = st.floats(min_value=1e-6, max_value=1e6, allow_nan=False, allow_infinity=False)


def test_coupling_unit_inputs():
    assert coupling_constant(PhysicalParams(scattering_length=1.0)) == pytest.approx(4 * math.pi, rel=1e-15)
    assert coupling_constant(PhysicalParams(scattering_length=0.0)) == 0.0


def test_coupling_si_against_extended_precision():
    p = PhysicalParams(hbar=1.0546e-34, mass=1.443e-25, scattering_length=5.3e-9)
    mpmath.mp.dps = 40
    ref = 4 * mpmath.pi * mpmath.mpf("5.3e-9") * mpmath.mpf("1.0546e-34") ** 2 / mpmath.mpf("1.443e-25")
    # frozen from the 40-digit evaluation: 5.1332797940679041893e-51
    assert float(ref) == pytest.approx(5.133279794067904e-51, rel=1e-15)
    assert coupling_constant(p) == pytest.approx(float(ref), rel=1e-14)


def test_coupling_sign_follows_scattering_length():
    assert coupling_constant(PhysicalParams(scattering_length=-2.0)) < 0


@pytest.mark.parametrize(
    "mass, omega, expected",
    [(1.0, 0.5, 1.0), (1.0, 2.0, 0.5), (2.0, 3.0, 0.28867513459481288225)],
)
def test_trap_length(mass, omega, expected):
    assert trap_length(PhysicalParams(mass=mass, trap_frequency=omega)) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("mass, mu, expected", [(1.0, 0.5, 1.0), (0.5, 1.0, 1.0), (1.0, 2.0, 0.5)])
def test_healing_length(mass, mu, expected):
    assert healing_length(PhysicalParams(mass=mass), mu) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("mu", [0.0, -1.0])
def test_healing_length_rejects_nonpositive_mu(mu):
    with pytest.raises(ValueError):
        healing_length(PhysicalParams(), mu)


def test_diluteness_examples():
    assert diluteness(PhysicalParams(density=0.0, effective_radius=1.0)) == (0.0, True)
    assert diluteness(PhysicalParams(density=1.0, effective_radius=1.0)) == (1.0, False)
    d = diluteness(PhysicalParams(density=1e20, effective_radius=1e-9))
    assert d.value == pytest.approx(1e-7, rel=1e-12)
    assert d.dilute


def test_diluteness_threshold_is_configurable():
    p = PhysicalParams(density=1.0, effective_radius=0.2)  # 8e-3
    assert diluteness(p).dilute
    assert not diluteness(p, threshold=1e-3).dilute
    assert DILUTE_THRESHOLD == 1e-2


def test_diluteness_needs_both_inputs():
    with pytest.raises(ValueError):
        diluteness(PhysicalParams(density=1.0))


@pytest.mark.parametrize(
    "kwargs",
    [{"mass": 0.0}, {"hbar": -1.0}, {"trap_frequency": 0.0}, {"density": -1.0}, {"effective_radius": -0.1}],
)
def test_invalid_params_rejected(kwargs):
    with pytest.raises(ValueError):
        PhysicalParams(**kwargs)


@given(omega=positive, mass=positive)
def test_trap_length_scaling(omega, mass):
    p1 = PhysicalParams(mass=mass, trap_frequency=omega)
    p4 = PhysicalParams(mass=mass, trap_frequency=4 * omega)
    assert trap_length(p1) / trap_length(p4) == pytest.approx(2.0, rel=1e-12)


@given(mu1=positive, mu2=positive, mass=positive)
def test_healing_length_times_sqrt_mu_constant(mu1, mu2, mass):
    p = PhysicalParams(mass=mass)
    assert healing_length(p, mu1) * math.sqrt(mu1) == pytest.approx(healing_length(p, mu2) * math.sqrt(mu2), rel=1e-12)


# doubling is only exact for normal floats; subnormal results round differently
scattering = st.one_of(
    st.just(0.0),
    st.floats(min_value=1e-290, max_value=1e3),
    st.floats(min_value=-1e3, max_value=-1e-290),
)


@given(a=scattering, mass=positive)
def test_coupling_linear_in_scattering_length(a, mass):
    assert coupling_constant(PhysicalParams(mass=mass, scattering_length=2 * a)) == 2 * coupling_constant(
        PhysicalParams(mass=mass, scattering_length=a)
    )

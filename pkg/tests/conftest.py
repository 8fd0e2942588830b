import numpy as np
import pytest

from zerogpe.zero_energy import ZeroEnergyConfig


def random_configs(n, seed, r_inner=(0.1, 1.0), ratio=(1.5, 20.0), eps=(0.0, 1.0), amp=(-1.0, 1.0)):
    """Valid configs drawn uniformly from the given ranges."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        ra = rng.uniform(*r_inner)
        out.append(ZeroEnergyConfig(ra, ra * rng.uniform(*ratio), rng.uniform(*eps), rng.uniform(*amp)))
    return out


@pytest.fixture
def e_config():
    """R_a = 1, R = e, eps = 4, Pi = 0: the hand-checkable case."""
    return ZeroEnergyConfig(1.0, float(np.e), 4.0, 0.0)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

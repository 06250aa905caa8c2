import numpy as np
import pytest

from srflow import profiles
from srflow.lattice import LatticeState


@pytest.fixture
def generic_state():
    rho = np.array([1.0, 1.1, 1.25, 1.35, 1.4, 1.3])
    a = np.array([0.9, 1.0, 1.1, 1.1, 0.95])
    return LatticeState(xi=0.1, rho=rho, a=a, closure="none")


@pytest.fixture
def ak():
    return profiles.angenent_knopf(A=0.1)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in RESULTS:
        terminalreporter.write_line(line)

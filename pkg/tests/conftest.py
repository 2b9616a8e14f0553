import numpy as np
import pytest

from tightproj import jacobi_eigh
from tightproj._kernels import BACKENDS

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # compile the jitted kernel once so timed tests measure the algorithm
    for name in BACKENDS:
        jacobi_eigh(np.array([[2.0, 1.0], [1.0, 3.0]]), backend=name)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)

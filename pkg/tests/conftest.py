import numpy as np
import pytest
import scipy.sparse as sp

from sketchlsq.sparse import CsrMatrix


def random_csr(m, n, density=0.3, seed=0):
    rng = np.random.default_rng(seed)
    M = sp.random(m, n, density=density, random_state=rng, data_rvs=rng.standard_normal)
    return CsrMatrix.from_scipy(M)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# --- acceptance reporting ----------------------------------------------------

_CRITERIA = []


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(k, ok, detail)``."""

    def record(k, ok, detail=""):
        line = f"CRITERION {k:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        _CRITERIA.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for line in _CRITERIA:
        terminalreporter.write_line(line)

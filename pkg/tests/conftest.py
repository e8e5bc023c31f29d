import numpy as np
import pytest

from starode import LegendreSeries, fit_series

COS4 = "cos(4*t)"
OSC = "-2*pi*i*(0.1+cos(6*pi*(t+1))+cos(12*pi*(t+1)))"

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def cos4_series():
    return fit_series(lambda t: np.cos(4 * t))


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def series(*c):
    return LegendreSeries(np.array(c, dtype=complex))

import pytest

from ecsgen import ModelParams
from ecsgen.fock import TruncationSpec


@pytest.fixture
def fig2_params():
    return ModelParams(g1=1.0, g2=1.0, omega1=100.0, omega2=200.0, sign="plus")


@pytest.fixture
def fig3_params():
    return ModelParams(g1=1.0, g2=1.0, omega1=200.0, omega2=200.0, kappa=0.05)


@pytest.fixture
def small_spec():
    return TruncationSpec(6, 5)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import ACCEPTANCE_LOG
    except ImportError:
        return
    if not ACCEPTANCE_LOG:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LOG:
        terminalreporter.write_line(line)

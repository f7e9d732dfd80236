import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from gentlex import fixtures

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = Path(__file__).parent / "data"


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def A2():
    return fixtures.a2().with_prime()


@pytest.fixture(scope="session")
def A3():
    return fixtures.a3().with_prime()


@pytest.fixture(scope="session")
def D1():
    return fixtures.delta1().with_prime()


@pytest.fixture(scope="session")
def KR():
    return fixtures.kronecker().with_prime()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)

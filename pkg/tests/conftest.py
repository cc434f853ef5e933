import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from twrelay.channel import GaussianNetwork

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE = {}


@pytest.fixture
def record():
    """Store one acceptance line: record(number, ok, detail)."""
    def _record(number, ok, detail):
        ACCEPTANCE[number] = (bool(ok), detail)
        print(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")


def unit_gaussian(m):
    return GaussianNetwork(np.ones((m, m)), np.ones(m), np.ones(m))


@pytest.fixture
def rng():
    return np.random.default_rng(20161015)

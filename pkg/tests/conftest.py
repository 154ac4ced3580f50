import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from wvuncertainty import PAULI_X, PAULI_Z, EstimationSetup, PureState

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def reference_state():
    """(1, i)/sqrt(2): Bloch angles theta = phi = pi/2."""
    return PureState(np.array([1, 1j]) / np.sqrt(2))


@pytest.fixture
def reference_setup(reference_state):
    return EstimationSetup(PAULI_X, reference_state, t0=0.0)


@pytest.fixture
def sx():
    return PAULI_X


@pytest.fixture
def sz():
    return PAULI_Z


_ACCEPTANCE: list[str] = []


@pytest.fixture
def acceptance_log():
    """Record one PASS/FAIL line; echoed immediately and again in the terminal summary."""

    def log(criterion: str, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}"
        _ACCEPTANCE.append(line)
        print(line)

    return log


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)

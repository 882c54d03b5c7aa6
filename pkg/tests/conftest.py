import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def bm_increments(rng):
    """Increments of a standard Brownian motion on [0, 1] with n = 2000."""
    n = 2000
    return rng.standard_normal(n) / np.sqrt(n)


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: criterion-level acceptance checks (slow)")


def pytest_terminal_summary(terminalreporter):
    from importlib import import_module

    try:
        mod = import_module("test_acceptance")
    except ImportError:
        return
    lines = [mod.RESULTS[k] for k in sorted(mod.RESULTS)]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

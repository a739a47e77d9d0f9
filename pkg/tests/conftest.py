import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def complexes(scale=1.0):
    comp = st.floats(-scale, scale, allow_nan=False, allow_infinity=False)
    return st.builds(complex, comp, comp)


def coords(min_size=0, max_size=6, scale=1.0):
    return st.lists(complexes(scale), min_size=min_size, max_size=max_size)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def rand_c(rng, n, scale=1.0):
    return scale * (rng.normal(size=n) + 1j * rng.normal(size=n)) / np.sqrt(2)


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])

import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from gentle_ext.fixtures import random_case

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@st.composite
def cases(draw, max_vertices=6, max_beta=4, require_band=False):
    """A random (quiver, beta, maximal rank map, sign function) drawn from a seed."""
    seed = draw(st.integers(0, 2 ** 32 - 1))
    return random_case(random.Random(seed), max_vertices=max_vertices, max_beta=max_beta,
                       require_band=require_band)


@pytest.fixture
def rng():
    return random.Random(20261015)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        status, text = RESULTS[n]
        terminalreporter.write_line(f"{status} criterion {n:2d}: {text}")

import math

import numpy as np
import pytest
from hypothesis import strategies as st

from sppbounds.fock import validate

ACCEPTANCE_LINES: list[str] = []


@st.composite
def distributions(draw, max_len=9, min_len=1):
    """Random normalized photon-number distributions, zeros included."""
    raw = draw(
        st.lists(
            st.one_of(st.just(0.0), st.floats(min_value=1e-6, max_value=1.0)),
            min_size=min_len,
            max_size=max_len,
        ).filter(lambda xs: sum(xs) > 0.0)
    )
    total = math.fsum(raw)
    return validate([x / total for x in raw])


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(20240601))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import strategies as st

from wco.space import build_space


@pytest.fixture
def s2():
    return build_space(["0", "1"], [1, 1], ["0", "0"], [1, 1], exact=True)


@pytest.fixture
def c3():
    return build_space([0, 1, 2], [1, 1, 1], [1, 2, 0], [1, 2, 4], exact=True)


@pytest.fixture
def c3_float():
    return build_space([0, 1, 2], [1.0, 1.0, 1.0], [1, 2, 0], [1, 2, 4])


def identity_space(weights, masses=None):
    n = len(weights)
    masses = masses or [1] * n
    return build_space(list(range(n)), masses, list(range(n)), weights)


@st.composite
def exact_spaces(draw, max_dim=6):
    """Small spaces with rational masses and real rational weights (some exactly zero)."""
    n = draw(st.integers(1, max_dim))
    masses = [Fraction(draw(st.integers(1, 9)), draw(st.integers(1, 4))) for _ in range(n)]
    phi = [draw(st.integers(0, n - 1)) for _ in range(n)]
    weights = [Fraction(draw(st.integers(-6, 6)), draw(st.integers(1, 3))) for _ in range(n)]
    return build_space(list(range(n)), masses, phi, weights, exact=True)


@st.composite
def nonnegative_fields(draw, space):
    return {x: Fraction(draw(st.integers(0, 20)), draw(st.integers(1, 5))) for x in space.points}


def complex_vector(rng, n):
    return rng.normal(size=n) + 1j * rng.normal(size=n)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])

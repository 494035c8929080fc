from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ckbateman.scalarring import GaussianRational, ScalarPoly

settings.register_profile("ci", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ci")

small_fraction = st.fractions(min_value=-5, max_value=5, max_denominator=6)
gaussian = st.builds(GaussianRational, small_fraction, small_fraction)
# exponents for m, hbar, gamma, Omega (Laurent) and k (polynomial)
exponents = st.tuples(*([st.integers(-2, 2)] * 4), st.integers(0, 2))


@st.composite
def scalar_polys(draw, max_terms=4):
    terms = draw(st.dictionaries(exponents, gaussian, max_size=max_terms))
    return ScalarPoly(terms)


PARAMS = {"m": 1.3, "hbar": 0.7, "gamma": 0.4, "Omega": 0.9, "k": -0.6}


# acceptance lines are collected here and echoed in the terminal summary
ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def fraction(a, b=1):
    return Fraction(a, b)

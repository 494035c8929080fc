import cmath
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ckbateman.scalarring import Omega, gamma, m
from ckbateman.timecoeff import (
    ExpPoly, dho_operator, dho_solutions, eval_at, from_trig, wronskian,
)

from conftest import PARAMS, scalar_polys

keys = st.tuples(st.integers(-3, 3), st.integers(-2, 2), st.integers(0, 2))


@st.composite
def exp_polys(draw, max_terms=3):
    terms = draw(st.dictionaries(keys, scalar_polys(max_terms=2), max_size=max_terms))
    return ExpPoly(terms)


def numeric_derivative(f: ExpPoly, t: float, h: float = 1e-5) -> complex:
    return (f.eval(t + h, PARAMS) - f.eval(t - h, PARAMS)) / (2 * h)


@given(exp_polys(), exp_polys())
def test_leibniz_rule(f, g):
    assert (f * g).d_dt() == f.d_dt() * g + f * g.d_dt()


@given(exp_polys(), exp_polys(), exp_polys())
def test_ring_laws(f, g, h):
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f * g == g * f


@given(exp_polys(), st.floats(-2, 2))
def test_derivative_against_finite_difference(f, t):
    exact = f.d_dt().eval(t, PARAMS)
    approx = numeric_derivative(f, t)
    assert abs(exact - approx) <= 1e-5 * max(1.0, abs(exact))


@given(exp_polys(), exp_polys(), st.floats(-2, 2))
def test_eval_is_multiplicative(f, g, t):
    a, b = (f * g).eval(t, PARAMS), f.eval(t, PARAMS) * g.eval(t, PARAMS)
    assert abs(a - b) <= 1e-9 * max(1.0, abs(a))


def test_trig_forms():
    W, g = PARAMS["Omega"], PARAMS["gamma"]
    for t in (0.0, 0.3, 1.7):
        s = from_trig("sin", -1).eval(t, PARAMS)
        c = from_trig("cos", 2).eval(t, PARAMS)
        assert abs(s - math.exp(-g * t / 2) * math.sin(W * t)) < 1e-12
        assert abs(c - math.exp(g * t) * math.cos(W * t)) < 1e-12
    with pytest.raises(ValueError):
        from_trig("tan")


def test_dho_pair_solves_the_equation():
    u1, u2 = dho_solutions()
    assert dho_operator(u1).is_zero()
    assert dho_operator(u2).is_zero()


def test_dho_initial_data():
    u1, u2 = dho_solutions()
    assert abs(u1.eval(0.0, PARAMS)) < 1e-15
    assert abs(u1.d_dt().eval(0.0, PARAMS) - 1) < 1e-15
    assert abs(u2.eval(0.0, PARAMS) - 1) < 1e-15
    assert abs(u2.d_dt().eval(0.0, PARAMS)) < 1e-15


def test_wronskian_is_a_pure_exponential():
    W = wronskian(*dho_solutions())
    assert W == ExpPoly.exp(-2, 0)
    assert W.is_unit()
    assert W * W.inverse() == ExpPoly.const(1)


def test_non_unit_inverse_rejected():
    with pytest.raises(ZeroDivisionError):
        (ExpPoly.exp(1, 0) + ExpPoly.const(1)).inverse()


def test_t_power_terms():
    f = ExpPoly.exp(2, 0, p=1)  # t e^{gamma t}
    assert f.d_dt() == ExpPoly.exp(2, 0) + ExpPoly.exp(2, 0, gamma, p=1)


@given(exp_polys(), st.floats(-2, 2))
def test_conjugate_matches_numeric(f, t):
    assert abs(f.conjugate().eval(t, PARAMS) - f.eval(t, PARAMS).conjugate()) <= 1e-9 * max(
        1.0, abs(f.eval(t, PARAMS)))


def test_subs_and_eval_at():
    f = ExpPoly.exp(0, 1, Omega * m)
    assert f.subs("m", 2) == ExpPoly.exp(0, 1, Omega * 2)
    expected = PARAMS["Omega"] * PARAMS["m"] * cmath.exp(0.5j * PARAMS["Omega"])
    assert cmath.isclose(eval_at(f, 0.5, PARAMS), expected)


def test_pythagorean_identity_is_exact():
    assert from_trig("sin") * from_trig("sin") + from_trig("cos") * from_trig("cos") == ExpPoly.const(1)


def test_exponential_examples():
    assert ExpPoly.exp(-1, 0) * ExpPoly.exp(1, 0) == ExpPoly.const(1)
    assert ExpPoly.exp(-1, 0, p=1) ** 2 == ExpPoly.exp(-2, 0, p=2)
    assert ExpPoly.exp(-2, 0).d_dt() == ExpPoly.exp(-2, 0, -gamma)
    assert from_trig("cos").eval(0.0, PARAMS) == pytest.approx(1)


def test_dho_numeric_oracles():
    u1, u2 = dho_solutions()
    W = wronskian(u1, u2)
    assert W.eval(1.0, {"gamma": 0.5, "Omega": 1.0}).real == pytest.approx(math.exp(-0.5), rel=1e-14)
    assert u2.eval(math.pi, {"gamma": 0.0, "Omega": 1.0}).real == pytest.approx(-1, abs=1e-14)
    assert abs(u1.eval(0.0, {"gamma": 3.0, "Omega": 7.0})) < 1e-15

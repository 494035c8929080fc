from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from ckbateman.scalarring import (
    SYMBOLS, GaussianRational, ScalarPoly, I, ONE, ZERO, Omega, gamma, hbar, k, m, omega2,
)

from conftest import PARAMS, gaussian, scalar_polys

laurent_exponents = st.tuples(*([st.integers(-3, 3)] * 4), st.just(0))
SYM = {name: sympy.Symbol(name) for name in SYMBOLS}


def to_sympy(p: ScalarPoly):
    expr = sympy.Integer(0)
    for exps, c in p.items():
        term = sympy.Rational(c.re.numerator, c.re.denominator) + sympy.I * sympy.Rational(
            c.im.numerator, c.im.denominator)
        for name, e in zip(SYMBOLS, exps):
            term *= SYM[name] ** e
        expr += term
    return expr


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


class TestGaussianRational:
    @given(gaussian, gaussian)
    def test_division_inverts_multiplication(self, a, b):
        if b:
            assert (a * b) / b == a

    def test_string_forms(self):
        assert str(GaussianRational(Fraction(3, 2))) == "3/2"
        assert str(GaussianRational(0, Fraction(3, 2))) == "3/2*i"
        assert str(GaussianRational(Fraction(1, 2), Fraction(3, 4))) == "(1/2+3/4*i)"

    def test_complex_and_conjugate(self):
        z = GaussianRational(1, -2)
        assert complex(z.conjugate()) == complex(1, 2)

    def test_coerce_rejects_objects(self):
        with pytest.raises(TypeError):
            GaussianRational.coerce(object())


class TestRingAxioms:
    @given(scalar_polys(), scalar_polys(), scalar_polys())
    def test_associativity(self, p, q, r):
        assert (p + q) + r == p + (q + r)
        assert (p * q) * r == p * (q * r)

    @given(scalar_polys(), scalar_polys())
    def test_commutativity(self, p, q):
        assert p + q == q + p
        assert p * q == q * p

    @given(scalar_polys(), scalar_polys(), scalar_polys())
    def test_distributivity(self, p, q, r):
        assert p * (q + r) == p * q + p * r

    @given(scalar_polys())
    def test_identities_and_negation(self, p):
        assert p + ZERO == p
        assert p * ONE == p
        assert (p - p).is_zero()
        assert p * ZERO == ZERO

    @given(scalar_polys(), scalar_polys())
    def test_product_matches_sympy(self, p, q):
        assert sympy.expand(to_sympy(p * q) - to_sympy(p) * to_sympy(q)) == 0

    @given(scalar_polys(), scalar_polys())
    def test_eval_is_a_homomorphism(self, p, q):
        assert close((p * q).eval(PARAMS), p.eval(PARAMS) * q.eval(PARAMS))
        assert close((p + q).eval(PARAMS), p.eval(PARAMS) + q.eval(PARAMS))


class TestOperations:
    @given(scalar_polys())
    def test_parse_round_trip(self, p):
        assert ScalarPoly.parse(str(p)) == p

    def test_parse_example(self):
        p = ScalarPoly.parse("1/2*gamma*Omega^-1 + (1+2*i)*m")
        assert p == gamma * Omega ** -1 * Fraction(1, 2) + m * GaussianRational(1, 2)

    @given(gaussian, laurent_exponents)
    def test_monomial_inverse(self, c, exps):
        if c:
            p = ScalarPoly({exps: c})
            assert p * p.inverse() == ONE

    def test_sum_has_no_inverse(self):
        with pytest.raises(ZeroDivisionError):
            (m + hbar).inverse()

    def test_k_is_polynomial_only(self):
        with pytest.raises(ValueError):
            k ** -1
        with pytest.raises(ValueError):
            ScalarPoly({(0, 0, 0, 0, -1): 1})

    def test_gamma_admits_negative_powers(self):
        assert (gamma * gamma ** -1) == ONE

    @given(scalar_polys())
    def test_conjugate_is_involution_and_matches_numeric(self, p):
        assert p.conjugate().conjugate() == p
        real = {key: v for key, v in PARAMS.items()}
        assert close(p.conjugate().eval(real), p.eval(real).conjugate())

    def test_subs(self):
        assert (k - 1).subs("k", 1).is_zero()
        assert (gamma ** -2 * m).subs("gamma", 2) == m * Fraction(1, 4)
        with pytest.raises(ZeroDivisionError):
            gamma.inverse().subs("gamma", 0)

    def test_eval_errors(self):
        with pytest.raises(ZeroDivisionError):
            gamma.inverse().eval({"gamma": 0})
        with pytest.raises(KeyError):
            m.eval({})

    def test_omega2_definition(self):
        assert omega2() == Omega ** 2 + gamma ** 2 * Fraction(1, 4)
        assert I * I == -ONE

    def test_free_symbols(self):
        assert (m * hbar + k).free_symbols() == frozenset({"m", "hbar", "k"})
        assert ONE.is_constant() and not m.is_constant()


class TestWorkedExamples:
    def test_like_terms_merge(self):
        t = gamma * (2 * Omega) ** -1
        assert t + t == gamma * Omega ** -1
        assert t + ZERO == t

    def test_cancellation_to_capital_omega(self):
        assert omega2() - gamma ** 2 * Fraction(1, 4) == Omega ** 2

    def test_inverse_monomial_product(self):
        assert gamma * (2 * Omega) ** -1 * (2 * Omega) == gamma

    def test_momentum_invariant_coefficient(self):
        c = m * omega2() / Omega
        assert c == m * Omega + m * gamma ** 2 * Omega ** -1 * Fraction(1, 4)
        assert c.eval({"m": 1, "gamma": 1, "Omega": 2}) == pytest.approx(2.125)

    def test_numeric_examples(self):
        assert (gamma / (2 * Omega)).eval({"gamma": 1, "Omega": 2}) == pytest.approx(0.25)
        assert k.eval({"k": -1}) == -1

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from wallcross.poly import Poly, falling_binomial, poly_sum, var

X, Y = var("ZZ"), var("KK")


def test_arithmetic_and_canonical_form():
    p = (X + 1) ** 2 - X * X
    assert p == 2 * X + 1
    assert str(Poly()) == "0"
    assert (X * Y).degree() == 2
    assert (X / 2 + X / 2) == X


def test_constant_handling():
    assert Poly.const(3).is_constant()
    assert Poly.const(Fraction(1, 3)).constant_value() == Fraction(1, 3)
    assert (X - X).is_constant() and (X - X).constant_value() == 0


def test_subs_and_evaluate():
    p = X * X + 3 * X * Y - 7
    assert p.subs({"ZZ": 2}) == 4 + 6 * Y - 7
    assert p.evaluate({"ZZ": 2, "KK": Fraction(1, 2)}) == 0


def test_coefficients_in():
    p = 3 * X * X * Y + X + Y + 5
    coeffs = p.coefficients_in("ZZ")
    assert coeffs[2] == 3 * Y and coeffs[1] == Poly.const(1) and coeffs[0] == Y + 5


def test_falling_binomial_matches_integers():
    from math import comb
    for n in range(0, 9):
        for j in range(0, 6):
            assert falling_binomial(n, j) == comb(n, j)
    d = var("d")
    assert falling_binomial(d, 2).subs({"d": 7}) == 21


def test_poly_sum():
    assert poly_sum([X, Y, X]) == 2 * X + Y
    assert poly_sum([]) == Poly()


def test_rejects_floats():
    with pytest.raises(TypeError):
        Poly.coerce(0.5)


coef = st.fractions(min_value=-5, max_value=5, max_denominator=6)
small = st.builds(lambda a, b, c: a * X * X + b * X * Y + c, coef, coef, coef)


@settings(max_examples=200, deadline=None)
@given(small, small, small)
def test_ring_axioms(p, q, r):
    assert (p + q) * r == p * r + q * r
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p - p == Poly()


@settings(max_examples=200, deadline=None)
@given(small, small, coef, coef)
def test_evaluation_is_a_homomorphism(p, q, x, y):
    env = {"ZZ": x, "KK": y}
    assert (p * q).evaluate(env) == p.evaluate(env) * q.evaluate(env)
    assert (p + q).evaluate(env) == p.evaluate(env) + q.evaluate(env)

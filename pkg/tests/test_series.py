from fractions import Fraction
from math import comb

import sympy
from hypothesis import given, settings, strategies as st

from periodic_zeta import series as fps

u = sympy.Symbol("u")


def sympy_coeffs(expr, n):
    poly = sympy.series(expr, u, 0, n + 1).removeO()
    return tuple(Fraction(str(poly.coeff(u, k))) for k in range(n + 1))


def test_exp_and_log_agree_with_sympy():
    g = (0, 1, Fraction(1, 2), -3, 0, 2)
    expr = sum(sympy.Rational(str(c)) * u**k for k, c in enumerate(g))
    assert fps.exp(g) == sympy_coeffs(sympy.exp(expr), 5)
    f = (1, 2, 0, Fraction(-1, 3), 4)
    expr = sum(sympy.Rational(str(c)) * u**k for k, c in enumerate(f))
    assert fps.log(f) == sympy_coeffs(sympy.log(expr), 4)


def test_log_one_minus_power():
    assert fps.log_one_minus_power(2, 7) == sympy_coeffs(sympy.log(1 - u**2), 7)
    assert fps.log_one_minus_power(3, 9) == sympy_coeffs(sympy.log(1 - u**3), 9)


def test_binomial_oracle_for_inverse_power():
    # (1 - u^3)^(-4) = sum_k C(k + 3, 3) u^(3k)
    coeffs = fps.exp(tuple(-4 * c for c in fps.log_one_minus_power(3, 9)))
    expected = [0] * 10
    for k in range(4):
        expected[3 * k] = comb(k + 3, 3)
    assert coeffs == tuple(expected)


series_strategy = st.lists(
    st.fractions(min_value=-5, max_value=5, max_denominator=4), min_size=1, max_size=9
)


@settings(max_examples=100, deadline=None)
@given(series_strategy)
def test_exp_log_round_trip(tail):
    g = (0, *tail)
    assert fps.log(fps.exp(g)) == g


@settings(max_examples=100, deadline=None)
@given(series_strategy, series_strategy)
def test_mul_is_commutative_and_truncating(a, b):
    assert fps.mul(a, b) == fps.mul(b, a)
    assert len(fps.mul(a, b)) == min(len(a), len(b))


@settings(max_examples=50, deadline=None)
@given(st.dictionaries(st.integers(1, 30), st.integers(0, 50), max_size=10), st.integers(1, 30))
def test_mobius_inversion_inverts_divisor_sums(f, n):
    F = {m: sum(f.get(d, 0) for d in sympy.divisors(m)) for m in range(1, n + 1)}
    assert fps.mobius_invert(F, n) == f.get(n, 0)


def test_evaluate_matches_horner_by_hand():
    assert fps.evaluate((1, 2, 3), 0.5) == 1 + 2 * 0.5 + 3 * 0.25

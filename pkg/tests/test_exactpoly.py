from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from laguerre_ladder.exactpoly import (
    LaurentPoly,
    alpha_ladder_check,
    de_residual,
    derivative,
    laguerre,
    three_term_residual,
)

rationals = st.fractions(
    min_value=Fraction(-50), max_value=Fraction(50), max_denominator=12
)
polys = st.dictionaries(st.integers(-4, 8), rationals, max_size=6).map(LaurentPoly)


# -- Laurent ring ------------------------------------------------------------


@given(polys, polys)
def test_addition_commutes(a, b):
    assert a + b == b + a


@given(polys, polys, polys)
def test_multiplication_distributes(a, b, c):
    assert a * (b + c) == a * b + a * c


@given(polys, polys)
def test_derivative_product_rule(a, b):
    assert (a * b).derivative() == a.derivative() * b + a * b.derivative()


@given(polys)
def test_no_stored_zeros(p):
    assert all(c != 0 for _, c in p.items())


def test_derivative_examples():
    assert derivative(LaurentPoly({0: 1, 1: -1})) == LaurentPoly({0: -1})
    assert derivative(LaurentPoly({2: Fraction(1, 2)})) == LaurentPoly({1: 1})
    assert derivative(LaurentPoly({-1: 1})) == LaurentPoly({-2: -1})


def test_render_ascending():
    assert LaurentPoly({1: -1, 2: Fraction(1, 2)}).render() == "-1*x^1 + 1/2*x^2"
    assert LaurentPoly().render() == "0"


def test_exact_eval_matches_float_path():
    p = LaurentPoly({-1: Fraction(1, 3), 0: 2, 3: Fraction(-7, 5)})
    x = 1.7
    assert p.eval_float(x) == pytest.approx(float(p.eval_exact(Fraction(x))), abs=0)


# -- Laguerre construction ----------------------------------------------------


def test_constant_solution():
    assert laguerre(0, 3) == LaurentPoly({0: 1})


def test_degree_one_solved_from_equation():
    # Unique degree-one polynomial a + b*x with zero equation residual and
    # constant term 1: (1 - x) b + (a + b x) = 0 forces b = -a, a = 1.
    candidate = LaurentPoly({0: 1, 1: -1})
    assert laguerre(1, 0) == candidate
    d1 = candidate.derivative()
    assert (d1.derivative().shift(1) + d1 - d1.shift(1) + candidate).is_zero()


def test_negative_parameter_example_two_routes():
    # Extension route: (gamma(2)/gamma(3)) * (-x) * L_1^(1).
    direct = Fraction(1, 2) * LaurentPoly({1: -1}) * laguerre(1, 1)
    assert laguerre(2, -1) == direct == LaurentPoly({1: -1, 2: Fraction(1, 2)})
    # Recurrence route run at the negative parameter from the usual seeds.
    prev = LaurentPoly({0: 1})
    cur = LaurentPoly({0: 0, 1: -1})  # 1 + alpha - x at alpha = -1
    k = 1
    nxt = Fraction(1, k + 1) * (
        (2 * k + 1 - 1) * cur - cur.shift(1) - (k - 1) * prev
    )
    assert nxt == laguerre(2, -1)


def test_negative_extension_lowest_degree():
    for n, a in [(3, -2), (5, -5), (10, -4)]:
        assert laguerre(n, a).low_degree() == -a


def test_invalid_indices():
    with pytest.raises(ValueError):
        laguerre(-1, 0)
    with pytest.raises(ValueError, match="n \\+ alpha"):
        laguerre(1, -5)


# -- differential equation and ladder identities -------------------------------


@pytest.mark.parametrize("n, alpha", [(2, 0), (7, 3), (3, -2), (0, 5)])
def test_de_residual_examples(n, alpha):
    assert de_residual(n, alpha).is_zero()


def test_de_residual_full_range():
    for n in range(13):
        for alpha in range(-n, 11):
            assert de_residual(n, alpha).is_zero(), (n, alpha)


@given(st.integers(13, 30), st.integers(-30, 10))
@settings(max_examples=30, deadline=None)
def test_de_residual_large_labels(n, alpha):
    if n + alpha < 0:
        alpha = -n
    assert de_residual(n, alpha).is_zero()


@pytest.mark.parametrize("n, alpha", [(1, 0), (0, 5), (4, 2)])
def test_ladder_examples(n, alpha):
    up, down = alpha_ladder_check(n, alpha)
    assert up.is_zero() and down.is_zero()


def test_ladder_full_range():
    for n in range(13):
        for alpha in range(1 - n, 11):
            up, down = alpha_ladder_check(n, alpha)
            assert up.is_zero() and down.is_zero(), (n, alpha)


def test_ladder_lowering_out_of_range():
    with pytest.raises(ValueError, match="lowering"):
        alpha_ladder_check(2, -2)


def test_three_term_recurrence_oracle():
    for n in range(1, 16):
        for alpha in range(1 - n, 8):
            assert three_term_residual(n, alpha).is_zero(), (n, alpha)


@given(st.integers(16, 29), st.integers(0, 10))
@settings(max_examples=20, deadline=None)
def test_three_term_recurrence_large(n, alpha):
    assert three_term_residual(n, alpha).is_zero()


def test_negative_parameter_identity():
    from math import factorial

    for n in range(21):
        for a in range(n + 1):
            sign = -1 if a % 2 else 1
            rhs = (sign * Fraction(factorial(n - a), factorial(n))) * laguerre(
                n - a, a
            ).shift(a)
            assert laguerre(n, -a) == rhs, (n, a)

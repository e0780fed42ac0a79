from fractions import Fraction
import math

import pytest
from hypothesis import given, strategies as st

from galcount.rootexpr import RootExpr, frac_str, parse_frac, square_part

small_q = st.fractions(min_value=-20, max_value=20, max_denominator=12)
radicand = st.integers(min_value=1, max_value=60)


def root_sum(draw_terms):
    x = RootExpr(0)
    for c, m in draw_terms:
        x = x + RootExpr(c) * RootExpr.sqrt(m)
    return x


terms = st.lists(st.tuples(small_q, radicand), max_size=3)


def test_perfect_squares_collapse():
    assert RootExpr.sqrt(49) == RootExpr(7)
    assert RootExpr.sqrt(12) == RootExpr(2) * RootExpr.sqrt(3)
    assert RootExpr.inv_sqrt(4) == RootExpr(Fraction(1, 2))
    assert RootExpr.sqrt(2) * RootExpr.sqrt(2) == RootExpr(2)


def test_square_part():
    assert square_part(72) == (6, 2)
    assert square_part(1) == (1, 1)


def test_frac_text_roundtrip():
    for q in (Fraction(7, 48), Fraction(-3, 1), Fraction(0)):
        assert parse_frac(frac_str(q)) == q


@given(terms, terms)
def test_addition_and_product_agree_with_floats(t1, t2):
    x, y = root_sum(t1), root_sum(t2)
    fx, fy = float(x), float(y)
    assert math.isclose(float(x + y), fx + fy, rel_tol=1e-9, abs_tol=1e-9)
    assert math.isclose(float(x * y), fx * fy, rel_tol=1e-9, abs_tol=1e-9)


@given(terms, terms)
def test_ordering_is_exact_and_consistent(t1, t2):
    x, y = root_sum(t1), root_sum(t2)
    assert (x < y) == ((x - y).sign() < 0)
    if abs(float(x) - float(y)) > 1e-9:
        assert (x < y) == (float(x) < float(y))


@given(terms)
def test_record_roundtrip(t):
    x = root_sum(t)
    assert RootExpr.from_record(x.to_record()) == x


@given(terms)
def test_division_inverts_multiplication(t):
    x = root_sum(t)
    y = RootExpr(3) + RootExpr.sqrt(5)
    assert (x * y) / y == x


def test_sign_of_near_cancellation():
    # 3*sqrt(2) - sqrt(17) is tiny but positive
    x = RootExpr(3) * RootExpr.sqrt(2) - RootExpr.sqrt(17)
    assert x.sign() == 1
    assert RootExpr.sqrt(17) < RootExpr(3) * RootExpr.sqrt(2)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        RootExpr(1) / RootExpr(0)

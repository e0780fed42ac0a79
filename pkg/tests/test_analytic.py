from fractions import Fraction
import math

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from galcount import analytic
from galcount.analytic import (
    C1,
    EXPLICIT_THRESHOLD,
    almost_simple_constant,
    class_number_bound,
    degree_cutoff,
    error_exponent,
    explicit_constant,
    holt_exponent,
    tail_bound,
)
from galcount.errors import DomainError


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=1, max_value=10**6), st.integers(min_value=1, max_value=4))
def test_explicit_constant_log(order, d):
    got = explicit_constant(order, d).log(30)
    with mpmath.workdps(40):
        want = d * order + float(C1) * d * mpmath.sqrt(order) * mpmath.log(2 * d * order**2)
    assert abs(got - want) <= mpmath.mpf(10) ** -20 * max(1, abs(want))


def test_constant_product_adds_logs():
    a = explicit_constant(12, 1)
    b = explicit_constant(60, 2)
    with mpmath.workdps(40):
        assert abs((a * b).log() - a.log() - b.log()) < mpmath.mpf(10) ** -25


def test_almost_simple_constant_log():
    n, w, gamma, order, d = 6, Fraction(7, 3), 2, 360, 1
    got = almost_simple_constant(n, w, gamma, order, d).log(30)
    with mpmath.workdps(40):
        want = (
            mpmath.mpf(d * n) / 2 * mpmath.log(2 * mpmath.pi)
            + n * mpmath.log(math.factorial(gamma * d + 1))
            + d * n * mpmath.log(order)
            + d * n * mpmath.mpf(7) / 3 * mpmath.log(2 * d * n**3)
        )
        assert abs(got - want) < mpmath.mpf(10) ** -20


@settings(max_examples=80, deadline=None)
@given(st.integers(min_value=1, max_value=10**12), st.integers(min_value=1, max_value=5), st.integers(min_value=0, max_value=40))
def test_degree_cutoff_is_the_largest_admissible_n(X, d, C):
    n = degree_cutoff(X, d, C)
    bound = math.log(X) / 3 + C
    assert d * n <= bound + 1e-9
    assert d * (n + 1) > bound - 1e-9


def test_degree_cutoff_errors():
    with pytest.raises(DomainError):
        degree_cutoff(0)
    with pytest.raises(DomainError):
        degree_cutoff(10, d=0)


def test_tail_is_zero_below_threshold():
    rep = tail_bound(log_x=100)
    assert rep.is_zero and rep.log_tail is None and rep.resum_check()
    assert rep.cutoff == degree_cutoff(log_x=100)


def test_tail_terms_recompute():
    L = 3 * (EXPLICIT_THRESHOLD + 20 - 30)
    rep = tail_bound(log_x=L)
    assert rep.cutoff == EXPLICIT_THRESHOLD + 20
    assert len(rep.terms) == 21
    t = rep.terms[0]
    N = t.order
    with mpmath.workdps(30):
        lg = mpmath.log(N)
        want = (
            (lg / mpmath.log(2)) ** 2 / 6 * lg
            + lg / mpmath.log(2) * lg
            + explicit_constant(N, 1).log(30)
            + lg * lg / mpmath.log(2)
            + 6 * mpmath.mpf(L) / mpmath.sqrt(N)
        )
    assert abs(t.log_total - want) < mpmath.mpf(10) ** -15 * abs(want)
    assert rep.resum_check()


def test_tail_needs_large_x():
    with pytest.raises(DomainError):
        tail_bound(X=10)


def test_holt_exponent_small_case():
    # N = 4: log2 N = 2, so 4/6 + 2
    assert float(holt_exponent(4)) == pytest.approx(2 + 2 / 3)


def test_class_number_bound():
    assert float(class_number_bound(16)) == pytest.approx(2 * math.pi * 8)
    with pytest.raises(DomainError):
        class_number_bound(0)


def test_error_exponent():
    assert [error_exponent(d) for d in (1, 2, 3, 4, 7)] == [Fraction(1, 2)] * 3 + [Fraction(2, 5), Fraction(1, 4)]


def test_record_shape():
    rec = tail_bound(log_x=3 * (EXPLICIT_THRESHOLD - 29)).to_record()
    assert rec["terms"] == 2 and rec["range"] == [EXPLICIT_THRESHOLD, EXPLICIT_THRESHOLD + 1]
    assert analytic.rational_str(Fraction(3, 6)) == "1/2"

from fractions import Fraction
import random

import pytest
from hypothesis import given, settings, strategies as st

from galcount import library
from galcount.errors import DomainError
from galcount.invariants import (
    Failed,
    InvariantSet,
    VerifiedRandomized,
    a_and_w_from_degrees,
    degree2_orbit_count,
    expected_regular_profile,
    jacobian_independence,
    low_degree_span_dimensions,
    orbit_sum,
    regular_invariant_set,
    regular_profile_check,
    square_identity_holds,
)
from galcount.perm import regular_representation
from galcount.rootexpr import RootExpr
from galcount.structure import order2_count

REGULAR = [regular_representation(G) for _, G in library.bundled_groups(1, 16)]


def burnside_degree2_orbits(G):
    """Orbits on degree-2 monomials via Burnside: average number of fixed monomials."""
    n = G.degree
    monos = [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]
    fixed = 0
    for g in G.element_list():
        for i, j in monos:
            a, b = sorted((g(i), g(j)))
            fixed += (a, b) == (i, j)
    assert fixed % G.order == 0
    return fixed // G.order


@pytest.mark.parametrize("R", REGULAR, ids=lambda R: f"order{R.order}")
def test_profile_and_degree2_orbits(R):
    S = regular_invariant_set(R)
    n = R.degree
    assert len(S) == n
    assert S.degree_profile == expected_regular_profile(n, order2_count(R))
    if n <= 12:
        assert degree2_orbit_count(R) == burnside_degree2_orbits(R)


@pytest.mark.parametrize("R", REGULAR[:12], ids=lambda R: f"order{R.order}")
def test_orbit_sums_are_invariant(R):
    rng = random.Random(R.order)
    for f in regular_invariant_set(R).invariants:
        assert f.poly.is_invariant(R)
        pt = [rng.randrange(1000) for _ in range(R.degree)]
        g = R.generators[0] if R.generators else R.identity
        moved = [pt[g(i + 1) - 1] for i in range(R.degree)]
        assert f.evaluate(pt) == f.evaluate(moved)


def test_square_identity():
    for R in REGULAR[:15]:
        assert square_identity_holds(R)


def test_low_degree_dimensions():
    R = regular_representation(library.symmetric(3))
    d1, d2 = low_degree_span_dimensions(R)
    assert d1 == 1
    assert d2 == burnside_degree2_orbits(R)


def test_needs_regular_group():
    with pytest.raises(DomainError):
        regular_invariant_set(library.symmetric(3))


def test_jacobian_verifies_regular_sets():
    for R in REGULAR[:10]:
        S = regular_invariant_set(R)
        status = jacobian_independence(S, R.degree, trials=3, seed=1)
        assert isinstance(status, VerifiedRandomized)
        total = sum(d - 1 for d in S.degree_profile)
        assert status.failure_bound == Fraction(total, status.prime) ** 3


def test_jacobian_detects_dependence():
    R = regular_representation(library.cyclic(2))
    f = orbit_sum(R, ((1, 1),))
    assert isinstance(jacobian_independence(InvariantSet([f, f]), 2), Failed)


def test_jacobian_size_mismatch():
    R = regular_representation(library.cyclic(3))
    S = regular_invariant_set(R)
    with pytest.raises(DomainError):
        jacobian_independence(S, 4)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(min_value=1, max_value=9), min_size=1, max_size=20), st.integers(min_value=1, max_value=10**6))
def test_a_and_w(profile, order):
    a, w = a_and_w_from_degrees(profile, order)
    n = len(profile)
    assert w == Fraction(sum(profile), n)
    assert a == RootExpr(Fraction(2 * sum(profile) - n, 2)) * RootExpr.inv_sqrt(order)


def test_profile_check_report():
    R = regular_representation(library.small_group(8, 4))
    rep = regular_profile_check(R)
    assert rep["n2"] == 1
    assert rep["profile"] == rep["expected"] == [1, 2, 2, 2, 2, 3, 3, 3]

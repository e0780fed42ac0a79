from itertools import combinations, product
import math

import pytest
from hypothesis import given, settings, strategies as st
from sympy import factorint, primerange

from galcount import fields
from galcount.errors import DomainError, ResourceError
from galcount.fields import (
    abelian_counts,
    abelian_fields_up_to,
    char_add,
    char_conductor,
    char_order,
    count_fundamental_discriminants,
    galois_count_Q,
    is_fundamental_discriminant,
    iter_fundamental_discriminants,
    primitive_characters,
    quadratic_density_report,
    secondary_fit,
    tau_sum,
    bordelles_check,
)


def squarefree(n):
    return all(e == 1 for e in factorint(abs(n)).values())


def naive_fundamental(d):
    if d in (0, 1):
        return False
    if d % 4 == 1:
        return squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and squarefree(m)
    return False


def squarefree_kernel_disc(n):
    """Fundamental discriminant of Q(sqrt n) for a nonsquare integer n."""
    core = 1 if n > 0 else -1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            core *= p
    return core if core % 4 == 1 else 4 * core


def brute_biquadratic(X):
    """C2 x C2 fields: each is a triple of quadratic subfields d1, d2, d3 = core(d1 d2)."""
    quad = sorted((d for d in range(-X, X + 1) if naive_fundamental(d)), key=abs)
    found = set()
    for d1, d2 in combinations(quad, 2):
        if abs(d1 * d2) * 3 > X:  # |d3| >= 3
            continue
        d3 = squarefree_kernel_disc(d1 * d2)
        disc = abs(d1 * d2 * d3)
        if disc <= X:
            found.add(frozenset((d1, d2, d3)))
    return len(found)


def brute_cyclic_cubic(X):
    """Conductor f = (9 or 1) * distinct primes = 1 mod 3, with 2^(t-1) fields each; disc = f^2."""
    F = math.isqrt(X)
    total = 0
    for f in range(7, F + 1):
        fac = factorint(f)
        t = 0
        ok = True
        for p, e in fac.items():
            if p == 3 and e == 2:
                t += 1
            elif p % 3 == 1 and e == 1:
                t += 1
            else:
                ok = False
        if ok and t:
            total += 2 ** (t - 1)
    return total


def test_first_discriminants():
    assert list(iter_fundamental_discriminants(10)) == [-3, -4, 5, -7, -8, 8]
    assert count_fundamental_discriminants(1) == 0
    assert count_fundamental_discriminants(3) == 1


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=1, max_value=4000))
def test_count_matches_definition(X):
    naive = sum(1 for d in range(-X, X + 1) if naive_fundamental(d))
    assert count_fundamental_discriminants(X) == naive


@given(st.integers(min_value=-10**6, max_value=10**6))
def test_is_fundamental(d):
    assert is_fundamental_discriminant(d) == naive_fundamental(d)


def test_iterator_agrees_with_count():
    X = 20000
    ds = list(iter_fundamental_discriminants(X))
    assert len(ds) == count_fundamental_discriminants(X)
    assert all(is_fundamental_discriminant(d) for d in ds[:500])
    assert [abs(d) for d in ds] == sorted(abs(d) for d in ds)


def test_density_report():
    rep = quadratic_density_report(10**6)
    assert rep.quadratic_count == 607925
    assert abs(rep.residual) < 10
    assert rep.abelian_total == 607925


def test_sieve_limit():
    with pytest.raises(ResourceError):
        count_fundamental_discriminants(10**12)


@pytest.mark.parametrize("X", [200, 1000, 3000])
def test_abelian_enumeration_against_brute_force(X):
    counts = abelian_counts(abelian_fields_up_to(X, 4))
    assert counts.get("C2", 0) == count_fundamental_discriminants(X)
    assert counts.get("C3", 0) == brute_cyclic_cubic(X)
    assert counts.get("C2xC2", 0) == brute_biquadratic(X)


def test_smallest_fields():
    recs = abelian_fields_up_to(200, 4)
    first = {}
    for r in recs:
        first.setdefault(r.type_name(), r)
    assert first["C3"].discriminant == 49 and first["C3"].signature == (3, 0)
    assert first["C4"].discriminant == 125 and first["C4"].signature == (0, 2)
    assert first["C4"].conductor == 5
    assert first["C2xC2"].discriminant == 144


def test_records_are_consistent():
    for r in abelian_fields_up_to(2000, 6):
        conds = [char_conductor(c) for c in r.characters]
        assert math.prod(conds) == r.discriminant
        assert max(conds) == r.conductor or math.lcm(*conds) == r.conductor
        assert r.degree == math.prod(r.galois_type)
        assert sum(r.signature[0:1]) + 2 * r.signature[1] == r.degree


def test_character_arithmetic():
    chars = [c for _, c in primitive_characters(40, max_order=4)]
    for a, b in product(chars[:15], repeat=2):
        s = char_add(a, b)
        assert char_add(s, b) == char_add(a, char_add(b, b))
        assert char_order(s) <= math.lcm(char_order(a), char_order(b))


def test_primitive_characters_have_their_conductor():
    for cond, chi in primitive_characters(60, max_order=6):
        assert char_conductor(chi) == cond
    # Euler's count of primitive characters mod a prime p is p - 2
    for p in primerange(3, 40):
        assert sum(1 for c, _ in primitive_characters(p) if c == p) == p - 2


def test_galois_count_over_q():
    rep = galois_count_Q(49)
    assert rep.counts_by_group == {"C2": 30, "C3": 1}
    assert galois_count_Q(48).counts_by_group == {"C2": 30}
    assert rep.nonabelian_upper_log is not None


def test_secondary_fit_is_flagged():
    fit = secondary_fit([1000, 3000, 10000])
    assert fit["empirical"] is True and len(fit["coefficients"]) == 3
    with pytest.raises(DomainError):
        secondary_fit([10, 20])


def brute_tau(m, n):
    return sum(1 for t in product(range(1, n + 1), repeat=m) if math.prod(t) == n)


@pytest.mark.parametrize("m,Q", [(2, 10), (3, 12), (4, 8)])
def test_tau_sum(m, Q):
    assert tau_sum(m, Q) == sum(brute_tau(m, n) for n in range(1, Q + 1))
    assert bordelles_check(m, Q)

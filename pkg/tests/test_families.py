from fractions import Fraction

import pytest

from galcount import families
from galcount.errors import DomainError, InputError
from galcount.families import FamilyDescriptor, best_derivation, derivations, family_a, parse_family
from galcount.rootexpr import RootExpr

# standard orders of finite simple groups
KNOWN_ORDERS = {
    "family:PSL:2:5": 60,
    "family:PSL:2:7": 168,
    "family:PSL:3:4": 20160,
    "family:PSp:2:3": 25920,  # rank parameter: PSp_4(3)
    "family:PSU:3:3": 6048,
    "family:2B2:8": 29120,
    "family:G2:3": 4245696,
    "family:Alt:8": 20160,
    "family:M11": 7920,
    "family:J1": 175560,
    "family:J3": 50232960,
    "family:Tits": 17971200,
}


@pytest.mark.parametrize("text,order", sorted(KNOWN_ORDERS.items()))
def test_simple_orders(text, order):
    assert parse_family(text).simple_order == order


def test_aliases_and_options():
    assert parse_family("Sz:8").family == "2B2"
    d = parse_family("family:PSL:3:4:gamma=2")
    assert d.group_order == 2 * 20160
    assert str(d) == "family:PSL:3:4:gamma=2"
    assert parse_family("family:J3:order=100465920").group_order == 100465920


@pytest.mark.parametrize("bad", ["", "family:", "family:PSL:2", "family:Foo:3", "family:Alt:x", "family:J3:size=3"])
def test_parse_errors(bad):
    with pytest.raises(InputError):
        parse_family(bad)


def test_q_must_be_prime_power():
    with pytest.raises(DomainError):
        parse_family("family:PSL:2:6")


def test_best_is_minimum():
    for text in ("family:Alt:9", "family:PSL:2:11", "family:M12", "family:J3", "family:PSU:4:3"):
        d = parse_family(text)
        ders = derivations(d)
        assert best_derivation(d).a == min(x.a for x in ders)
        assert family_a(d) == best_derivation(d).a


def test_schmidt_formula():
    assert families.schmidt_a(5, 60) == RootExpr(Fraction(35, 4)) * RootExpr.inv_sqrt(60)
    assert families.schmidt_a(5, 7200, blocks=2) == RootExpr(Fraction(35, 2)) * RootExpr.inv_sqrt(7200)


def test_profile_a_of_strong_set():
    n, order = 20, 2 * 10**6
    prof = [1, 2, 3, 4] + [5] * (n - 16) + [9] * 12
    total = sum(prof)
    expected = RootExpr(Fraction(2 * total - n, 2)) * RootExpr.inv_sqrt(order)
    assert families.profile_a(prof, order) == expected


def test_wreath_exponent_shrinks_with_r():
    c = RootExpr(3)
    e2 = families.wreath_exponent(c, 2, 60, 2 * 60**2)
    e3 = families.wreath_exponent(c, 3, 60, 6 * 60**3)
    assert e3 < e2
    with pytest.raises(DomainError):
        families.wreath_exponent(c, 1, 60, 60)


def test_sporadic_list_has_monster():
    assert "M" in families.sporadic_names()
    assert isinstance(parse_family("family:M"), FamilyDescriptor)

import copy
from fractions import Fraction
import json

import pytest

from galcount import engine, library
from galcount.engine import (
    EXPLICIT,
    NO_CFSG,
    OPTIMAL,
    UNIFORM,
    Engine,
    TraceNode,
    abelian_count_bound,
    central_bound,
    certify,
    combine_disjoint_normals,
    no_cfsg_exponent,
    parse_wreath,
    revalidate,
)
from galcount.errors import DomainError, InputError, ResourceError, RuleNotApplicable
from galcount.families import parse_family
from galcount.rootexpr import RootExpr
from galcount.structure import Subgroup, center

BUNDLED = list(library.bundled_groups(2, 60))


def q(x):
    return RootExpr(Fraction(x))


def leaf(value):
    return TraceNode("trivial-quotient", "test leaf", q(value), False, {"order": 1}, [], "leaf")


@pytest.mark.parametrize(
    "group,mode,expected",
    [
        ("cyclic:2", UNIFORM, Fraction(1)),
        ("symmetric:4", UNIFORM, Fraction(1, 2)),
        ("affine:5", UNIFORM, Fraction(1, 4)),
        ("smallgroup:8:4", UNIFORM, Fraction(1, 2)),
        ("alternating:5", UNIFORM, Fraction(7, 48)),
        ("symmetric:4", NO_CFSG, Fraction(5, 6)),
    ],
)
def test_known_exponents(group, mode, expected):
    cert = certify(library.resolve(group), mode)
    assert cert.exponent == q(expected)
    assert cert.revalidate()


def test_schmidt_value_for_a5_is_the_formula():
    # primitive degree 5: n(n+2)/4 over |G|
    assert certify(library.alternating(5)).exponent == q(Fraction(5 * 7, 4 * 60))


def test_family_values():
    assert certify(parse_family("family:J3")).exponent == q(Fraction(73, 132192))
    assert certify(parse_family("family:J3"), OPTIMAL).exponent == q(Fraction(863441, 2009318400))


def test_explicit_mode_uses_six_over_root_order():
    cert = certify(library.symmetric(8), EXPLICIT)
    assert cert.exponent == RootExpr(6) * RootExpr.inv_sqrt(40320)
    assert cert.constant is not None
    assert cert.revalidate()


@pytest.mark.parametrize("label,G", BUNDLED, ids=[l for l, _ in BUNDLED])
def test_every_bundled_group_certifies(label, G):
    eng = Engine()
    cert = certify(G, engine=eng, label=label)
    assert cert.revalidate()
    assert cert.exponent > 0
    assert cert.exponent <= RootExpr(4) * RootExpr.inv_sqrt(G.order) or G.order < 16
    json.dumps(cert.to_record())


NO_CFSG_GROUPS = [(l, G) for l, G in BUNDLED if G.order >= 3][:40]


@pytest.mark.parametrize("label,G", NO_CFSG_GROUPS, ids=[l for l, _ in NO_CFSG_GROUPS])
def test_no_cfsg_bound(label, G):
    cert = no_cfsg_exponent(G)
    assert cert.revalidate()
    assert cert.exponent <= q(1 - Fraction(1, 4 * G.order))


def test_no_cfsg_needs_order_three():
    with pytest.raises(DomainError):
        no_cfsg_exponent(library.cyclic(2))


def test_tampered_trace_is_rejected():
    cert = certify(library.symmetric(4))
    bad = copy.deepcopy(cert)
    node = next(n for n in bad.trace.walk() if not n.children)
    node.exponent = node.exponent / 2
    assert not bad.revalidate()
    # A5's top-level candidates are pairwise distinct, so any other choice is wrong
    cert = certify(library.alternating(5))
    bad = copy.deepcopy(cert)
    bad.trace.chosen = (bad.trace.chosen + 1) % len(bad.trace.children)
    assert not bad.revalidate()
    bad = copy.deepcopy(cert)
    bad.trace.rule = "no-such-rule"
    assert not bad.revalidate()


def test_profile_can_only_help():
    G = library.alternating(5)
    base = certify(G)
    worse = certify(G, profile=[1, 2, 3, 4, 5])
    assert worse.exponent <= base.exponent
    better = certify(G, profile=[1] * 5)
    assert better.exponent < base.exponent and better.revalidate()


def test_abelian_count_bound():
    b = abelian_count_bound(library.cyclic(3))
    assert b.exponent == q(1) and b.refined_exponent == q(Fraction(1, 2))
    assert abelian_count_bound(library.cyclic(2)).exponent == q(2)
    b = abelian_count_bound(library.abelian(2, 2))
    assert (b.exponent, b.refined_exponent) == (q(1), q(Fraction(1, 2)))
    assert abelian_count_bound([2, 6]).invariant_factors == (2, 6)
    with pytest.raises(RuleNotApplicable):
        abelian_count_bound(library.symmetric(3))
    with pytest.raises(DomainError):
        abelian_count_bound([1])


def test_invariant_factors():
    assert engine._invariant_factors_of(library.abelian(2, 2, 3)) == (2, 6)
    assert engine._invariant_factors_of(library.cyclic(12)) == (12,)


def test_central_bound():
    Q8 = library.small_group(8, 4)
    b = central_bound(Q8, center(Q8))
    assert b.increment == q(Fraction(1, 2))
    assert b.refined_increment == q(Fraction(1, 4))
    S3 = library.symmetric(3)
    with pytest.raises(RuleNotApplicable):
        central_bound(S3, Subgroup(S3, S3.generators))


def test_disjoint_normals():
    node = combine_disjoint_normals(leaf(1), leaf(Fraction(1, 2)), 4, 9, 36)
    assert node.exponent == q(Fraction(1, 4) + Fraction(1, 18))
    assert node.params["shape_condition"]
    relaxed = combine_disjoint_normals(leaf(1), leaf(1), 2, 3, 6)
    assert not relaxed.params["shape_condition"]
    with pytest.raises(RuleNotApplicable):
        combine_disjoint_normals(leaf(1), leaf(1), 2, 3, 6, strict=True)


def test_revalidate_catches_bad_min():
    a, b = leaf(1), leaf(Fraction(1, 2))
    node = TraceNode("min", "test", q(1), False, {}, [a, b], "g", 0)
    assert not revalidate(node)


def test_resource_cap():
    with pytest.raises(ResourceError):
        Engine(max_depth=1).node_for(library.symmetric(4))


def test_bad_inputs():
    with pytest.raises(DomainError):
        certify(library.cyclic(1))
    with pytest.raises(DomainError):
        certify(library.cyclic(3), mode="fast")
    with pytest.raises(InputError):
        parse_wreath("wreath:x:7200:Alt:5")
    with pytest.raises(DomainError):
        parse_wreath("wreath:2:7201:Alt:5")
    with pytest.raises(DomainError):
        certify(parse_family("family:J3"), NO_CFSG)


def test_wreath_certificate():
    cert = certify(parse_wreath("wreath:2:7200:Alt:5"))
    assert cert.revalidate()
    assert cert.exponent < certify(library.alternating(5)).exponent


def test_memo_reuses_isomorphic_abelian_groups():
    eng = Engine()
    first = eng.node_for(library.cyclic(4))
    again = eng.node_for(library.abelian(4))
    assert first.exponent == again.exponent

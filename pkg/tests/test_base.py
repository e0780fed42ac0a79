from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import given, settings, strategies as st

from galcount import library
from galcount.base import (
    EXACT,
    POINTWISE,
    PUBLISHED,
    STRONG_SET,
    BaseCertificate,
    base_to_exponent,
    brute_force_bad_probability,
    brute_force_tuple_count,
    greedy_base,
    iter_prime_order_elements,
    load_class_file,
    parse_class_file,
    set_invariant_tuple_count,
    stab_prob_bounds,
    strong_set_profile,
    strong_set_search,
    verify_base,
)
from galcount.errors import DomainError, InputError
from galcount.library import data_dir
from galcount.perm import Permutation


def enumerate_tuples(g, k):
    n = g.degree
    return sum(1 for t in product(range(1, n + 1), repeat=k) if {g(x) for x in t} == set(t))


def prime_perm(draw_n, p, cycles):
    images = list(range(1, draw_n + 1))
    for c in range(cycles):
        block = list(range(c * p + 1, c * p + p + 1))
        for i, x in enumerate(block):
            images[x - 1] = block[(i + 1) % p]
    return Permutation(images)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3]), st.integers(min_value=1, max_value=3), st.integers(min_value=0, max_value=3), st.sampled_from([3, 4]))
def test_tuple_count_matches_enumeration(p, cycles, extra_fixed, k):
    n = p * cycles + extra_fixed
    g = prime_perm(n, p, cycles)
    expected = enumerate_tuples(g, k)
    assert set_invariant_tuple_count(g, k) == expected
    assert brute_force_tuple_count(g, k) == expected


def test_published_variant_only_inflates_involution_quadruples():
    G = library.symmetric(5)
    ex = stab_prob_bounds(G, variant=EXACT)
    pub = stab_prob_bounds(G, variant=PUBLISHED)
    assert ex.triple_bound == pub.triple_bound
    assert ex.quadruple_bound < pub.quadruple_bound


@pytest.mark.parametrize("name", ["symmetric:5", "alternating:5", "dihedral:7", "affine:7", "alternating:6"])
def test_union_bound_dominates_true_probability(name):
    G = library.resolve(name)
    b = stab_prob_bounds(G, variant=EXACT)
    assert brute_force_bad_probability(G, 3) <= b.triple_bound
    assert brute_force_bad_probability(G, 4) <= b.quadruple_bound
    assert b.union_bound_4choose3 == b.quadruple_bound + 4 * b.triple_bound


def test_greedy_base_verifies():
    for name in ("symmetric:5", "alternating:6", "dihedral:8", "affine:11"):
        G = library.resolve(name)
        cert = greedy_base(G)
        assert cert.kind == POINTWISE
        assert verify_base(G, cert)
        assert not verify_base(G, BaseCertificate(cert.points[:-1], POINTWISE))


def test_greedy_base_of_symmetric_group():
    assert len(greedy_base(library.symmetric(6)).points) == 5


def strong_set_exists(G, b):
    elems = [g for g in G.element_list() if not g.is_identity()]
    for pts in combinations(range(1, G.degree + 1), b + 1):
        subsets = [set(pts)] + [set(c) for c in combinations(pts, b)]
        if not any({g(x) for x in S} == S for S in subsets for g in elems):
            return True
    return False


@pytest.mark.parametrize("name,b", [("dihedral:11", 2), ("cyclic:11", 2), ("affine:7", 2), ("affine:7", 3), ("alternating:5", 3)])
def test_strong_set_search_agrees_with_exhaustion(name, b):
    G = library.resolve(name)
    found = strong_set_search(G, b, budget=10**5, seed=1)
    assert (found is not None) == strong_set_exists(G, b)


def test_strong_set_search_finds_verifiable_sets():
    G = library.cyclic(13)
    cert = strong_set_search(G, 2, budget=5000, seed=7)
    assert cert is not None and cert.kind == STRONG_SET
    assert verify_base(G, cert)
    # every 2-subset and the 3-set itself must have trivial setwise stabilizer
    elems = [g for g in G.element_list() if not g.is_identity()]
    for S in [set(cert.points)] + [set(c) for c in combinations(cert.points, 2)]:
        assert not any({g(x) for x in S} == S for g in elems)


def test_strong_set_search_gives_up():
    assert strong_set_search(library.symmetric(5), 2, budget=100) is None
    with pytest.raises(DomainError):
        strong_set_search(library.symmetric(5), 0)


def test_base_to_exponent():
    a, w = base_to_exponent(10, 3, 100)
    assert w == 10
    assert float(a) == pytest.approx(19 * 10 / 2 / 10)


def test_strong_set_profile_length():
    prof = strong_set_profile(20, 3)
    assert len(prof) == 20 and prof.count(9) == 12
    with pytest.raises(DomainError):
        strong_set_profile(10, 3)


def test_class_file_parsing():
    data = load_class_file(data_dir() / "th_classes.txt")
    assert data.degree == 143127000
    assert len(data.classes) == 10
    text = "degree 5\norder 120\nname 2A order 2 size 10 fix 3\nname 3A order 3 size 20 fix 2\n"
    parsed = parse_class_file(text)
    G = library.symmetric(5)
    from_file = stab_prob_bounds(parsed, variant=EXACT)
    # the same two classes, taken from the group itself
    direct = stab_prob_bounds([c for c in _classes(G) if c.element_order in (2, 3) and c.fix_count in (3, 2)], degree=5, variant=EXACT)
    assert from_file == direct


def _classes(G):
    from galcount.perm import conjugacy_classes

    return conjugacy_classes(G)


@pytest.mark.parametrize(
    "text",
    [
        "name 2A order 2 size 1 fix 0\n",
        "degree 5\nname 2A order 2 size 1 fix 2\n",
        "degree 5\norder 10\nname 2A order 2 size 3 fix 1\n",
        "degree 5\nname 2A order two size 1 fix 1\n",
    ],
)
def test_bad_class_files(text):
    with pytest.raises(InputError):
        parse_class_file(text)


def test_prime_order_elements():
    G = library.symmetric(4)
    assert sum(1 for _ in iter_prime_order_elements(G)) == 9 + 8
    assert brute_force_bad_probability(G, 3) == Fraction(1)

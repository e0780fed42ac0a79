import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from galcount import library
from galcount.errors import InputError
from galcount.perm import (
    PermGroup,
    Permutation,
    conjugacy_classes,
    group_from_generators,
    group_to_text,
    is_regular,
    parse_cycles,
    parse_group_text,
    regular_representation,
    set_stabilizer_is_trivial,
)
from conftest import closure


def perm_strategy(n):
    return st.permutations(list(range(1, n + 1))).map(Permutation)


def test_composition_is_left_to_right():
    a = Permutation([2, 1, 3])
    b = Permutation([1, 3, 2])
    assert (a * b)(1) == b(a(1))


def test_cycles_and_order():
    g = Permutation.from_cycles(6, parse_cycles("(1,2)(3,4,5)"))
    assert g.order == 6
    assert sorted(g.cycle_type()) == [1, 2, 3]
    assert g.fix_count() == 1
    assert (g**6).is_identity()
    assert g * g.inverse() == Permutation.identity(6)


def test_rejects_non_bijection():
    with pytest.raises(InputError):
        Permutation([1, 1, 2])


@pytest.mark.parametrize(
    "name,order",
    [("cyclic:7", 7), ("dihedral:5", 10), ("symmetric:5", 120), ("alternating:6", 360), ("affine:7", 42)],
)
def test_family_orders(name, order):
    assert library.resolve(name).order == order


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=2, max_value=6).flatmap(lambda n: st.lists(perm_strategy(n), min_size=1, max_size=3)))
def test_order_matches_closure(gens):
    n = gens[0].degree
    G = group_from_generators(n, gens)
    elems = closure(gens, n)
    assert G.order == len(elems)
    assert all(G.contains(x) for x in elems)
    assert set(G.element_list()) == elems


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=2, max_value=6).flatmap(lambda n: st.lists(perm_strategy(n), min_size=1, max_size=3)))
def test_orbits_partition_points(gens):
    n = gens[0].degree
    G = group_from_generators(n, gens)
    pts = sorted(p for o in G.orbits() for p in o)
    assert pts == list(range(1, n + 1))
    for o in G.orbits():
        assert {g(x) for g in gens for x in o} == set(o)


def test_primitivity():
    assert library.symmetric(4).is_primitive()
    assert not library.dihedral(4).is_primitive()  # square: diagonals form blocks
    assert library.cyclic(5).is_primitive()
    assert not library.cyclic(6).is_primitive()


def test_regular_representation():
    G = library.symmetric(3)
    R = regular_representation(G)
    assert R.degree == 6 and R.order == 6
    assert is_regular(R)
    assert not is_regular(G)


def test_class_sizes_sum_to_order():
    G = library.symmetric(5)
    classes = conjugacy_classes(G)
    assert len(classes) == 7  # partitions of 5
    assert sum(c.class_size for c in classes) == 120


def test_set_stabilizer_against_enumeration():
    G = library.dihedral(6)
    rng = random.Random(3)
    for _ in range(20):
        S = set(rng.sample(range(1, 7), rng.randint(1, 4)))
        brute = not any(not g.is_identity() and {g(x) for x in S} == S for g in G.element_list())
        assert set_stabilizer_is_trivial(G, S) == brute


def test_text_roundtrip():
    G = library.alternating(5)
    H = parse_group_text(group_to_text(G))
    assert H.same_group(G)


def test_hash_key_is_invariant_of_generators():
    a = library.symmetric(4)
    b = PermGroup(4, [Permutation([2, 1, 3, 4]), Permutation([2, 3, 4, 1]), Permutation([1, 3, 2, 4])])
    assert a.hash_key() == b.hash_key()
    assert math.factorial(4) == b.order

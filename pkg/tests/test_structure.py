import itertools

import pytest

from galcount import library
from galcount.errors import DomainError, InputError
from galcount.perm import Permutation
from galcount.structure import (
    ElementaryAbelian,
    NonabelianCharSimple,
    Subgroup,
    all_subgroups,
    center,
    central_fiber_count,
    centralizer,
    count_core_free_subgroups,
    generation_bound_check,
    hyperplanes,
    is_homomorphism,
    is_normal,
    least_prime,
    minimal_normal_subgroups,
    order2_count,
    quotient,
)


def brute_subgroups(G):
    """Every subgroup as a frozenset, by closing all subsets of size <= 2 under products."""
    elems = G.element_list()
    found = set()
    for r in (1, 2):
        for gens in itertools.combinations(elems, r):
            S = {Permutation.identity(G.degree)}
            frontier = list(S)
            while frontier:
                x = frontier.pop()
                for g in gens:
                    y = x * g
                    if y not in S:
                        S.add(y)
                        frontier.append(y)
            found.add(frozenset(S))
    return found


def brute_core_free(G):
    elems = G.element_list()
    count = 0
    for H in brute_subgroups(G):
        core = set(H)
        for g in elems:
            core &= {h.conjugate(g) for h in H}
        count += len(core) == 1
    return count


def test_center_and_involutions():
    assert center(library.dihedral(4)).order == 2
    assert center(library.symmetric(4)).order == 1
    Q8 = library.small_group(8, 4)
    assert order2_count(Q8) == 1
    assert order2_count(library.symmetric(4)) == 9


def test_minimal_normals():
    rep = minimal_normal_subgroups(library.symmetric(4))
    assert len(rep) == 1
    N, cls = rep.subgroups[0]
    assert cls == ElementaryAbelian(2, 2)
    rep = minimal_normal_subgroups(library.alternating(5))
    (N, cls), = rep.subgroups
    assert isinstance(cls, NonabelianCharSimple) and cls.simple_order == 60 and cls.power == 1
    rep = minimal_normal_subgroups(library.abelian(2, 2))
    assert len(rep) == 3 and rep.all_abelian()


def test_minimal_normals_are_normal_and_minimal():
    for label, G in library.bundled_groups(2, 24):
        for N, _ in minimal_normal_subgroups(G):
            assert is_normal(G, N), label
            for g in N.elements:
                if g.is_identity():
                    continue
                closure = Subgroup.from_elements(G, [g.conjugate(h) for h in G.element_list()])
                assert closure == N, label


def test_quotient_order():
    G = library.symmetric(4)
    (N, _), = minimal_normal_subgroups(G)
    Q = quotient(G, N)
    assert Q.group.order == 6
    g, h = G.generators[0], G.generators[-1]
    assert Q.project(g * h) == Q.project(g) * Q.project(h)


def test_centralizer():
    G = library.symmetric(4)
    (N, _), = minimal_normal_subgroups(G)
    assert centralizer(G, N).order == 4


@pytest.mark.parametrize("p,r", [(2, 2), (2, 3), (3, 2)])
def test_hyperplane_count(p, r):
    A = library.abelian(*([p] * r))
    hs = hyperplanes(Subgroup(A, A.generators), p)
    assert len(hs) == (p**r - 1) // (p - 1)
    assert all(H.order == p ** (r - 1) for H in hs)


@pytest.mark.parametrize("name", ["symmetric:3", "dihedral:4", "smallgroup:8:4", "alternating:4", "smallgroup:12:1", "symmetric:4"])
def test_subgroup_enumeration_against_brute_force(name):
    G = library.resolve(name)
    assert len(all_subgroups(G)) == len(brute_subgroups(G))


@pytest.mark.parametrize("name", ["symmetric:3", "dihedral:4", "smallgroup:8:4", "alternating:4", "symmetric:4", "dihedral:6"])
def test_core_free_count_against_brute_force(name):
    G = library.resolve(name)
    exact, bound = count_core_free_subgroups(G)
    assert exact == brute_core_free(G)
    assert exact <= bound


def test_generation_bound():
    for G in (library.symmetric(4), library.dihedral(6), library.abelian(2, 2, 2)):
        assert generation_bound_check(G)


def test_least_prime():
    assert least_prime(15) == 3
    assert least_prime(2) == 2
    assert least_prime(49) == 7


def test_central_fiber_matches_hom_count():
    gamma = library.cyclic(4)
    G = library.small_group(8, 4)  # Q8
    Z = center(G)
    rho = [next(g for g in G.element_list() if g.order == 4)]
    fiber, homs = central_fiber_count(gamma, G, Z, rho)
    assert homs == 2
    assert fiber == homs


def test_central_fiber_rejects_bad_input():
    gamma = library.cyclic(3)
    G = library.dihedral(4)
    Z = center(G)
    with pytest.raises(InputError):
        central_fiber_count(gamma, G, Z, [G.generators[0]])  # order 4 image of a 3-cycle
    with pytest.raises(DomainError):
        S4 = library.symmetric(4)
        (N, _), = minimal_normal_subgroups(S4)
        central_fiber_count(library.cyclic(2), S4, N, [S4.identity])


def test_is_homomorphism():
    C6 = library.cyclic(6)
    C3 = library.cyclic(3)
    g = C3.generators[0]
    assert is_homomorphism(C6, C3, [g])
    assert not is_homomorphism(C3, library.cyclic(2), [library.cyclic(2).generators[0]])

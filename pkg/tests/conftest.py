import itertools

import pytest

from galcount.perm import Permutation


def closure(gens, degree):
    """Plain orbit-of-identity closure; slow but obviously correct."""
    ident = Permutation.identity(degree)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


@pytest.fixture
def brute_closure():
    return closure


def all_perms(n):
    return [Permutation(p) for p in itertools.permutations(range(1, n + 1))]

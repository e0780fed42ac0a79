"""Structural analysis of permutation groups at desk scale.

Everything here works from explicit element lists, so each operation is
exact and bounded by the enumeration cap (10^5 elements) or, for full
subgroup enumeration, the subgroup cap (200).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import mpmath
from sympy import factorint

from .errors import DomainError, InputError, ResourceError
from .perm import DEFAULT_CAP, Permutation, PermGroup, conjugacy_class_sets

SUBGROUP_CAP = 200

# Orders of nonabelian simple groups below 10^6 (used only to name factors).
SIMPLE_ORDERS = {
    60: "A5", 168: "L2(7)", 360: "A6", 504: "L2(8)", 660: "L2(11)", 1092: "L2(13)",
    2448: "L2(17)", 2520: "A7", 3420: "L2(19)", 4080: "L2(16)", 5616: "L3(3)",
    6048: "U3(3)", 6072: "L2(23)", 7800: "L2(25)", 7920: "M11", 9828: "L2(27)",
    12180: "L2(29)", 14880: "L2(31)", 20160: "A8 or L3(4)", 25308: "L2(37)",
    25920: "U4(2)", 29120: "Sz(8)", 32736: "L2(32)", 34440: "L2(41)",
    39732: "L2(43)", 51888: "L2(47)", 58800: "L2(49)", 62400: "U3(4)",
    74412: "L2(53)", 95040: "M12", 102660: "L2(59)", 113460: "L2(61)",
    126000: "U3(5)", 150348: "L2(67)", 175560: "J1", 178920: "L2(71)",
    181440: "A9", 194472: "L2(73)", 246480: "L2(79)", 262080: "L2(64)",
    265680: "L2(81)", 285852: "L2(83)", 352440: "L2(89)", 372000: "L3(5)",
    443520: "M22", 456288: "L2(97)", 515100: "L2(101)", 546312: "L2(103)",
    604800: "J2", 612468: "L2(107)", 647460: "L2(109)", 721392: "L2(113)",
    885720: "L2(121)", 976500: "L2(125)",
}


def big_omega(n: int) -> int:
    """Number of prime factors of n counted with multiplicity."""
    return sum(factorint(n).values()) if n > 1 else 0


def least_prime(n: int) -> int:
    if n < 2:
        raise DomainError("no prime divisor")
    return min(factorint(n))


class Subgroup:
    """A subgroup of ``parent`` backed by its own stabilizer chain."""

    def __init__(self, parent: PermGroup, generators: Iterable[Permutation]):
        gens = list(generators)
        self.parent = parent
        self.group = PermGroup(parent.degree, gens)
        if parent.order % self.group.order:
            raise DomainError("subgroup order does not divide the parent order")

    @classmethod
    def from_elements(cls, parent: PermGroup, elems: Iterable[Permutation]) -> "Subgroup":
        """Greedy generating set: keep an element only if it enlarges the span."""
        gens: list[Permutation] = []
        current = PermGroup(parent.degree, [])
        for g in sorted(elems):
            if not current.contains(g):
                gens.append(g)
                current = PermGroup(parent.degree, gens)
        sub = cls.__new__(cls)
        sub.parent = parent
        sub.group = current
        return sub

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def generators(self) -> tuple[Permutation, ...]:
        return self.group.generators

    def contains(self, g: Permutation) -> bool:
        return self.group.contains(g)

    __contains__ = contains

    @cached_property
    def elements(self) -> frozenset:
        return frozenset(self.group.element_list())

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_abelian(self) -> bool:
        return self.group.is_abelian()

    def is_subgroup_of(self, other: "Subgroup") -> bool:
        return all(other.contains(g) for g in self.generators)

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.order == other.order and self.is_subgroup_of(other)

    def __hash__(self):
        return hash((self.order, frozenset(self.elements) if self.order <= 64 else self.order))

    def __repr__(self):
        return f"Subgroup(order={self.order} of {self.parent.order})"


def whole(G: PermGroup) -> Subgroup:
    return Subgroup(G, G.generators)


def trivial_subgroup(G: PermGroup) -> Subgroup:
    return Subgroup(G, [])


def is_normal(G: PermGroup, H: Subgroup) -> bool:
    return all(H.contains(h.conjugate(g)) for h in H.generators for g in G.generators)


def center(G: PermGroup, cap: int = DEFAULT_CAP) -> Subgroup:
    gens = G.generators
    return Subgroup.from_elements(G, (z for z in G.element_list(cap) if all(z * g == g * z for g in gens)))


def centralizer(G: PermGroup, N: Subgroup, cap: int = DEFAULT_CAP) -> Subgroup:
    if N.group.degree != G.degree or not all(G.contains(g) for g in N.generators):
        raise DomainError("N is not a subgroup of G")
    gens = N.generators
    return Subgroup.from_elements(G, (c for c in G.element_list(cap) if all(c * g == g * c for g in gens)))


def normalizer(G: PermGroup, H: Subgroup, cap: int = DEFAULT_CAP) -> Subgroup:
    return Subgroup.from_elements(
        G, (g for g in G.element_list(cap) if all(H.contains(h.conjugate(g)) for h in H.generators))
    )


def order2_count(G: PermGroup, cap: int = DEFAULT_CAP) -> int:
    return sum(1 for g in G.element_list(cap) if g.order == 2)


# ---------------------------------------------------------------------------
# Minimal normal subgroups


@dataclass(frozen=True)
class ElementaryAbelian:
    p: int
    r: int

    def __str__(self):
        return f"ElementaryAbelian(p={self.p}, r={self.r})"


@dataclass(frozen=True)
class NonabelianCharSimple:
    order_factorization: tuple[tuple[int, int], ...]
    simple_order: int | None = None
    power: int | None = None
    simple_name: str | None = None

    def __str__(self):
        fac = "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.order_factorization)
        extra = f", T={self.simple_name} (|T|={self.simple_order}), r={self.power}" if self.simple_order else ""
        return f"NonabelianCharSimple({fac}{extra})"


@dataclass
class MinimalNormalReport:
    subgroups: list[tuple[Subgroup, ElementaryAbelian | NonabelianCharSimple]]

    def __len__(self):
        return len(self.subgroups)

    def __iter__(self):
        return iter(self.subgroups)

    def all_abelian(self) -> bool:
        return all(isinstance(c, ElementaryAbelian) for _, c in self.subgroups)


def _classify(N: Subgroup) -> ElementaryAbelian | NonabelianCharSimple:
    fac = factorint(N.order)
    if N.is_abelian():
        if len(fac) != 1:
            raise AssertionError("abelian minimal normal subgroup of non-prime-power order")
        (p, r), = fac.items()
        if any(g.order != p for g in N.elements if not g.is_identity()):
            raise AssertionError("abelian minimal normal subgroup is not elementary")
        return ElementaryAbelian(p, r)
    items = tuple(sorted(fac.items()))
    for r in range(max(fac.values()), 0, -1):
        t = round(N.order ** (1.0 / r))
        for cand in (t - 1, t, t + 1):
            if cand > 1 and cand**r == N.order and cand in SIMPLE_ORDERS:
                return NonabelianCharSimple(items, cand, r, SIMPLE_ORDERS[cand])
    return NonabelianCharSimple(items)


def minimal_normal_subgroups(G: PermGroup, cap: int = DEFAULT_CAP) -> MinimalNormalReport:
    """Minimal elements among normal closures of single conjugacy classes."""
    if G.is_trivial():
        raise DomainError("the trivial group has no minimal normal subgroups")
    closures: list[Subgroup] = []
    for cls in conjugacy_class_sets(G, cap):
        if cls[0].is_identity():
            continue
        N = Subgroup.from_elements(G, cls)
        if not any(M == N for M in closures):
            closures.append(N)
    minimal = [
        N for N in closures
        if not any(M.order < N.order and M.is_subgroup_of(N) for M in closures)
    ]
    minimal.sort(key=lambda N: (N.order, [g._a for g in N.generators]))
    return MinimalNormalReport([(N, _classify(N)) for N in minimal])


def intersection_order(A: Subgroup, B: Subgroup) -> int:
    small, big = (A, B) if A.order <= B.order else (B, A)
    return sum(1 for g in small.elements if big.contains(g))


# ---------------------------------------------------------------------------
# Quotients


@dataclass
class Quotient:
    """G/N realized as the regular action of G on right cosets Ng."""

    group: PermGroup
    coset_index: dict
    representatives: list[Permutation]

    def project(self, g: Permutation) -> Permutation:
        idx = self.coset_index
        return Permutation._raw(tuple(idx[r * g] for r in self.representatives))


def quotient(G: PermGroup, N: Subgroup, cap: int = DEFAULT_CAP) -> Quotient:
    elems = G.element_list(cap)
    n_elems = sorted(N.elements)
    coset: dict[Permutation, int] = {}
    reps: list[Permutation] = []
    for g in elems:
        if g in coset:
            continue
        c = len(reps)
        reps.append(g)
        for n in n_elems:
            coset[n * g] = c
    m = len(reps)
    gens = [Permutation._raw(tuple(coset[r * s] for r in reps)) for s in G.generators]
    return Quotient(PermGroup(m, gens), coset, reps)


# ---------------------------------------------------------------------------
# Elementary abelian coordinates (used for hyperplanes in the bound recursion)


def elementary_basis(N: Subgroup, p: int) -> list[Permutation]:
    basis: list[Permutation] = []
    span = PermGroup(N.parent.degree, [])
    for g in sorted(N.elements):
        if not span.contains(g):
            basis.append(g)
            span = PermGroup(N.parent.degree, basis)
    return basis


def hyperplanes(N: Subgroup, p: int) -> list[Subgroup]:
    """All index-p subgroups of the elementary abelian group N = F_p^r."""
    basis = elementary_basis(N, p)
    r = len(basis)
    out = []
    for phi in itertools.product(range(p), repeat=r):
        nz = [c for c in phi if c]
        if not nz or nz[0] != 1:
            continue
        # kernel of phi: generated by vectors e_i - phi_i/phi_j e_j for a pivot j
        j = next(i for i, c in enumerate(phi) if c)
        inv = pow(phi[j], -1, p)
        gens = []
        for i in range(r):
            if i == j:
                continue
            coef = (-phi[i] * inv) % p
            gens.append(basis[i] * basis[j] ** coef)
        out.append(Subgroup(N.parent, gens))
    return out


# ---------------------------------------------------------------------------
# Subgroup enumeration (bitmask based)


class _Table:
    def __init__(self, G: PermGroup, cap: int):
        if G.order > cap:
            raise ResourceError(f"group order {G.order} exceeds the subgroup-enumeration cap {cap}")
        self.elems = G.element_list()
        idx = {g: i for i, g in enumerate(self.elems)}
        self.index = idx
        self.mul = [[idx[a * b] for b in self.elems] for a in self.elems]
        self.orders = [g.order for g in self.elems]

    def closure(self, gens: Sequence[int]) -> int:
        mask = 1
        queue = [0]
        mul = self.mul
        for x in queue:
            row = mul[x]
            for g in gens:
                y = row[g]
                if not mask >> y & 1:
                    mask |= 1 << y
                    queue.append(y)
        return mask


def _enumerate_subgroup_masks(G: PermGroup, cap: int) -> tuple[_Table, dict[int, tuple[int, ...]]]:
    t = _Table(G, cap)
    n = len(t.elems)
    cyclic: dict[int, int] = {}
    for x in range(n):
        m = t.closure([x])
        cyclic.setdefault(m, x)
    found: dict[int, tuple[int, ...]] = {1: ()}
    for m, x in cyclic.items():
        found.setdefault(m, (x,))
    frontier = list(found.items())
    cyc_items = list(cyclic.items())
    while frontier:
        nxt = []
        for mask, gens in frontier:
            for cm, x in cyc_items:
                if cm & ~mask == 0:
                    continue
                j = t.closure(gens + (x,))
                if j not in found:
                    found[j] = gens + (x,)
                    nxt.append((j, found[j]))
        frontier = nxt
    return t, found


@dataclass(frozen=True)
class SubgroupRecord:
    order: int
    generators: tuple[Permutation, ...]
    mask: int = field(repr=False)


def all_subgroups(G: PermGroup, cap: int = SUBGROUP_CAP) -> list[SubgroupRecord]:
    """Every subgroup, sorted by order and then by a canonical generator list."""
    t, found = _enumerate_subgroup_masks(G, cap)
    out = []
    for mask in found:
        gens = _greedy_generators(t, mask)
        out.append(SubgroupRecord(bin(mask).count("1"), tuple(t.elems[i] for i in gens), mask))
    out.sort(key=lambda s: (s.order, [g._a for g in s.generators]))
    return out


def _greedy_generators(t: _Table, mask: int) -> list[int]:
    gens: list[int] = []
    cur = 1
    while cur != mask:
        rest = mask & ~cur
        nxt = (rest & -rest).bit_length() - 1
        gens.append(nxt)
        cur = t.closure(gens)
    return gens


def core_free_bound(order: int, dps: int = 30):
    """exp((log |G|)^2 / log 2)."""
    with mpmath.workdps(dps):
        lg = mpmath.log(order)
        return mpmath.exp(lg * lg / mpmath.log(2))


def count_core_free_subgroups(G: PermGroup, cap: int = SUBGROUP_CAP, evaluate_only: bool = False):
    """Return (exact count or None, bound)."""
    bound = core_free_bound(G.order)
    if evaluate_only:
        return None, bound
    t, found = _enumerate_subgroup_masks(G, cap)
    if G.is_trivial():
        return 1, bound
    mins = []
    for N, _ in minimal_normal_subgroups(G):
        m = 0
        for g in N.elements:
            m |= 1 << t.index[g]
        mins.append(m)
    exact = sum(1 for mask in found if all(nm & ~mask for nm in mins))
    return exact, bound


def generation_bound_check(G: PermGroup, cap: int = SUBGROUP_CAP) -> bool:
    t, found = _enumerate_subgroup_masks(G, cap)
    limit = big_omega(G.order)
    return all(len(_greedy_generators(t, mask)) <= limit for mask in found)


# ---------------------------------------------------------------------------
# Central extensions: fibers over a fixed projection


def _generated_order(gamma: PermGroup, G: PermGroup, pairs: Sequence[tuple[Permutation, Permutation]]) -> int:
    n1, n2 = gamma.degree, G.degree
    gens = []
    for a, b in pairs:
        gens.append(Permutation._raw(a._a + tuple(n1 + x for x in b._a)))
    return PermGroup(n1 + n2, gens).order


def is_homomorphism(gamma: PermGroup, G: PermGroup, images: Sequence[Permutation]) -> bool:
    """Generator images define a homomorphism iff their graph is a subgroup of order |Gamma|."""
    if len(images) != len(gamma.generators):
        return False
    return _generated_order(gamma, G, list(zip(gamma.generators, images))) == gamma.order


def central_fiber_count(
    gamma: PermGroup, G: PermGroup, A: Subgroup, rho: Sequence[Permutation]
) -> tuple[int, int]:
    """Count lifts of the projection of rho through G -> G/A, and |Hom(Gamma, A)|."""
    rho = list(rho)
    if not all(G.contains(x) for x in rho):
        raise InputError("homomorphism images must lie in G")
    if not is_homomorphism(gamma, G, rho):
        raise InputError("generator images do not define a homomorphism")
    if not all(a * g == g * a for a in A.generators for g in G.generators):
        raise DomainError("A is not central in G")
    a_elems = sorted(A.elements)
    k = len(gamma.generators)
    fiber = 0
    homs = 0
    for choice in itertools.product(a_elems, repeat=k):
        if is_homomorphism(gamma, G, [r * a for r, a in zip(rho, choice)]):
            fiber += 1
        if is_homomorphism(gamma, G, list(choice)):
            homs += 1
    return fiber, homs

"""Bases, strong sets and exact stabilizer-probability bounds."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Iterable, Sequence

from sympy import isprime

from .errors import DomainError, InputError
from .perm import ClassSummary, PermGroup, Permutation, conjugacy_classes, set_stabilizer_is_trivial
from .rootexpr import RootExpr

POINTWISE = "PointwiseBase"
STRONG_SET = "StrongSet"


@dataclass(frozen=True)
class BaseCertificate:
    points: tuple[int, ...]
    kind: str
    b: int | None = None

    def __str__(self):
        pts = " ".join(map(str, self.points))
        label = self.kind if self.b is None else f"{self.kind}(b={self.b})"
        return f"{label}: {pts}"

    def to_record(self) -> dict:
        return {"kind": self.kind, "b": self.b, "points": list(self.points)}


def greedy_base(G: PermGroup) -> BaseCertificate:
    """Repeatedly fix a point of largest orbit under the current stabilizer."""
    if G.is_trivial():
        raise DomainError("the trivial group has an empty base")
    points: list[int] = []
    H = G
    while not H.is_trivial():
        orbits = H.orbits()
        best = max(orbits, key=lambda o: (len(o), -min(o)))
        pt = min(best)
        points.append(pt)
        H = G.pointwise_stabilizer(points)
    return BaseCertificate(tuple(points), POINTWISE)


def verify_base(G: PermGroup, cert: BaseCertificate) -> bool:
    pts = list(cert.points)
    if cert.kind == POINTWISE:
        if not G.pointwise_stabilizer(pts).is_trivial():
            return False
        return all(not G.pointwise_stabilizer(pts[:i]).is_trivial() for i in range(len(pts)))
    b = cert.b
    if len(set(pts)) != b + 1 or not set_stabilizer_is_trivial(G, pts):
        return False
    return all(set_stabilizer_is_trivial(G, sub) for sub in combinations(pts, b))


# -- invariant tuple counts ----------------------------------------------------

EXACT = "exact"
PUBLISHED = "published"


def _tuple_count(n: int, fix: int, order: int, k: int, variant: str = EXACT) -> int:
    """Ordered k-tuples over {1..n} whose underlying set is invariant under g.

    g has prime order ``order`` and ``fix`` fixed points; ``moved = n - fix``.
    With ``variant="published"`` the involution term for k = 4 uses 12*Fix^2
    in place of the exact 6*Fix^2, giving a larger (still valid) count.
    """
    if k not in (3, 4):
        raise DomainError(f"k must be 3 or 4, got {k}")
    if not isprime(order):
        raise DomainError(f"element order {order} is not prime")
    if not 0 <= fix <= n:
        raise InputError(f"fixed-point count {fix} outside 0..{n}")
    moved = n - fix
    if moved % order:
        raise InputError(f"{moved} moved points cannot split into {order}-cycles")
    total = fix**k
    if k == 3:
        if order == 3:
            total += 2 * moved
        elif order == 2:
            total += 3 * fix * moved + 3 * moved
    else:
        if order == 3:
            total += (8 * fix + 12) * moved
        elif order == 2:
            sq = 12 if variant == PUBLISHED else 6
            total += 3 * moved**2 + (sq * fix * fix + 12 * fix + 1) * moved
    return total


def set_invariant_tuple_count(g: Permutation, k: int) -> int:
    """Exact number of k-tuples (k = 3 or 4) whose underlying set g maps onto itself."""
    if g.is_identity():
        raise DomainError("the identity does not have prime order")
    return _tuple_count(g.degree, g.fix_count(), g.order, k)


def brute_force_tuple_count(g: Permutation, k: int) -> int:
    """Reference count by enumerating every underlying set (used as an oracle)."""
    n = g.degree
    total = 0
    # a set S of size s is hit by s! * S(k, s) ordered k-tuples
    surj = {3: {1: 1, 2: 6, 3: 6}, 4: {1: 1, 2: 14, 3: 36, 4: 24}}[k]
    for s in range(1, k + 1):
        for S in combinations(range(1, n + 1), s):
            if {g(x) for x in S} == set(S):
                total += surj[s]
    return total


# -- probability bounds --------------------------------------------------------


@dataclass(frozen=True)
class StabProbBound:
    degree: int
    triple_bound: Fraction
    quadruple_bound: Fraction
    union_bound_4choose3: Fraction
    variant: str = PUBLISHED

    def to_record(self) -> dict:
        from .rootexpr import frac_str

        return {
            "degree": self.degree,
            "variant": self.variant,
            "triple_bound": frac_str(self.triple_bound),
            "quadruple_bound": frac_str(self.quadruple_bound),
            "union_bound_4choose3": frac_str(self.union_bound_4choose3),
        }


@dataclass(frozen=True)
class ClassData:
    """Prime-order class data as read from a class file."""

    degree: int
    classes: tuple[tuple[str, ClassSummary], ...]
    group_order: int | None = None


def _validate_classes(degree: int, classes: Sequence[ClassSummary], group_order: int | None) -> None:
    for c in classes:
        if c.class_size < 1:
            raise InputError(f"class size {c.class_size} must be positive")
        if not 0 <= c.fix_count <= degree:
            raise InputError(f"fix count {c.fix_count} outside 0..{degree}")
        # only prime orders force every moved point into a full cycle
        if isprime(c.element_order) and (degree - c.fix_count) % c.element_order:
            raise InputError(f"fix count {c.fix_count} incompatible with order {c.element_order} on {degree} points")
    if group_order is not None:
        total = sum(c.class_size for c in classes)
        if total > group_order:
            raise InputError(f"class sizes sum to {total} > |G| = {group_order}")
        if any(group_order % c.class_size for c in classes):
            raise InputError("a class size does not divide the group order")


def stab_prob_bounds(
    source: PermGroup | ClassData | Sequence[ClassSummary],
    degree: int | None = None,
    variant: str = PUBLISHED,
) -> StabProbBound:
    """Union bounds for a random 3- or 4-tuple having nontrivial setwise stabilizer.

    Sums class_size * count_k / n^k over classes of prime order.
    """
    if variant not in (EXACT, PUBLISHED):
        raise InputError(f"unknown variant {variant!r}")
    group_order = None
    if isinstance(source, PermGroup):
        degree = source.degree
        group_order = source.order
        classes = conjugacy_classes(source)
        if sum(c.class_size for c in classes) != group_order:
            raise InputError("class sizes do not sum to |G|")
    elif isinstance(source, ClassData):
        degree = source.degree
        group_order = source.group_order
        classes = [c for _, c in source.classes]
    else:
        classes = list(source)
        if degree is None:
            raise InputError("degree is required with a class list")
    _validate_classes(degree, classes, group_order)
    triple = Fraction(0)
    quad = Fraction(0)
    for c in classes:
        if not isprime(c.element_order):
            continue
        triple += c.class_size * _tuple_count(degree, c.fix_count, c.element_order, 3, variant)
        quad += c.class_size * _tuple_count(degree, c.fix_count, c.element_order, 4, variant)
    triple /= degree**3
    quad /= degree**4
    return StabProbBound(degree, triple, quad, quad + 4 * triple, variant)


def parse_class_file(text: str) -> ClassData:
    """Read ``degree <n>`` [``order <|G|>``] then ``name <l> order <m> size <s> fix <f>`` lines."""
    degree = None
    group_order = None
    classes = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "degree" and len(tok) == 2:
                degree = int(tok[1])
            elif tok[0] == "order" and len(tok) == 2:
                group_order = int(tok[1])
            elif tok[0] == "name" and len(tok) == 8 and tok[2::2] == ["order", "size", "fix"]:
                label = tok[1]
                m, size, fix = int(tok[3]), int(tok[5]), int(tok[7])
                classes.append((label, ClassSummary(None, size, m, fix)))
            else:
                raise ValueError
        except ValueError:
            raise InputError(f"line {lineno}: cannot parse {raw!r}") from None
    if degree is None or degree < 1:
        raise InputError("class file lacks a positive 'degree' header")
    _validate_classes(degree, [c for _, c in classes], group_order)
    return ClassData(degree, tuple(classes), group_order)


def load_class_file(path: str | Path) -> ClassData:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read class file {path}: {exc.strerror}") from None
    return parse_class_file(text)


# -- strong sets -----------------------------------------------------------------


def _is_strong(G: PermGroup, pts: Sequence[int], b: int) -> bool:
    if not set_stabilizer_is_trivial(G, pts):
        return False
    return all(set_stabilizer_is_trivial(G, sub) for sub in combinations(pts, b))


def strong_set_search(G: PermGroup, b: int, budget: int = 100_000, seed: int = 0) -> BaseCertificate | None:
    """Look for b+1 points whose set stabilizer and all b-subset stabilizers are trivial.

    Seeded random sampling first, then lexicographic search when n <= 50.
    Returns None when the budget runs out; that is not a proof of absence.
    """
    if b < 1:
        raise DomainError("b must be at least 1")
    n = G.degree
    size = b + 1
    if size > n:
        return None
    total = comb(n, size)
    systematic = n <= 50
    random_budget = budget if not systematic else (0 if total <= budget // 2 else budget // 2)
    rng = random.Random(seed)
    tried: set[tuple[int, ...]] = set()
    spent = 0
    for _ in range(random_budget):
        cand = tuple(sorted(rng.sample(range(1, n + 1), size)))
        spent += 1
        if cand in tried:
            continue
        tried.add(cand)
        if _is_strong(G, cand, b):
            return BaseCertificate(cand, STRONG_SET, b)
    if systematic:
        for cand in combinations(range(1, n + 1), size):
            if spent >= budget:
                break
            if cand in tried:
                continue
            spent += 1
            if _is_strong(G, cand, b):
                return BaseCertificate(cand, STRONG_SET, b)
    return None


def base_to_exponent(n: int, b: int, group_order: int, gamma: int = 1) -> tuple[RootExpr, Fraction]:
    """(b^2+3b+1) n gamma / (2 sqrt|G|) and the companion mean degree (b+1)(b+2)/2."""
    if min(n, b, group_order, gamma) < 1:
        raise DomainError("all inputs must be positive")
    a = RootExpr(Fraction((b * b + 3 * b + 1) * n * gamma, 2)) * RootExpr.inv_sqrt(group_order)
    return a, Fraction((b + 1) * (b + 2), 2)


def strong_set_profile(n: int, b: int) -> list[int]:
    """Degree profile {1, 2, 3, 4, 5^(n-16), 9^12} attached to a strong 4-set (b = 3)."""
    if b != 3:
        raise DomainError("only the b = 3 profile is tabulated")
    if n < 16:
        raise DomainError("the b = 3 profile needs n >= 16")
    return [1, 2, 3, 4] + [5] * (n - 16) + [9] * 12


def class_data_for(G: PermGroup) -> ClassData:
    """Class data of a concrete group, restricted to prime-order classes."""
    cls = [c for c in conjugacy_classes(G) if isprime(c.element_order)]
    return ClassData(G.degree, tuple((f"c{i}", c) for i, c in enumerate(cls)), G.order)


def brute_force_bad_probability(G: PermGroup, k: int) -> Fraction:
    """Exact probability that a uniform k-tuple's set has nontrivial setwise stabilizer."""
    n = G.degree
    surj = {3: {1: 1, 2: 6, 3: 6}, 4: {1: 1, 2: 14, 3: 36, 4: 24}}[k]
    bad = 0
    for s in range(1, k + 1):
        for S in combinations(range(1, n + 1), s):
            if not set_stabilizer_is_trivial(G, S):
                bad += surj[s]
    return Fraction(bad, n**k)


def iter_prime_order_elements(G: PermGroup) -> Iterable[Permutation]:
    return (g for g in G.element_list() if not g.is_identity() and isprime(g.order))

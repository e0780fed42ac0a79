"""Orbit-sum invariants and the regular-representation invariant set.

Polynomials are sparse: a monomial is a sorted tuple of (variable, exponent)
pairs with 1-based variables, and a polynomial maps monomials to integer
coefficients. Orbit sums are taken over *distinct* monomials, so every
coefficient of an orbit sum is 1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from sympy import Matrix, nextprime

from .errors import DomainError
from .perm import DEFAULT_CAP, Permutation, PermGroup, is_regular
from .rootexpr import RootExpr
from .structure import order2_count

Monomial = tuple  # ((var, exp), ...)

INDEPENDENCE_MAX_N = 256


def monomial_from_vector(vec: Sequence[int]) -> Monomial:
    return tuple((i + 1, e) for i, e in enumerate(vec) if e)


def monomial_to_vector(mono: Monomial, n: int) -> list[int]:
    out = [0] * n
    for v, e in mono:
        out[v - 1] = e
    return out


def monomial_degree(mono: Monomial) -> int:
    return sum(e for _, e in mono)


def act(mono: Monomial, g: Permutation) -> Monomial:
    """Image of a monomial under x_i -> x_{g(i)}."""
    return tuple(sorted((g(v), e) for v, e in mono))


class SparsePoly:
    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def variable(cls, i: int) -> "SparsePoly":
        return cls({((i, 1),): 1})

    def __add__(self, other: "SparsePoly") -> "SparsePoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return SparsePoly(out)

    def scale(self, k: int) -> "SparsePoly":
        return SparsePoly({m: k * c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + other.scale(-1)

    def __mul__(self, other: "SparsePoly") -> "SparsePoly":
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                d = dict(m1)
                for v, e in m2:
                    d[v] = d.get(v, 0) + e
                m = tuple(sorted(d.items()))
                out[m] = out.get(m, 0) + c1 * c2
        return SparsePoly(out)

    def __eq__(self, other):
        return isinstance(other, SparsePoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_homogeneous(self) -> bool:
        return len({monomial_degree(m) for m in self.terms}) <= 1

    @property
    def degree(self) -> int:
        return max((monomial_degree(m) for m in self.terms), default=0)

    def evaluate(self, point: Sequence[int], modulus: int | None = None) -> int:
        total = 0
        for m, c in self.terms.items():
            t = c
            for v, e in m:
                t *= pow(point[v - 1], e, modulus) if modulus else point[v - 1] ** e
            total += t
        return total % modulus if modulus else total

    def gradient(self, point: Sequence[int], n: int, modulus: int) -> list[int]:
        """All partial derivatives at ``point`` modulo ``modulus``."""
        grad = [0] * n
        for m, c in self.terms.items():
            vals = [pow(point[v - 1], e, modulus) for v, e in m]
            for k, (v, e) in enumerate(m):
                t = c * e * pow(point[v - 1], e - 1, modulus)
                for j, val in enumerate(vals):
                    if j != k:
                        t = t * val % modulus
                grad[v - 1] = (grad[v - 1] + t) % modulus
        return grad

    def is_invariant(self, G: PermGroup) -> bool:
        return all(
            all(self.terms.get(act(m, g), 0) == c for m, c in self.terms.items())
            for g in G.generators
        )


def monomial_orbit(G: PermGroup, mono: Monomial) -> list[Monomial]:
    seen = {mono}
    queue = [mono]
    for m in queue:
        for g in G.generators:
            y = act(m, g)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return sorted(seen)


@dataclass(frozen=True)
class OrbitSumInvariant:
    group: PermGroup = field(repr=False, compare=False)
    seed_monomial: tuple[int, ...]
    degree: int
    orbit_size: int
    poly: SparsePoly = field(repr=False, compare=False)

    def evaluate(self, point: Sequence[int], modulus: int | None = None) -> int:
        return self.poly.evaluate(point, modulus)

    def to_text(self) -> str:
        seed = ",".join(map(str, self.seed_monomial))
        return f"deg={self.degree} seed={seed} orbit={self.orbit_size}"


@dataclass(frozen=True)
class PolyInvariant:
    """A user-supplied homogeneous polynomial treated as an invariant."""

    poly: SparsePoly
    degree: int

    @classmethod
    def of(cls, poly: SparsePoly) -> "PolyInvariant":
        return cls(poly, poly.degree)


def orbit_sum(G: PermGroup, monomial: Sequence[int] | Monomial) -> OrbitSumInvariant:
    """Sum of the distinct monomials in the G-orbit of ``monomial``.

    ``monomial`` is either a dense exponent vector of length ``G.degree`` or a
    sparse ((var, exp), ...) tuple.
    """
    if monomial and isinstance(monomial[0], tuple):
        mono = tuple(sorted(monomial))
    else:
        if len(monomial) != G.degree:
            raise DomainError(f"exponent vector of length {len(monomial)} for degree {G.degree}")
        mono = monomial_from_vector(monomial)
    if not mono:
        raise DomainError("orbit sum of the constant monomial")
    if any(e < 0 for _, e in mono):
        raise DomainError("negative exponent")
    orbit = monomial_orbit(G, mono)
    poly = SparsePoly({m: 1 for m in orbit})
    return OrbitSumInvariant(G, tuple(monomial_to_vector(mono, G.degree)), monomial_degree(mono), len(orbit), poly)


# -- independence status ---------------------------------------------------


@dataclass(frozen=True)
class Unverified:
    reason: str = ""

    def __str__(self):
        return f"Unverified({self.reason})" if self.reason else "Unverified"


@dataclass(frozen=True)
class VerifiedRandomized:
    failure_bound: Fraction
    prime: int
    trials: int

    def __str__(self):
        return f"VerifiedRandomized(failure bound <= {float(self.failure_bound):.3e})"


@dataclass(frozen=True)
class Failed:
    trials: int

    def __str__(self):
        return f"Failed(all {self.trials} trials vanished)"


@dataclass
class InvariantSet:
    invariants: list
    independence_status: object = field(default_factory=Unverified)

    @property
    def degree_profile(self) -> list[int]:
        return sorted(f.degree for f in self.invariants)

    def __len__(self):
        return len(self.invariants)

    def to_text(self) -> str:
        lines = [f.to_text() if hasattr(f, "to_text") else f"deg={f.degree}" for f in self.invariants]
        return "\n".join(lines) + "\n"


# -- the regular construction ----------------------------------------------


def _point_elements(G: PermGroup) -> dict[int, Permutation]:
    """For a regular group: point i -> the unique element sending 1 to i."""
    out = {}
    for g in G.element_list():
        out[g(1)] = g
    return out


def regular_invariant_set(G: PermGroup, cap: int = DEFAULT_CAP) -> InvariantSet:
    """f_1 = (x1)^G, the distinct (x1 x_i)^G, then one (x1^2 x_i)^G per inverse pair of order > 2."""
    if not is_regular(G):
        raise DomainError("regular_invariant_set needs a regular permutation group")
    n = G.degree
    if n > cap:
        raise DomainError(f"degree {n} exceeds the cap {cap}")
    invs = [orbit_sum(G, ((1, 1),))]
    if n == 1:
        return InvariantSet(invs)
    elem = _point_elements(G)
    seen_orbits: set[frozenset] = set()
    for i in range(2, n + 1):
        f = orbit_sum(G, ((1, 1), (i, 1)))
        key = frozenset(f.poly.terms)
        if key not in seen_orbits:
            seen_orbits.add(key)
            invs.append(f)
    done: set[int] = set()
    for i in range(2, n + 1):
        g = elem[i]
        if g.order <= 2 or i in done:
            continue
        j = g.inverse()(1)
        done.update((i, j))
        invs.append(orbit_sum(G, ((1, 2), (i, 1))))
    return InvariantSet(invs)


def expected_regular_profile(n: int, n2: int) -> list[int]:
    if n == 1:
        return [1]
    twos = (n + n2 - 1) // 2
    return [1] + [2] * twos + [3] * (n - 1 - twos)


def degree2_orbit_count(G: PermGroup) -> int:
    if not is_regular(G):
        raise DomainError("degree2_orbit_count needs a regular permutation group")
    n = G.degree
    seen: set = set()
    count = 0
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            mono = ((i, 2),) if i == j else ((i, 1), (j, 1))
            if mono in seen:
                continue
            count += 1
            seen.update(monomial_orbit(G, mono))
    return count


def low_degree_span_dimensions(G: PermGroup) -> tuple[int, int]:
    """Ranks over Q of the orbit-sum coefficient matrices in degrees 1 and 2."""
    n = G.degree
    dims = []
    for d in (1, 2):
        monos = [((i, 1),) for i in range(1, n + 1)] if d == 1 else [
            ((i, 2),) if i == j else ((i, 1), (j, 1)) for i in range(1, n + 1) for j in range(i, n + 1)
        ]
        col = {m: k for k, m in enumerate(monos)}
        rows, seen = [], set()
        for m in monos:
            if m in seen:
                continue
            orb = monomial_orbit(G, m)
            seen.update(orb)
            row = [0] * len(monos)
            for o in orb:
                row[col[o]] = 1
            rows.append(row)
        dims.append(Matrix(rows).rank())
    return dims[0], dims[1]


def square_identity_holds(G: PermGroup) -> bool:
    """Check f_1^2 = f_0 + 2 * sum of the distinct (x1 x_i)^G exactly."""
    S = regular_invariant_set(G)
    f1 = S.invariants[0].poly
    f0 = orbit_sum(G, ((1, 2),)).poly
    rhs = f0
    for f in S.invariants[1:]:
        if f.degree == 2:
            rhs = rhs + f.poly.scale(2)
    return f1 * f1 == rhs


def _det_mod(mat: list[list[int]], p: int) -> int:
    a = [row[:] for row in mat]
    n = len(a)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det = det * a[c][c] % p
        inv = pow(a[c][c], -1, p)
        for r in range(c + 1, n):
            f = a[r][c] * inv % p
            if f:
                rr, rc = a[r], a[c]
                for k in range(c, n):
                    rr[k] = (rr[k] - f * rc[k]) % p
    return det % p


def jacobian_independence(S: InvariantSet, n: int | None = None, trials: int = 4, seed: int = 0):
    """Randomized Jacobian test over a prime field of size > 2^31.

    A nonzero determinant at any point proves independence; the reported
    failure bound is the Schwartz-Zippel bound (sum(deg-1)/p)^trials.
    """
    k = len(S.invariants)
    if n is None:
        n = k
    if k == 0 or k != n:
        raise DomainError(f"need exactly n = {n} polynomials, got {k}")
    if n > INDEPENDENCE_MAX_N:
        return Unverified(f"n = {n} exceeds {INDEPENDENCE_MAX_N}")
    rng = random.Random(seed)
    total = sum(f.degree - 1 for f in S.invariants)
    p = nextprime(rng.randrange(2**31, 2**32 - 2**20))
    for _ in range(trials):
        point = [rng.randrange(p) for _ in range(n)]
        jac = [f.poly.gradient(point, n, p) for f in S.invariants]
        if _det_mod(jac, p):
            return VerifiedRandomized(Fraction(total, p) ** trials, p, trials)
    return Failed(trials)


def a_and_w_from_degrees(profile: Iterable[int], group_order: int) -> tuple[RootExpr, Fraction]:
    degs = list(profile)
    if not degs:
        raise DomainError("empty degree profile")
    if group_order < 1:
        raise DomainError("group order must be positive")
    n = len(degs)
    total = sum(degs)
    a = RootExpr(Fraction(2 * total - n, 2)) * RootExpr.inv_sqrt(group_order)
    return a, Fraction(total, n)


def regular_profile_check(G: PermGroup) -> dict:
    """Structural facts about the regular invariant set of G (used by tests and the CLI)."""
    S = regular_invariant_set(G)
    n = G.degree
    n2 = order2_count(G)
    return {
        "n": n,
        "n2": n2,
        "profile": S.degree_profile,
        "expected": expected_regular_profile(n, n2),
        "degree2_orbits": degree2_orbit_count(G),
    }

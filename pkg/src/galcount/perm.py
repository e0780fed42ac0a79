"""Permutations and permutation groups.

Points are 1-based at the public surface and 0-based internally. Products act
on the right: ``(p * q)(i) == q(p(i))``, i.e. apply ``p`` first.

Groups are built with a deterministic Schreier-Sims: the next base point is
always the smallest point moved by the generator that forced a new level, so
bases, element orders and traces are reproducible run to run.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from math import lcm
from typing import Iterable, Iterator, Sequence

from .errors import DomainError, InputError, ResourceError

DEFAULT_CAP = 100_000


def _compose(a: tuple, b: tuple) -> tuple:
    return tuple(map(b.__getitem__, a))


def _invert(a: tuple) -> tuple:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


class Permutation:
    """A bijection of {1..degree}, stored as a 0-based image tuple."""

    __slots__ = ("_a", "_hash")

    def __init__(self, images: Sequence[int]):
        imgs = tuple(int(x) - 1 for x in images)
        n = len(imgs)
        if n == 0:
            raise InputError("permutation of degree 0")
        if sorted(imgs) != list(range(n)):
            raise InputError(f"not a bijection of 1..{n}: {list(images)}")
        self._a = imgs
        self._hash = hash(imgs)

    @classmethod
    def _raw(cls, a: tuple) -> "Permutation":
        p = cls.__new__(cls)
        p._a = a
        p._hash = hash(a)
        return p

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls._raw(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, degree: int, cycles) -> "Permutation":
        """Build from cycle text ``"(1 2 3)(4 5)"`` or a list of point tuples."""
        if isinstance(cycles, str):
            cycles = parse_cycles(cycles)
        img = list(range(degree))
        seen: set[int] = set()
        for cyc in cycles:
            for x in cyc:
                if not 1 <= x <= degree:
                    raise InputError(f"point {x} outside 1..{degree}")
                if x in seen:
                    raise InputError(f"point {x} repeated in cycle notation")
                seen.add(x)
            for x, y in zip(cyc, cyc[1:] + cyc[:1]):
                img[x - 1] = y - 1
        return cls._raw(tuple(img))

    @property
    def degree(self) -> int:
        return len(self._a)

    @property
    def images(self) -> tuple[int, ...]:
        return tuple(x + 1 for x in self._a)

    def __call__(self, point: int) -> int:
        return self._a[point - 1] + 1

    def __mul__(self, other: "Permutation") -> "Permutation":
        if len(other._a) != len(self._a):
            raise DomainError("degree mismatch in product")
        return Permutation._raw(_compose(self._a, other._a))

    def inverse(self) -> "Permutation":
        return Permutation._raw(_invert(self._a))

    def __invert__(self):
        return self.inverse()

    def __pow__(self, k: int) -> "Permutation":
        base = self if k >= 0 else self.inverse()
        out = Permutation.identity(self.degree)
        for _ in range(abs(k)):
            out = out * base
        return out

    def conjugate(self, g: "Permutation") -> "Permutation":
        """g^-1 * self * g."""
        return g.inverse() * self * g

    def __eq__(self, other):
        return isinstance(other, Permutation) and self._a == other._a

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self._a < other._a

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self._a))

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        seen = [False] * len(self._a)
        out = []
        for i in range(len(self._a)):
            if seen[i]:
                continue
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = True
                cyc.append(j + 1)
                j = self._a[j]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles(include_fixed=True)), reverse=True))

    def cycle_count(self) -> int:
        return len(self.cycles(include_fixed=True))

    def fixed_points(self) -> list[int]:
        return [i + 1 for i, x in enumerate(self._a) if i == x]

    def fix_count(self) -> int:
        return sum(1 for i, x in enumerate(self._a) if i == x)

    def support(self) -> list[int]:
        return [i + 1 for i, x in enumerate(self._a) if i != x]

    @property
    def order(self) -> int:
        return lcm(*(len(c) for c in self.cycles(include_fixed=True)))

    def __repr__(self):
        cyc = self.cycles()
        body = "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"
        return f"Permutation<{self.degree}>{body}"


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str) -> list[tuple[int, ...]]:
    text = text.strip()
    if text in ("", "()"):
        return []
    stripped = _CYCLE_RE.sub("", text).strip()
    if stripped:
        raise InputError(f"unparsable cycle notation: {text!r}")
    out = []
    for body in _CYCLE_RE.findall(text):
        toks = body.replace(",", " ").split()
        try:
            out.append(tuple(int(t) for t in toks))
        except ValueError as exc:
            raise InputError(f"bad point in cycle {body!r}") from exc
    return [c for c in out if c]


# ---------------------------------------------------------------------------
# Schreier-Sims


def _orbit_transversal(point: int, gens: list[tuple]) -> dict[int, tuple]:
    ident = tuple(range(len(gens[0]))) if gens else None
    if ident is None:
        return {point: None}
    trans = {point: ident}
    queue = [point]
    for x in queue:
        ux = trans[x]
        for s in gens:
            y = s[x]
            if y not in trans:
                trans[y] = _compose(ux, s)
                queue.append(y)
    return trans


def _schreier_sims(n: int, gens: list[tuple], base_prefix: Sequence[int]):
    ident = tuple(range(n))
    gens = [g for g in dict.fromkeys(gens) if g != ident]
    base = list(base_prefix)
    for g in gens:
        if all(g[b] == b for b in base):
            base.append(next(i for i in range(n) if g[i] != i))
    k = len(base)
    strong = [[g for g in gens if all(g[b] == b for b in base[:i])] for i in range(k)]
    trans = [_orbit_transversal(base[i], strong[i]) if strong[i] else {base[i]: ident} for i in range(k)]
    tinv: list[dict] = [{} for _ in range(k)]

    def inv_of(level, x):
        d = tinv[level]
        if x not in d:
            d[x] = _invert(trans[level][x])
        return d[x]

    def strip(h, start):
        for level in range(start, len(base)):
            x = h[base[level]]
            if x not in trans[level]:
                return h, level
            h = _compose(h, inv_of(level, x))
        return h, len(base)

    i = k - 1
    while i >= 0:
        ok = True
        for x, ux in list(trans[i].items()):
            for s in strong[i]:
                h = _compose(_compose(ux, s), inv_of(i, s[x]))
                if h == ident:
                    continue
                res, j = strip(h, i + 1)
                if j < len(base) or res != ident:
                    if j == len(base):
                        base.append(next(p for p in range(n) if res[p] != p))
                        strong.append([])
                        trans.append({})
                        tinv.append({})
                    for level in range(i + 1, j + 1):
                        strong[level].append(res)
                        trans[level] = _orbit_transversal(base[level], strong[level])
                        tinv[level] = {}
                    i = j
                    ok = False
                    break
            if not ok:
                break
        if ok:
            i -= 1
    return base, strong, trans


class PermGroup:
    """A permutation group with a base and strong generating set."""

    def __init__(self, degree: int, generators: Iterable[Permutation], base_prefix: Sequence[int] = ()):
        gens = list(generators)
        if degree < 1:
            raise InputError("degree must be positive")
        for g in gens:
            if not isinstance(g, Permutation):
                raise InputError(f"generator {g!r} is not a Permutation")
            if g.degree != degree:
                raise InputError(f"generator of degree {g.degree} in a degree-{degree} group")
        for b in base_prefix:
            if not 1 <= b <= degree:
                raise InputError(f"base point {b} outside 1..{degree}")
        self.degree = degree
        self.generators = tuple(gens)
        base, strong, trans = _schreier_sims(degree, [g._a for g in gens], [b - 1 for b in base_prefix])
        self._base0 = base
        self._strong0 = strong
        self._trans = trans
        order = 1
        for t in trans:
            order *= len(t)
        self.order = order

    @property
    def base(self) -> tuple[int, ...]:
        return tuple(b + 1 for b in self._base0)

    @property
    def strong_generators(self) -> tuple[Permutation, ...]:
        seen = dict.fromkeys(g for level in self._strong0 for g in level)
        return tuple(Permutation._raw(g) for g in seen)

    def level_generators(self, level: int) -> list[Permutation]:
        """Strong generators of the pointwise stabilizer of base[:level]."""
        if level >= len(self._strong0):
            return []
        return [Permutation._raw(g) for g in self._strong0[level]]

    def fundamental_orbits(self) -> list[list[int]]:
        return [sorted(x + 1 for x in t) for t in self._trans]

    @property
    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={self.order})"

    def contains(self, g: Permutation) -> bool:
        if g.degree != self.degree:
            return False
        h = g._a
        for level, b in enumerate(self._base0):
            x = h[b]
            t = self._trans[level]
            if x not in t:
                return False
            h = _compose(h, _invert(t[x]))
        return all(i == x for i, x in enumerate(h))

    __contains__ = contains

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return self.degree == other.degree and all(other.contains(g) for g in self.generators)

    def same_group(self, other: "PermGroup") -> bool:
        return self.order == other.order and self.is_subgroup_of(other)

    def is_abelian(self) -> bool:
        gs = self.generators
        return all(a * b == b * a for a, b in itertools.combinations(gs, 2))

    # -- enumeration -------------------------------------------------------
    def elements(self, cap: int = DEFAULT_CAP) -> Iterator[Permutation]:
        """Yield every element exactly once (product of transversals)."""
        if self.order > cap:
            raise ResourceError(f"group order {self.order} exceeds the enumeration cap {cap}")
        n = self.degree
        if not self._trans:
            yield Permutation.identity(n)
            return
        levels = [list(t.values()) for t in reversed(self._trans)]
        ident = tuple(range(n))
        for combo in itertools.product(*levels):
            g = ident
            for u in combo:
                g = _compose(g, u) if u is not None else g
            yield Permutation._raw(g)

    def element_list(self, cap: int = DEFAULT_CAP) -> list[Permutation]:
        """Sorted element list (identity first); cached per cap-compatible call."""
        if self.order > cap:
            raise ResourceError(f"group order {self.order} exceeds the enumeration cap {cap}")
        return self._sorted_elements

    @cached_property
    def _sorted_elements(self) -> list[Permutation]:
        return sorted(self.elements(cap=max(DEFAULT_CAP, self.order)))

    def element_orders(self) -> Counter:
        return Counter(g.order for g in self.element_list())

    # -- orbits and stabilizers ------------------------------------------
    def orbit(self, point: int) -> list[int]:
        seen = {point}
        queue = [point]
        for x in queue:
            for g in self.generators:
                y = g(x)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return sorted(seen)

    def orbits(self) -> list[list[int]]:
        left = set(range(1, self.degree + 1))
        out = []
        while left:
            o = self.orbit(min(left))
            out.append(o)
            left -= set(o)
        return out

    def is_transitive(self) -> bool:
        return len(self.orbit(1)) == self.degree

    def pointwise_stabilizer(self, points: Sequence[int]) -> "PermGroup":
        chain = PermGroup(self.degree, self.generators, base_prefix=points)
        return PermGroup(self.degree, chain.level_generators(len(points)))

    def stabilizer(self, point: int) -> "PermGroup":
        return self.pointwise_stabilizer([point])

    def is_primitive(self) -> bool:
        """Transitive with no nontrivial block system (minimal-block test)."""
        if not self.is_transitive():
            return False
        n = self.degree
        if n <= 2:
            return True
        for x in range(2, n + 1):
            if len(_minimal_block(self, 1, x)) < n:
                return False
        return True

    def hash_key(self) -> tuple:
        """Isomorphism invariant used to bucket memo entries."""
        return (self.order, tuple(sorted(self.element_orders().items())))


def _minimal_block(G: PermGroup, a: int, b: int) -> list[int]:
    parent = list(range(G.degree + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    queue = [(a, b)]
    parent[find(b)] = find(a)
    while queue:
        x, y = queue.pop()
        for g in G.generators:
            u, v = find(g(x)), find(g(y))
            if u != v:
                parent[v] = u
                queue.append((g(x), g(y)))
    root = find(a)
    return [i for i in range(1, G.degree + 1) if find(i) == root]


# ---------------------------------------------------------------------------
# Public operations


def group_from_generators(degree: int, gens: Iterable[Permutation]) -> PermGroup:
    return PermGroup(degree, gens)


def trivial_group(degree: int = 1) -> PermGroup:
    return PermGroup(degree, [])


def elements(G: PermGroup, cap: int = DEFAULT_CAP) -> Iterator[Permutation]:
    return G.elements(cap)


@dataclass(frozen=True)
class ClassSummary:
    representative: Permutation
    class_size: int
    element_order: int
    fix_count: int


def conjugacy_classes(G: PermGroup, cap: int = DEFAULT_CAP) -> list[ClassSummary]:
    """Classes as conjugation orbits over the full element list."""
    return [
        ClassSummary(cls[0], len(cls), cls[0].order, cls[0].fix_count())
        for cls in conjugacy_class_sets(G, cap)
    ]


def conjugacy_class_sets(G: PermGroup, cap: int = DEFAULT_CAP) -> list[list[Permutation]]:
    elems = G.element_list(cap)
    gens = [(g, g.inverse()) for g in G.generators]
    seen: set[Permutation] = set()
    classes = []
    for x in elems:
        if x in seen:
            continue
        cls = [x]
        seen.add(x)
        for y in cls:
            for g, gi in gens:
                z = gi * y * g
                if z not in seen:
                    seen.add(z)
                    cls.append(z)
        cls.sort()
        classes.append(cls)
    classes.sort(key=lambda c: (c[0].order, len(c), c[0]._a))
    return classes


def regular_representation(G: PermGroup, cap: int = DEFAULT_CAP) -> PermGroup:
    """Right-multiplication action on the sorted element list.

    Point i stands for the i-th element (point 1 is the identity); a group
    element s acts by h -> h*s, which is a homomorphism for right actions.
    """
    elems = G.element_list(cap)
    index = {g: i for i, g in enumerate(elems)}
    gens = [Permutation._raw(tuple(index[h * s] for h in elems)) for s in G.generators]
    return PermGroup(len(elems), gens)


def is_regular(G: PermGroup) -> bool:
    return G.is_transitive() and G.order == G.degree


def _nontrivial_set_stabilizer_element(G: PermGroup, S: set[int]) -> Permutation | None:
    """Backtrack over the stabilizer chain for g != 1 with S^g = S."""
    S0 = {s - 1 for s in S}
    base = G._base0
    trans = [list(t.items()) for t in G._trans]
    k = len(base)
    n = G.degree
    ident = tuple(range(n))
    if k == 0:
        return None

    def search(level, partial):
        if level == k:
            if partial != ident and all(partial[s] in S0 for s in S0):
                return partial
            return None
        b = base[level]
        inside = b in S0
        for x, u in trans[level]:
            # u fixes base[:level], so earlier base images are unchanged
            g = _compose(u, partial)
            if (g[b] in S0) != inside:
                continue
            found = search(level + 1, g)
            if found is not None:
                return found
        return None

    # g = u_{k-1} ... u_1 u_0 (u_{k-1} applied first); choosing u_0 first fixes
    # the image of base[0], then u_1 fixes base[1], and so on.
    found = search(0, ident)
    return Permutation._raw(found) if found is not None else None


def set_stabilizer_is_trivial(G: PermGroup, S: Iterable[int]) -> bool:
    S = set(S)
    for s in S:
        if not 1 <= s <= G.degree:
            raise DomainError(f"point {s} outside 1..{G.degree}")
    return _nontrivial_set_stabilizer_element(G, S) is None


def malle_index(G: PermGroup, cap: int = DEFAULT_CAP) -> int:
    if G.is_trivial():
        raise DomainError("the index of the trivial group is undefined")
    return min(
        G.degree - c.representative.cycle_count()
        for c in conjugacy_classes(G, cap)
        if not c.representative.is_identity()
    )


# ---------------------------------------------------------------------------
# Text input


def parse_generator(line: str, degree: int) -> Permutation:
    line = line.strip()
    if line.startswith("("):
        return Permutation.from_cycles(degree, line)
    toks = line.replace(",", " ").split()
    try:
        imgs = [int(t) for t in toks]
    except ValueError as exc:
        raise InputError(f"bad generator line: {line!r}") from exc
    if len(imgs) != degree:
        raise InputError(f"generator has {len(imgs)} images, expected {degree}")
    return Permutation(imgs)


def parse_group_text(text: str) -> PermGroup:
    """Parse ``degree n`` followed by one generator per line."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise InputError("empty group description")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "degree":
        raise InputError(f"first line must be 'degree <n>', got {lines[0]!r}")
    try:
        degree = int(head[1])
    except ValueError as exc:
        raise InputError(f"bad degree {head[1]!r}") from exc
    if degree < 1:
        raise InputError("degree must be positive")
    gens = [parse_generator(ln, degree) for ln in lines[1:]]
    return PermGroup(degree, gens)


def group_to_text(G: PermGroup) -> str:
    out = [f"degree {G.degree}"]
    for g in G.generators:
        out.append(" ".join(map(str, g.images)))
    return "\n".join(out) + "\n"

"""Named permutation groups and the small-group table.

Descriptors:
  cyclic:n  dihedral:n  symmetric:n  alternating:n  affine:p
  smallgroup:<order>:<index>   (identifiers follow the usual small-group
                                numbering; see SMALL_GROUPS for coverage)
  a path to a file in the ``degree n`` text format
"""

from __future__ import annotations

import itertools
import os
from functools import lru_cache
from pathlib import Path
from typing import Callable, Sequence

from sympy import primitive_root

from .errors import InputError
from .perm import Permutation, PermGroup, parse_group_text


def data_dir() -> Path:
    """Bundled data directory, overridable with GALCOUNT_DATA."""
    env = os.environ.get("GALCOUNT_DATA")
    if env:
        return Path(env)
    return Path(__file__).resolve().parent / "data"


def _perm0(images0: Sequence[int]) -> Permutation:
    return Permutation._raw(tuple(images0))


def from_law(elements: Sequence, mul: Callable, gens: Sequence) -> PermGroup:
    """Right regular representation of a group given by its multiplication."""
    elems = list(elements)
    idx = {e: i for i, e in enumerate(elems)}
    perms = [_perm0([idx[mul(e, s)] for e in elems]) for s in gens]
    return PermGroup(len(elems), perms)


# -- basic families ---------------------------------------------------------


def cyclic(n: int) -> PermGroup:
    if n < 1:
        raise InputError("cyclic:n needs n >= 1")
    if n == 1:
        return PermGroup(1, [])
    return PermGroup(n, [_perm0([(i + 1) % n for i in range(n)])])


def dihedral(n: int) -> PermGroup:
    """Dihedral group of order 2n (natural action on n points for n >= 3)."""
    if n < 1:
        raise InputError("dihedral:n needs n >= 1")
    if n == 1:
        return cyclic(2)
    if n == 2:
        return PermGroup(4, [Permutation.from_cycles(4, "(1 2)(3 4)"), Permutation.from_cycles(4, "(1 3)(2 4)")])
    rot = _perm0([(i + 1) % n for i in range(n)])
    ref = _perm0([(-i) % n for i in range(n)])
    return PermGroup(n, [rot, ref])


def symmetric(n: int) -> PermGroup:
    if n < 1:
        raise InputError("symmetric:n needs n >= 1")
    if n == 1:
        return PermGroup(1, [])
    gens = [_perm0([(i + 1) % n for i in range(n)])]
    if n > 2:
        gens.append(Permutation.from_cycles(n, "(1 2)"))
    return PermGroup(n, gens)


def alternating(n: int) -> PermGroup:
    if n < 1:
        raise InputError("alternating:n needs n >= 1")
    if n < 3:
        return PermGroup(n, [])
    gens = [Permutation.from_cycles(n, [(1, 2, i)]) for i in range(3, n + 1)]
    return PermGroup(n, gens)


def frobenius(p: int, q: int) -> PermGroup:
    """C_p semidirect C_q acting on F_p by x -> x+1 and x -> r*x with ord(r) = q."""
    if (p - 1) % q:
        raise InputError(f"{q} does not divide {p}-1")
    g = primitive_root(p)
    r = pow(g, (p - 1) // q, p)
    shift = _perm0([(x + 1) % p for x in range(p)])
    gens = [shift]
    if q > 1:
        gens.append(_perm0([(r * x) % p for x in range(p)]))
    return PermGroup(p, gens)


def affine(p: int) -> PermGroup:
    """AGL(1, p) = F_p semidirect F_p^x on p points."""
    return frobenius(p, p - 1)


def direct_product(*groups: PermGroup) -> PermGroup:
    """Direct product acting on the disjoint union of the point sets."""
    total = sum(G.degree for G in groups)
    gens = []
    offset = 0
    for G in groups:
        for g in G.generators:
            img = list(range(total))
            for i, x in enumerate(g._a):
                img[offset + i] = offset + x
            gens.append(_perm0(img))
        offset += G.degree
    return PermGroup(total, gens)


def abelian(*factors: int) -> PermGroup:
    fs = [f for f in factors if f > 1]
    if not fs:
        return PermGroup(1, [])
    return direct_product(*(cyclic(f) for f in fs))


def metacyclic(m: int, n: int, r: int) -> PermGroup:
    """C_m semidirect C_n with the generator of C_n acting as x -> r*x."""
    if pow(r, n, m) != 1 % m:
        raise InputError(f"r={r} has order not dividing {n} mod {m}")
    elems = [(a, b) for b in range(n) for a in range(m)]

    def mul(x, y):
        return ((x[0] + pow(r, x[1], m) * y[0]) % m, (x[1] + y[1]) % n)

    return from_law(elems, mul, [(1 % m, 0), (0, 1 % n)])


def dicyclic(n: int) -> PermGroup:
    """Dicyclic group of order 4n: <a, x | a^2n, x^2 = a^n, x a x^-1 = a^-1>."""
    m = 2 * n
    elems = [(i, j) for j in range(2) for i in range(m)]

    def mul(x, y):
        i, j = x
        k, l = y
        sgn = -1 if j else 1
        return ((i + sgn * k + n * j * l) % m, (j + l) % 2)

    return from_law(elems, mul, [(1, 0), (0, 1)])


def generalized_dihedral(*moduli: int) -> PermGroup:
    """A semidirect C_2 with the involution inverting the abelian group A."""
    coords = list(itertools.product(*(range(k) for k in moduli)))
    elems = [(v, e) for e in range(2) for v in coords]

    def mul(x, y):
        (v, e), (w, f) = x, y
        sgn = -1 if e else 1
        return (tuple((a + sgn * b) % k for a, b, k in zip(v, w, moduli)), (e + f) % 2)

    gens = []
    for i in range(len(moduli)):
        v = tuple(1 if j == i else 0 for j in range(len(moduli)))
        gens.append((v, 0))
    gens.append((tuple(0 for _ in moduli), 1))
    return from_law(elems, mul, gens)


def heisenberg3() -> PermGroup:
    """Extraspecial group of order 27 and exponent 3."""
    elems = list(itertools.product(range(3), repeat=3))

    def mul(x, y):
        return ((x[0] + y[0]) % 3, (x[1] + y[1]) % 3, (x[2] + y[2] + x[0] * y[1]) % 3)

    return from_law(elems, mul, [(1, 0, 0), (0, 1, 0)])


def sl2_3() -> PermGroup:
    """SL(2, 3) acting on the eight nonzero row vectors of F_3^2."""
    vecs = [v for v in itertools.product(range(3), repeat=2) if v != (0, 0)]
    idx = {v: i for i, v in enumerate(vecs)}

    def act(mat):
        (a, b), (c, d) = mat
        return _perm0([idx[((x * a + y * c) % 3, (x * b + y * d) % 3)] for x, y in vecs])

    return PermGroup(8, [act(((1, 1), (0, 1))), act(((1, 0), (1, 1)))])


def pauli() -> PermGroup:
    """Central product C_4 o D_8, realized as <i, X, Z> with ZX = -XZ."""
    elems = [(k, a, b) for k in range(4) for a in range(2) for b in range(2)]

    def mul(x, y):
        k, a, b = x
        k2, a2, b2 = y
        return ((k + k2 + 2 * b * a2) % 4, (a + a2) % 2, (b + b2) % 2)

    return from_law(elems, mul, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])


def klein_by_c4() -> PermGroup:
    """C_2^2 semidirect C_4, the generator of C_4 swapping the two factors."""
    elems = [(v, k) for k in range(4) for v in itertools.product(range(2), repeat=2)]

    def act(k, v):
        return (v[1], v[0]) if k % 2 else v

    def mul(x, y):
        (v, k), (w, l) = x, y
        w2 = act(k, w)
        return (((v[0] + w2[0]) % 2, (v[1] + w2[1]) % 2), (k + l) % 4)

    return from_law(elems, mul, [((1, 0), 0), ((0, 0), 1)])


def c3_by_d8() -> PermGroup:
    """C_3 semidirect D_8 where the kernel of the action is a Klein four subgroup."""
    d8 = [(i, e) for e in range(2) for i in range(4)]

    def dmul(x, y):
        (i, e), (j, f) = x, y
        return ((i + (-1) ** e * j) % 4, (e + f) % 2)

    elems = [(a, d) for d in d8 for a in range(3)]

    def mul(x, y):
        (a, d), (b, d2) = x, y
        chi = -1 if d[0] % 2 else 1
        return ((a + chi * b) % 3, dmul(d, d2))

    return from_law(elems, mul, [(1, (0, 0)), (0, (1, 0)), (0, (0, 1))])


# -- small-group table ------------------------------------------------------

SMALL_GROUPS: dict[tuple[int, int], tuple[str, Callable[[], PermGroup]]] = {}


def _reg(order: int, index: int, name: str, builder: Callable[[], PermGroup]) -> None:
    SMALL_GROUPS[(order, index)] = (name, builder)


def _populate() -> None:
    C, D, A = cyclic, dihedral, abelian
    dp = direct_product
    _reg(1, 1, "1", lambda: PermGroup(1, []))
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61):
        _reg(p, 1, f"C{p}", lambda p=p: C(p))
    for p in (2, 3, 5, 7):
        _reg(p * p, 1, f"C{p * p}", lambda p=p: C(p * p))
        _reg(p * p, 2, f"C{p}xC{p}", lambda p=p: A(p, p))
    # 2p: dihedral first, cyclic second
    for p in (3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
        _reg(2 * p, 1, f"D{2 * p}", lambda p=p: D(p))
        _reg(2 * p, 2, f"C{2 * p}", lambda p=p: C(2 * p))
    # pq with q | p-1, q odd: nonabelian first
    for p, q in ((7, 3), (13, 3), (11, 5), (19, 3)):
        _reg(p * q, 1, f"C{p}:C{q}", lambda p=p, q=q: frobenius(p, q))
        _reg(p * q, 2, f"C{p * q}", lambda p=p, q=q: C(p * q))
    for n in (15, 33, 35, 51):
        _reg(n, 1, f"C{n}", lambda n=n: C(n))
    _reg(45, 1, "C45", lambda: C(45))
    _reg(45, 2, "C15xC3", lambda: A(15, 3))

    _reg(8, 1, "C8", lambda: C(8))
    _reg(8, 2, "C4xC2", lambda: A(4, 2))
    _reg(8, 3, "D8", lambda: D(4))
    _reg(8, 4, "Q8", lambda: dicyclic(2))
    _reg(8, 5, "C2^3", lambda: A(2, 2, 2))

    _reg(12, 1, "C3:C4", lambda: dicyclic(3))
    _reg(12, 2, "C12", lambda: C(12))
    _reg(12, 3, "A4", lambda: alternating(4))
    _reg(12, 4, "D12", lambda: D(6))
    _reg(12, 5, "C6xC2", lambda: A(6, 2))

    _reg(16, 1, "C16", lambda: C(16))
    _reg(16, 2, "C4xC4", lambda: A(4, 4))
    _reg(16, 3, "C2^2:C4", klein_by_c4)
    _reg(16, 4, "C4:C4", lambda: metacyclic(4, 4, 3))
    _reg(16, 5, "C8xC2", lambda: A(8, 2))
    _reg(16, 6, "M16", lambda: metacyclic(8, 2, 5))
    _reg(16, 7, "D16", lambda: D(8))
    _reg(16, 8, "QD16", lambda: metacyclic(8, 2, 3))
    _reg(16, 9, "Q16", lambda: dicyclic(4))
    _reg(16, 10, "C4xC2^2", lambda: A(4, 2, 2))
    _reg(16, 11, "C2xD8", lambda: dp(C(2), D(4)))
    _reg(16, 12, "C2xQ8", lambda: dp(C(2), dicyclic(2)))
    _reg(16, 13, "C4oD8", pauli)
    _reg(16, 14, "C2^4", lambda: A(2, 2, 2, 2))

    _reg(18, 1, "D18", lambda: D(9))
    _reg(18, 2, "C18", lambda: C(18))
    _reg(18, 3, "C3xS3", lambda: dp(C(3), symmetric(3)))
    _reg(18, 4, "C3^2:C2", lambda: generalized_dihedral(3, 3))
    _reg(18, 5, "C6xC3", lambda: A(6, 3))

    _reg(20, 1, "C5:C4", lambda: dicyclic(5))
    _reg(20, 2, "C20", lambda: C(20))
    _reg(20, 3, "F20", lambda: affine(5))
    _reg(20, 4, "D20", lambda: D(10))
    _reg(20, 5, "C10xC2", lambda: A(10, 2))

    _reg(24, 1, "C3:C8", lambda: metacyclic(3, 8, 2))
    _reg(24, 2, "C24", lambda: C(24))
    _reg(24, 3, "SL(2,3)", sl2_3)
    _reg(24, 4, "C3:Q8", lambda: dicyclic(6))
    _reg(24, 5, "C4xS3", lambda: dp(C(4), symmetric(3)))
    _reg(24, 6, "D24", lambda: D(12))
    _reg(24, 7, "C2x(C3:C4)", lambda: dp(C(2), dicyclic(3)))
    _reg(24, 8, "C3:D8", c3_by_d8)
    _reg(24, 9, "C12xC2", lambda: A(12, 2))
    _reg(24, 10, "C3xD8", lambda: dp(C(3), D(4)))
    _reg(24, 11, "C3xQ8", lambda: dp(C(3), dicyclic(2)))
    _reg(24, 12, "S4", lambda: symmetric(4))
    _reg(24, 13, "C2xA4", lambda: dp(C(2), alternating(4)))
    _reg(24, 14, "C2^2xS3", lambda: dp(A(2, 2), symmetric(3)))
    _reg(24, 15, "C6xC2^2", lambda: A(6, 2, 2))

    _reg(27, 1, "C27", lambda: C(27))
    _reg(27, 2, "C9xC3", lambda: A(9, 3))
    _reg(27, 3, "He3", heisenberg3)
    _reg(27, 4, "C9:C3", lambda: metacyclic(9, 3, 4))
    _reg(27, 5, "C3^3", lambda: A(3, 3, 3))

    for p, name in ((7, "28"), (11, "44")):
        o = 4 * p
        _reg(o, 1, f"C{p}:C4", lambda p=p: dicyclic(p))
        _reg(o, 2, f"C{o}", lambda o=o: C(o))
        _reg(o, 3, f"D{o}", lambda p=p: D(2 * p))
        _reg(o, 4, f"C{2 * p}xC2", lambda p=p: A(2 * p, 2))
    _reg(52, 1, "C13:C4", lambda: dicyclic(13))
    _reg(52, 2, "C52", lambda: C(52))
    _reg(52, 3, "C13:C4 (faithful)", lambda: frobenius(13, 4))
    _reg(52, 4, "D52", lambda: D(26))
    _reg(52, 5, "C26xC2", lambda: A(26, 2))

    _reg(30, 1, "C5xS3", lambda: dp(C(5), symmetric(3)))
    _reg(30, 2, "C3xD10", lambda: dp(C(3), D(5)))
    _reg(30, 3, "D30", lambda: D(15))
    _reg(30, 4, "C30", lambda: C(30))

    _reg(50, 1, "D50", lambda: D(25))
    _reg(50, 2, "C50", lambda: C(50))
    _reg(50, 3, "C5xD10", lambda: dp(C(5), D(5)))
    _reg(50, 4, "C5^2:C2", lambda: generalized_dihedral(5, 5))
    _reg(50, 5, "C10xC5", lambda: A(10, 5))

    _reg(32, 1, "C32", lambda: C(32))
    _reg(32, 51, "C2^5", lambda: A(2, 2, 2, 2, 2))
    _reg(42, 1, "F42", lambda: affine(7))
    _reg(42, 6, "C42", lambda: C(42))
    _reg(60, 5, "A5", lambda: alternating(5))


_populate()


def small_group(order: int, index: int) -> PermGroup:
    key = (order, index)
    if key not in SMALL_GROUPS:
        raise InputError(f"smallgroup:{order}:{index} is not in the bundled library")
    return _cached_small(order, index)


@lru_cache(maxsize=None)
def _cached_small(order: int, index: int) -> PermGroup:
    return SMALL_GROUPS[(order, index)][1]()


def small_group_name(order: int, index: int) -> str:
    return SMALL_GROUPS[(order, index)][0]


def bundled_groups(min_order: int = 1, max_order: int = 10**9):
    """Yield (descriptor, group) for every small-group entry in the order range."""
    for order, index in sorted(SMALL_GROUPS):
        if min_order <= order <= max_order:
            yield f"smallgroup:{order}:{index}", small_group(order, index)


_FAMILIES = {
    "cyclic": cyclic,
    "dihedral": dihedral,
    "symmetric": symmetric,
    "alternating": alternating,
    "affine": affine,
}


def resolve(descriptor: str) -> PermGroup:
    """Turn a descriptor or a file path into a PermGroup."""
    desc = descriptor.strip()
    parts = desc.split(":")
    head = parts[0].lower()
    if head in _FAMILIES and len(parts) == 2:
        try:
            n = int(parts[1])
        except ValueError as exc:
            raise InputError(f"bad parameter in {descriptor!r}") from exc
        return _FAMILIES[head](n)
    if head == "smallgroup" and len(parts) == 3:
        try:
            return small_group(int(parts[1]), int(parts[2]))
        except ValueError as exc:
            raise InputError(f"bad parameters in {descriptor!r}") from exc
    path = Path(desc)
    if not path.exists() and not path.is_absolute():
        alt = data_dir() / desc
        if alt.exists():
            path = alt
    if path.exists():
        return parse_group_text(path.read_text())
    raise InputError(f"unknown group descriptor {descriptor!r}")

"""Exact counts of abelian number fields over Q and related divisor-sum checks.

Quadratic fields come from a segmented squarefree sieve over fundamental
discriminants.  Abelian fields in general come from finite groups of primitive
Dirichlet characters: a field with character group S has conductor lcm(cond(chi))
and |disc| = prod(cond(chi)).  The two routes share no code, so their agreement
on quadratic fields is a real cross-check.
"""

from __future__ import annotations

import bisect
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterator

import mpmath
import numpy as np

from .analytic import DEFAULT_CUTOFF_C, degree_cutoff, error_exponent, explicit_constant, log_holt_group_count
from .errors import DomainError, ResourceError

SIEVE_LIMIT = 10**9
SEGMENT = 1 << 20


# -- fundamental discriminants ---------------------------------------------------------


def _primes_up_to(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if is_p[p]:
            is_p[p * p :: p] = False
    return np.nonzero(is_p)[0]


def _squarefree_mask(lo: int, hi: int, primes: np.ndarray) -> np.ndarray:
    """mask[i] is True iff lo + i is squarefree, for lo >= 1."""
    mask = np.ones(hi - lo + 1, dtype=bool)
    for p in primes:
        q = int(p) * int(p)
        if q > hi:
            break
        start = -(-lo // q) * q
        mask[start - lo :: q] = False
    return mask


def _check_limit(X: int) -> None:
    if X > SIEVE_LIMIT:
        raise ResourceError(f"sieve bound {X} exceeds {SIEVE_LIMIT}")


def _segment_discriminants(lo: int, hi: int, primes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Positive and negative fundamental discriminants d with lo <= |d| <= hi."""
    v = np.arange(lo, hi + 1, dtype=np.int64)
    sf = _squarefree_mask(lo, hi, primes)
    odd_pos = v[sf & (v % 4 == 1) & (v > 1)]
    odd_neg = v[sf & (v % 4 == 3)]
    mlo, mhi = -(-lo // 4), hi // 4
    if mlo < 1:
        mlo = 1
    if mhi >= mlo:
        m = np.arange(mlo, mhi + 1, dtype=np.int64)
        sfm = _squarefree_mask(mlo, mhi, primes)
        even_pos = 4 * m[sfm & ((m % 4 == 2) | (m % 4 == 3))]
        even_neg = 4 * m[sfm & ((m % 4 == 1) | (m % 4 == 2))]
    else:
        even_pos = even_neg = np.zeros(0, dtype=np.int64)
    return np.concatenate([odd_pos, even_pos]), np.concatenate([odd_neg, even_neg])


def _segments(X: int) -> Iterator[tuple[int, int]]:
    for lo in range(1, X + 1, SEGMENT):
        yield lo, min(X, lo + SEGMENT - 1)


def count_fundamental_discriminants(X: int) -> int:
    if X < 1:
        raise DomainError("X must be at least 1")
    _check_limit(X)
    primes = _primes_up_to(math.isqrt(X))
    total = 0
    for lo, hi in _segments(X):
        pos, neg = _segment_discriminants(lo, hi, primes)
        total += len(pos) + len(neg)
    return total


def iter_fundamental_discriminants(X: int) -> Iterator[int]:
    """Fundamental discriminants with |d| <= X, ordered by |d| and then sign (negative first)."""
    if X < 1:
        raise DomainError("X must be at least 1")
    _check_limit(X)
    primes = _primes_up_to(math.isqrt(X))
    for lo, hi in _segments(X):
        pos, neg = _segment_discriminants(lo, hi, primes)
        both = sorted([(int(a), 1) for a in pos] + [(int(a), 0) for a in neg])
        for a, sign in both:
            yield a if sign else -a


def fundamental_discriminants_up_to(X: int) -> tuple[int, Iterator[int]]:
    """Exact count and a lazy stream of all fundamental discriminants with |d| <= X."""
    return count_fundamental_discriminants(X), iter_fundamental_discriminants(X)


def is_fundamental_discriminant(d: int) -> bool:
    if d in (0, 1):
        return False

    def squarefree(m: int) -> bool:
        m = abs(m)
        return all(m % (p * p) for p in range(2, math.isqrt(m) + 1))

    if d % 4 == 1:
        return squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and squarefree(m)
    return False


# -- reports -------------------------------------------------------------------------


@dataclass
class CountReport:
    X: int
    counts_by_group: dict[str, int]
    quadratic_count: int
    main_term: object
    residual: object
    normalized_residual: object
    nonabelian_upper_log: object = None  # log of an upper bound; None when not computed
    nonabelian_note: str = ""
    notes: list[str] = field(default_factory=list)

    @property
    def abelian_total(self) -> int:
        return sum(self.counts_by_group.values())

    def to_record(self) -> dict:
        s = lambda x: None if x is None else mpmath.nstr(x, 20)
        rec = {
            "X": self.X,
            "counts_by_group": dict(sorted(self.counts_by_group.items())),
            "abelian_total_exact": self.abelian_total,
            "quadratic_count": self.quadratic_count,
            "main_term": s(self.main_term),
            "residual": s(self.residual),
            "residual_over_sqrtX": s(self.normalized_residual),
        }
        if self.nonabelian_upper_log is not None or self.nonabelian_note:
            rec["nonabelian_bound"] = {"lower": 0, "log_upper": s(self.nonabelian_upper_log), "note": self.nonabelian_note}
        if self.notes:
            rec["notes"] = list(self.notes)
        return rec

    def __str__(self):
        rec = self.to_record()
        lines = [f"X = {self.X}"]
        for k, v in rec["counts_by_group"].items():
            lines.append(f"  {k}: {v}")
        lines.append(f"abelian total (exact): {rec['abelian_total_exact']}")
        lines.append(f"quadratic count: {self.quadratic_count}")
        lines.append(f"main term 6/pi^2 X: {rec['main_term']}")
        lines.append(f"residual: {rec['residual']}  (residual/sqrt X = {rec['residual_over_sqrtX']})")
        if "nonabelian_bound" in rec:
            nb = rec["nonabelian_bound"]
            lines.append(f"nonabelian fields (bound, not exact): between 0 and exp({nb['log_upper']})  [{nb['note']}]")
        lines += [f"note: {n}" for n in self.notes]
        return "\n".join(lines)


def _main_term(X: int, dps: int = 30):
    with mpmath.workdps(dps):
        return 6 / mpmath.pi**2 * X


def quadratic_density_report(X: int) -> CountReport:
    """Quadratic count against 6/pi^2 X."""
    count = count_fundamental_discriminants(X)
    main = _main_term(X)
    resid = count - main
    return CountReport(X, {"C2": count}, count, main, resid, resid / mpmath.sqrt(X))


# -- Dirichlet characters ---------------------------------------------------------------
#
# A finite-order character of the idele class group of Q is a product of local
# characters of Z_p^x.  Each coordinate is a value k/m in Q/Z (0 < k < m, reduced):
#   odd p:  i = 0 tame part, m | p - 1;  i = 1 wild part, m a power of p
#   p = 2:  i = 0 value on -1, m | 2;    i = 1 value on 5, m a power of 2
# A character is the sorted tuple of its nonzero coordinates (p, i, k, m).

Character = tuple[tuple[int, int, int, int], ...]

TRIVIAL: Character = ()


def _reduce(k: int, m: int) -> tuple[int, int]:
    k %= m
    g = math.gcd(k, m)
    return k // g, m // g


def char_add(a: Character, b: Character) -> Character:
    d = {(p, i): (k, m) for p, i, k, m in a}
    for p, i, k, m in b:
        old = d.get((p, i))
        if old is None:
            d[(p, i)] = (k, m)
            continue
        k0, m0 = old
        l = m0 * m // math.gcd(m0, m)
        kk, mm = _reduce(k0 * (l // m0) + k * (l // m), l)
        if kk:
            d[(p, i)] = (kk, mm)
        else:
            del d[(p, i)]
    return tuple(sorted((p, i, k, m) for (p, i), (k, m) in d.items()))


def char_order(chi: Character) -> int:
    return reduce(math.lcm, (m for *_, m in chi), 1)


_COND_CACHE: dict[Character, int] = {}


def char_conductor(chi: Character) -> int:
    f = _COND_CACHE.get(chi)
    if f is not None:
        return f
    wild = {p: m for p, i, _, m in chi if i == 1}
    f = 1
    for p in {p for p, *_ in chi}:
        if p == 2:
            f *= 2 ** (2 + _vp(wild[2], 2)) if 2 in wild else 4
        elif p in wild:
            f *= p ** (1 + _vp(wild[p], p))
        else:
            f *= p
    if len(_COND_CACHE) < 1 << 20:
        _COND_CACHE[chi] = f
    return f


def char_is_odd(chi: Character) -> bool:
    """chi(-1) = -1.  -1 lies in the torsion part, so only tame and sign coordinates matter."""
    total = Fraction(0)
    for p, i, k, m in chi:
        if i == 0:
            total += Fraction(k, m) if p == 2 else Fraction(k * (p - 1), 2 * m)
    return total % 1 != 0


def _vp(n: int, p: int) -> int:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def _coord(p: int, i: int, k: int, m: int) -> tuple:
    k, m = _reduce(k, m)
    return () if k == 0 else ((p, i, k, m),)


def _local_primitive(p: int, e: int) -> list[Character]:
    """Primitive local characters of conductor exactly p^e."""
    out: list[Character] = []
    if p == 2:
        if e == 2:
            return [_coord(2, 0, 1, 2)]
        if e < 3:
            return []
        den = 2 ** (e - 2)
        for k in range(1, den, 2):
            for s in (0, 1):
                out.append(_coord(2, 0, s, 2) + _coord(2, 1, k, den))
        return out
    if e == 1:
        return [_coord(p, 0, t, p - 1) for t in range(1, p - 1)]
    den = p ** (e - 1)
    for k in range(1, den):
        if k % p == 0:
            continue
        for t in range(p - 1):
            out.append(_coord(p, 0, t, p - 1) + _coord(p, 1, k, den))
    return out


def _local_quadratic(p: int, e: int) -> list[Character]:
    if p == 2:
        if e == 2:
            return [_coord(2, 0, 1, 2)]
        if e == 3:
            return [_coord(2, 1, 1, 2), _coord(2, 0, 1, 2) + _coord(2, 1, 1, 2)]
        return []
    return [_coord(p, 0, 1, 2)] if e == 1 else []


def _spf(n: int) -> np.ndarray:
    spf = np.zeros(n + 1, dtype=np.int64)
    for p in range(2, n + 1):
        if spf[p] == 0:
            spf[p::p][spf[p::p] == 0] = p
    return spf


def _factor(c: int, spf: np.ndarray) -> list[tuple[int, int]]:
    out = []
    while c > 1:
        p = int(spf[c])
        e = 0
        while c % p == 0:
            c //= p
            e += 1
        out.append((p, e))
    return out


def primitive_characters(bound: int, max_order: int | None = None, quadratic_bound: int | None = None) -> list[tuple[int, Character]]:
    """(conductor, chi) for primitive characters with conductor <= bound, plus quadratic ones up to quadratic_bound."""
    top = max(bound, quadratic_bound or 0)
    if top > 10**7:
        raise ResourceError("conductor range too large")
    spf = _spf(max(top, 2))
    out: list[tuple[int, Character]] = []
    for c in range(2, top + 1):
        fac = _factor(c, spf)
        if c <= bound:
            pieces = [_local_primitive(p, e) for p, e in fac]
        elif quadratic_bound and c <= quadratic_bound:
            pieces = [_local_quadratic(p, e) for p, e in fac]
        else:
            continue
        if any(not pc for pc in pieces):
            continue
        for combo in _product(pieces):
            chi = tuple(sorted(x for part in combo for x in part))
            order = char_order(chi)
            if max_order is not None and order > max_order:
                continue
            if c > bound and order != 2:
                continue
            out.append((c, chi))
    return out


def _product(pieces):
    if not pieces:
        yield ()
        return
    head, *rest = pieces
    for h in head:
        for t in _product(rest):
            yield (h,) + t


# -- abelian fields ------------------------------------------------------------------


@dataclass(frozen=True)
class AbelianFieldRecord:
    conductor: int
    subgroup_descriptor: tuple[Character, ...]  # generators of the character group
    galois_type: tuple[int, ...]
    discriminant: int  # absolute value
    signature: tuple[int, int]
    characters: frozenset = field(compare=False, repr=False)

    @property
    def degree(self) -> int:
        return len(self.characters)

    @property
    def signed_discriminant(self) -> int:
        return self.discriminant * (-1) ** self.signature[1]

    def type_name(self) -> str:
        return "x".join(f"C{n}" for n in self.galois_type)

    def csv_row(self) -> str:
        gens = " ".join(char_text(g) for g in self.subgroup_descriptor)
        return f"{self.conductor}, {gens}, {self.type_name()}, {self.discriminant}"


def char_text(chi: Character) -> str:
    if not chi:
        return "1"
    return "[" + ";".join(f"{p}{'w' if i else 't'}={k}/{m}" for p, i, k, m in chi) + "]"


def _closure(S: frozenset, chi: Character, cap: int) -> frozenset | None:
    out = set(S)
    step = chi
    while step not in S:
        new = [char_add(s, step) for s in S]
        out.update(new)
        if len(out) > cap:
            return None
        step = char_add(step, chi)
    return frozenset(out)


def _group_type(S: frozenset) -> tuple[int, ...]:
    """Invariant factors of a finite abelian group given as a set of characters."""
    counts = Counter(char_order(c) for c in S)
    n = len(S)
    factors: list[list[int]] = []
    p_list = [p for p in range(2, n + 1) if n % p == 0 and all(p % q for q in range(2, math.isqrt(p) + 1))]
    for p in p_list:
        logs = [0]
        k = 1
        while True:
            size = sum(c for o, c in counts.items() if p**k % o == 0)
            logs.append(_vp(size, p))
            if logs[-1] == logs[-2]:
                break
            k += 1
        at_least = [logs[i + 1] - logs[i] for i in range(len(logs) - 1)] + [0]
        parts = []
        for j in range(1, len(at_least)):
            parts += [p**j] * (at_least[j - 1] - at_least[j])
        factors.append(sorted(parts, reverse=True))
    width = max((len(f) for f in factors), default=0)
    inv = []
    for i in range(width):
        v = 1
        for f in factors:
            if i < len(f):
                v *= f[i]
        inv.append(v)
    return tuple(sorted(inv))


def _generators(S: frozenset) -> tuple[Character, ...]:
    gens: list[Character] = []
    span = frozenset([TRIVIAL])
    for chi in sorted(S, key=lambda c: (char_order(c), char_conductor(c), c), reverse=True):
        if chi not in span:
            gens.append(chi)
            span = _closure(span, chi, len(S))
    return tuple(sorted(gens))


def abelian_fields_up_to(X: int, degree_cap: int) -> list[AbelianFieldRecord]:
    """Every abelian field K in a fixed closure of Q with 2 <= [K:Q] <= degree_cap and |disc K| <= X."""
    if X < 1:
        raise DomainError("X must be at least 1")
    if degree_cap < 2:
        raise DomainError("degree_cap must be at least 2")
    # a character of order >= 3 comes with its distinct conjugate, so cond^2 <= disc
    chars = primitive_characters(math.isqrt(X), max_order=degree_cap, quadratic_bound=X)
    # the phi(k) generators of <chi> all share chi's conductor, so any group
    # containing chi has disc >= cond^phi(k)
    chars = [(c, chi, c ** _totient(char_order(chi))) for c, chi in chars]
    chars = [t for t in chars if t[2] <= X]
    chars.sort(key=lambda t: (t[0], t[1]))
    conds = [c for c, _, _ in chars]
    cond_of = {chi: c for c, chi, _ in chars}
    seen: set[frozenset] = set()
    records: list[AbelianFieldRecord] = []

    def disc_of(S: frozenset) -> int:
        return math.prod(cond_of.get(c) or char_conductor(c) for c in S)

    stack: list[tuple[frozenset, int, int]] = []
    for idx, (c, chi, _) in enumerate(chars):
        S = _closure(frozenset([TRIVIAL]), chi, degree_cap)
        if S is None or S in seen:
            continue
        D = disc_of(S)
        if D > X:
            continue
        seen.add(S)
        stack.append((S, D, idx))
        while stack:
            T, DT, last = stack.pop()
            records.append(_record(T, DT))
            if 2 * len(T) > degree_cap:
                continue
            room = X // DT
            # psi adds |T| new characters: psi itself and |T| - 1 others of conductor >= 3
            hi = bisect.bisect_right(conds, room // 3 ** (len(T) - 1))
            for j in range(last + 1, hi):
                cj, psi, weight = chars[j]
                if weight > room or psi in T:
                    continue
                U = _closure(T, psi, degree_cap)
                if U is None or U in seen:
                    continue
                DU = disc_of(U)
                if DU > X:
                    continue
                seen.add(U)
                stack.append((U, DU, j))
    records.sort(key=lambda r: (r.discriminant, r.conductor, r.galois_type, r.subgroup_descriptor))
    return records


def _totient(n: int) -> int:
    out = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            out -= out // p
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out -= out // m
    return out


def _record(S: frozenset, disc: int) -> AbelianFieldRecord:
    conductor = reduce(math.lcm, (char_conductor(c) for c in S), 1)
    n = len(S)
    imaginary = any(char_is_odd(c) for c in S)
    sig = (0, n // 2) if imaginary else (n, 0)
    return AbelianFieldRecord(conductor, _generators(S), _group_type(S), disc, sig, S)


def abelian_counts(records: list[AbelianFieldRecord]) -> dict[str, int]:
    out: dict[str, int] = {}
    for r in records:
        out[r.type_name()] = out.get(r.type_name(), 0) + 1
    return out


def nonabelian_log_upper(X: int, cutoff: int, dps: int = 30):
    """log of sum over 6 <= N <= cutoff of (groups of order N) * explicit constant * X^(6/sqrt N).

    A crude upper bound for the number of nonabelian Galois fields; nothing is enumerated.
    """
    if cutoff < 6:
        return None
    with mpmath.workdps(dps):
        lx = mpmath.log(X)
        logs = [
            log_holt_group_count(N, dps) + explicit_constant(N, 1).log(dps) + 6 * lx / mpmath.sqrt(N)
            for N in range(6, cutoff + 1)
        ]
        top = max(logs)
        return top + mpmath.log(mpmath.fsum(mpmath.exp(v - top) for v in logs))


def galois_count_Q(X: int, C: float = DEFAULT_CUTOFF_C) -> CountReport:
    """Exact abelian part of #F_Q^Gal(X) with a separately reported nonabelian upper bound."""
    if X < 1:
        raise DomainError("X must be at least 1")
    cutoff = degree_cutoff(X, 1, C)
    records = abelian_fields_up_to(X, max(2, cutoff)) if X >= 3 else []
    counts = abelian_counts(records)
    quad = counts.get("C2", 0)
    main = _main_term(X)
    total = sum(counts.values())
    resid = total - main
    return CountReport(
        X,
        counts,
        quad,
        main,
        resid,
        resid / mpmath.sqrt(X),
        nonabelian_log_upper(X, cutoff),
        f"explicit certificates summed over group orders 6..{cutoff}; no nonabelian field is enumerated",
        [f"degree cutoff {cutoff} from C = {C}"],
    )


def secondary_fit(samples: list[int]) -> dict:
    """Least-squares fit of (abelian count - 6/pi^2 X)/sqrt X to a quadratic in log X.

    Empirical only: the coefficients are fitted to this package's own exact counts.
    """
    if len(samples) < 3:
        raise DomainError("need at least three sample points")
    xs, ys = [], []
    for X in samples:
        rep = galois_count_Q(X)
        xs.append(math.log(X))
        ys.append(float(rep.normalized_residual))
    coeffs = np.polyfit(xs, ys, 2)
    return {"empirical": True, "coefficients": [float(c) for c in coeffs], "samples": list(samples), "values": ys}


# -- divisor sums --------------------------------------------------------------------


def tau_values(m: int, Q: int) -> np.ndarray:
    """tau_m(D) for 0 <= D <= Q (index 0 unused)."""
    if m < 1 or Q < 1:
        raise DomainError("m and Q must be positive")
    if Q > 10**7 or m * math.log(Q + 1) > 600:
        raise ResourceError("divisor sum too large")
    t = np.ones(Q + 1, dtype=object if m * math.log2(Q + 1) > 60 else np.int64)
    t[0] = 0
    for _ in range(m - 1):
        nxt = np.zeros_like(t)
        for d in range(1, Q + 1):
            nxt[d::d] += t[d]
        t = nxt
    return t


def tau_sum(m: int, Q: int) -> int:
    return int(sum(int(x) for x in tau_values(m, Q)[1:]))


def bordelles_bound(m: int, Q: int, dps: int = 40):
    with mpmath.workdps(dps):
        return mpmath.mpf(Q) / math.factorial(m - 1) * (mpmath.log(Q) + m - 1) ** (m - 1)


def bordelles_check(m: int, Q: int) -> bool:
    """sum_{D <= Q} tau_m(D) <= Q/(m-1)! (log Q + m - 1)^(m-1)."""
    return tau_sum(m, Q) <= bordelles_bound(m, Q)

"""Exact arithmetic in Q(sqrt 2, sqrt 3, sqrt 5, ...).

A RootExpr is stored as a map from square-free radicand m to the rational
coefficient of sqrt(m); m = 1 holds the rational part. Square roots of
distinct square-free integers are linearly independent over Q, so this form
is canonical and equality is structural. Signs are decided exactly by
splitting off one prime at a time (A + B*sqrt(q) has the sign of A**2 - q*B**2
whenever A and B disagree), so comparisons never consult floating point.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache, total_ordering
from math import gcd, isqrt
from numbers import Rational

import mpmath
from sympy import factorint

from .errors import DomainError


def frac_str(q: Fraction) -> str:
    """Render a rational as ``p/q`` (denominator always shown)."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_frac(text: str) -> Fraction:
    return Fraction(text.strip())


@lru_cache(maxsize=65536)
def square_part(n: int) -> tuple[int, int]:
    """Return (s, m) with n = s*s*m and m square-free."""
    if n <= 0:
        raise DomainError(f"square_part needs a positive integer, got {n}")
    r = isqrt(n)
    if r * r == n:
        return r, 1
    s, m = 1, 1
    for p, e in factorint(n).items():
        s *= p ** (e // 2)
        if e % 2:
            m *= p
    return s, m


@lru_cache(maxsize=65536)
def _primes_of(m: int) -> tuple[int, ...]:
    return tuple(sorted(factorint(m))) if m > 1 else ()


def _clean(terms: dict) -> dict:
    return {m: c for m, c in terms.items() if c}


def _mul_terms(a: dict, b: dict) -> dict:
    out: dict[int, Fraction] = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            g = gcd(m1, m2)
            m = (m1 // g) * (m2 // g)
            out[m] = out.get(m, 0) + c1 * c2 * g
    return _clean(out)


def _add_terms(a: dict, b: dict, scale=1) -> dict:
    out = dict(a)
    for m, c in b.items():
        out[m] = out.get(m, 0) + scale * c
    return _clean(out)


def _split(terms: dict, q: int) -> tuple[dict, dict]:
    a = {m: c for m, c in terms.items() if m % q}
    b = {m // q: c for m, c in terms.items() if m % q == 0}
    return a, b


def _sign(terms: dict) -> int:
    if not terms:
        return 0
    if len(terms) == 1:
        (c,) = terms.values()
        return 1 if c > 0 else -1
    q = max(p for m in terms for p in _primes_of(m))
    a, b = _split(terms, q)
    sa, sb = _sign(a), _sign(b)
    if sa == 0:
        return sb
    if sb == 0 or sa == sb:
        return sa
    disc = _add_terms(_mul_terms(a, a), _mul_terms(b, b), scale=-q)
    return sa * _sign(disc)


def _inverse(terms: dict) -> dict:
    if not terms:
        raise ZeroDivisionError("RootExpr division by zero")
    if set(terms) == {1}:
        return {1: 1 / Fraction(terms[1])}
    q = max(p for m in terms for p in _primes_of(m))
    a, b = _split(terms, q)
    conj = _add_terms(a, {m * q: c for m, c in b.items()}, scale=-1)
    norm = _add_terms(_mul_terms(a, a), _mul_terms(b, b), scale=-q)
    return _mul_terms(conj, _inverse(norm))


@total_ordering
class RootExpr:
    """rational_part + sum(coeff / sqrt(radicand)) with exact comparison."""

    __slots__ = ("_t",)

    def __init__(self, rational=0, roots=()):
        t: dict[int, Fraction] = {}
        if rational:
            t[1] = Fraction(rational)
        for coeff, radicand in roots:
            t = _add_terms(t, RootExpr.inv_sqrt(radicand)._scaled(Fraction(coeff)))
        self._t = _clean(t)

    @classmethod
    def _from_terms(cls, terms: dict) -> "RootExpr":
        obj = cls.__new__(cls)
        obj._t = _clean(terms)
        return obj

    @classmethod
    def sqrt(cls, x) -> "RootExpr":
        """Exact square root of a nonnegative rational."""
        x = Fraction(x)
        if x < 0:
            raise DomainError("square root of a negative rational")
        if x == 0:
            return cls()
        s, m = square_part(x.numerator * x.denominator)
        return cls._from_terms({m: Fraction(s, x.denominator)})

    @classmethod
    def inv_sqrt(cls, x) -> "RootExpr":
        x = Fraction(x)
        if x <= 0:
            raise DomainError("inverse square root needs a positive rational")
        return cls.sqrt(1 / x)

    @classmethod
    def coerce(cls, x) -> "RootExpr":
        if isinstance(x, RootExpr):
            return x
        if isinstance(x, (int, Rational, Fraction)):
            return cls(Fraction(x))
        raise TypeError(f"cannot coerce {type(x).__name__} to RootExpr")

    def _scaled(self, c: Fraction) -> dict:
        return {m: c * v for m, v in self._t.items()}

    # -- structure -------------------------------------------------------
    @property
    def rational_part(self) -> Fraction:
        return Fraction(self._t.get(1, 0))

    @property
    def root_terms(self) -> list[tuple[Fraction, int]]:
        """Terms (coeff, m) meaning coeff/sqrt(m), sorted by radicand."""
        return [(c * m, m) for m, c in sorted(self._t.items()) if m != 1]

    def is_rational(self) -> bool:
        return all(m == 1 for m in self._t)

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise DomainError(f"{self} is irrational")
        return self.rational_part

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        try:
            other = RootExpr.coerce(other)
        except TypeError:
            return NotImplemented
        return RootExpr._from_terms(_add_terms(self._t, other._t))

    __radd__ = __add__

    def __neg__(self):
        return RootExpr._from_terms(self._scaled(Fraction(-1)))

    def __sub__(self, other):
        try:
            other = RootExpr.coerce(other)
        except TypeError:
            return NotImplemented
        return RootExpr._from_terms(_add_terms(self._t, other._t, scale=-1))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = RootExpr.coerce(other)
        except TypeError:
            return NotImplemented
        return RootExpr._from_terms(_mul_terms(self._t, other._t))

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            other = RootExpr.coerce(other)
        except TypeError:
            return NotImplemented
        return RootExpr._from_terms(_mul_terms(self._t, _inverse(other._t)))

    def __rtruediv__(self, other):
        return RootExpr.coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else RootExpr(1) / self
        out = RootExpr(1)
        for _ in range(abs(k)):
            out = out * base
        return out

    # -- order -----------------------------------------------------------
    def sign(self) -> int:
        return _sign(self._t)

    def __eq__(self, other):
        try:
            other = RootExpr.coerce(other)
        except TypeError:
            return NotImplemented
        return self._t == other._t

    def __hash__(self):
        if self.is_rational():
            return hash(self.rational_part)
        return hash(frozenset(self._t.items()))

    def __lt__(self, other):
        try:
            other = RootExpr.coerce(other)
        except TypeError:
            return NotImplemented
        return (self - other).sign() < 0

    def __bool__(self):
        return bool(self._t)

    # -- numerics --------------------------------------------------------
    def to_mpf(self, dps: int = 50):
        with mpmath.workdps(dps):
            total = mpmath.mpf(0)
            for m, c in self._t.items():
                total += mpmath.mpf(c.numerator) / c.denominator * mpmath.sqrt(m)
            return +total

    def interval(self, prec: int = 128):
        """Outward-rounded enclosure as an ``mpmath.iv`` interval."""
        iv = mpmath.iv
        old = iv.prec
        iv.prec = prec
        try:
            total = iv.mpf(0)
            for m, c in self._t.items():
                total += iv.mpf(c.numerator) / c.denominator * iv.sqrt(m)
            return total
        finally:
            iv.prec = old

    def __float__(self):
        return float(self.to_mpf(30))

    # -- text --------------------------------------------------------------
    def __str__(self):
        parts = [frac_str(self.rational_part)] if 1 in self._t or not self._t else []
        for c, m in self.root_terms:
            parts.append(f"({frac_str(c)})/sqrt({m})")
        return " + ".join(parts)

    def __repr__(self):
        return f"RootExpr({self})"

    def to_record(self) -> dict:
        return {
            "rational": frac_str(self.rational_part),
            "roots": [[frac_str(c), m] for c, m in self.root_terms],
        }

    @classmethod
    def from_record(cls, rec: dict) -> "RootExpr":
        return cls(parse_frac(rec["rational"]), [(parse_frac(c), int(m)) for c, m in rec["roots"]])


ZERO = RootExpr()
ONE = RootExpr(1)

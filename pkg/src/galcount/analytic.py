"""Explicit constants and analytic side bounds used by the certificates and the tail estimate."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import sympy

from .errors import DomainError
from .rootexpr import RootExpr, frac_str

C1 = Fraction(37, 2)
DEFAULT_CUTOFF_C = 30
EXPLICIT_THRESHOLD = 5184


def root_to_sympy(x: RootExpr) -> sympy.Expr:
    expr = sympy.Rational(x.rational_part.numerator, x.rational_part.denominator)
    for c, m in x.root_terms:
        expr += sympy.Rational(c.numerator, c.denominator) / sympy.sqrt(m)
    return expr


def _sym(x) -> sympy.Expr:
    if isinstance(x, RootExpr):
        return root_to_sympy(x)
    if isinstance(x, Fraction):
        return sympy.Rational(x.numerator, x.denominator)
    return sympy.sympify(x)


@dataclass(frozen=True)
class ExplicitConstant:
    """exp(e_power) * prod(base ** exponent), every piece an exact sympy expression."""

    e_power: sympy.Expr
    factors: tuple[tuple[sympy.Expr, sympy.Expr], ...] = ()
    labels: tuple[str, ...] = field(default=(), compare=False)

    @classmethod
    def build(cls, e_power, factors=(), labels=()) -> "ExplicitConstant":
        return cls(_sym(e_power), tuple((_sym(b), _sym(e)) for b, e in factors), tuple(labels))

    def log(self, dps: int = 40):
        """Natural logarithm as an mpmath number."""
        with mpmath.workdps(dps + 10):
            total = mpmath.mpf(sympy.N(self.e_power, dps + 10))
            for base, exp in self.factors:
                total += mpmath.mpf(sympy.N(exp, dps + 10)) * mpmath.log(mpmath.mpf(sympy.N(base, dps + 10)))
        with mpmath.workdps(dps):
            return +total

    def expression(self) -> sympy.Expr:
        out = sympy.exp(self.e_power, evaluate=False)
        for base, exp in self.factors:
            out *= sympy.Pow(base, exp, evaluate=False)
        return out

    def __mul__(self, other: "ExplicitConstant") -> "ExplicitConstant":
        return ExplicitConstant(self.e_power + other.e_power, self.factors + other.factors, self.labels + other.labels)

    def __str__(self):
        parts = [f"e^({sympy.sstr(self.e_power)})"]
        parts += [f"({sympy.sstr(b)})^({sympy.sstr(e)})" for b, e in self.factors]
        return " * ".join(parts)

    def to_record(self) -> dict:
        return {
            "e_power": sympy.sstr(self.e_power),
            "factors": [[sympy.sstr(b), sympy.sstr(e)] for b, e in self.factors],
            "log": mpmath.nstr(self.log(30), 25),
        }


def explicit_constant(group_order: int, d: int, c1: Fraction = C1) -> ExplicitConstant:
    """e^(d|G|) * (2 d |G|^2)^(c1 d sqrt|G|)."""
    if group_order < 1 or d < 1:
        raise DomainError("group order and degree must be positive")
    exponent = RootExpr(Fraction(c1) * d) * RootExpr.sqrt(group_order)
    return ExplicitConstant.build(d * group_order, [(2 * d * group_order**2, exponent)])


def almost_simple_constant(n: int, w: Fraction, gamma: int, group_order: int, d: int) -> ExplicitConstant:
    """(2 pi)^(dn/2) (gamma d + 1)!^n |G|^(dn) (2 d n^3)^(d n w)."""
    w = Fraction(w)
    return ExplicitConstant.build(
        0,
        [
            (2 * sympy.pi, Fraction(d * n, 2)),
            (sympy.factorial(gamma * d + 1), n),
            (group_order, d * n),
            (2 * d * n**3, d * n * w),
        ],
    )


def class_number_bound(disc: int, dps: int = 30):
    """2 pi |Disc|^(3/4)."""
    if disc < 1:
        raise DomainError("discriminant must be at least 1")
    with mpmath.workdps(dps):
        return 2 * mpmath.pi * mpmath.mpf(disc) ** mpmath.mpf(0.75)


def class_number_factor(disc: int) -> sympy.Expr:
    return 2 * sympy.pi * sympy.Integer(disc) ** sympy.Rational(3, 4)


def holt_exponent(N: int, dps: int = 30):
    """(log N)^2 / (6 (log 2)^2) + log N / log 2."""
    if N < 1:
        raise DomainError("N must be positive")
    with mpmath.workdps(dps):
        t = mpmath.log(N) / mpmath.log(2)
        return t * t / 6 + t


def holt_group_count(N: int, dps: int = 30):
    """Upper bound N^(holt_exponent(N)) on the number of groups of order N."""
    with mpmath.workdps(dps):
        return mpmath.power(N, holt_exponent(N, dps))


def log_holt_group_count(N: int, dps: int = 30):
    with mpmath.workdps(dps):
        return holt_exponent(N, dps) * mpmath.log(N)


def degree_cutoff(X=None, d: int = 1, C: float = DEFAULT_CUTOFF_C, log_x=None) -> int:
    """Largest n with d n <= (1/3) log X + C.  Pass ``log_x`` for huge X."""
    if d < 1:
        raise DomainError("d must be positive")
    if C < 0:
        raise DomainError("C must be nonnegative")
    with mpmath.workdps(50):
        if log_x is None:
            if X is None or X < 1:
                raise DomainError("X must be at least 1")
            log_x = mpmath.log(mpmath.mpf(X))
        bound = (mpmath.mpf(log_x) / 3 + mpmath.mpf(C)) / d
        return int(mpmath.floor(bound + mpmath.mpf(10) ** -30))


@dataclass(frozen=True)
class TailTerm:
    order: int
    log_group_count: object
    log_constant: object
    log_core_free: object
    log_x_power: object

    @property
    def log_total(self):
        return self.log_group_count + self.log_constant + self.log_core_free + self.log_x_power


@dataclass
class TailReport:
    log_x: object
    d: int
    C: float
    cutoff: int
    terms: list[TailTerm]
    log_tail: object  # None when the range is empty

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def resum_check(self, dps: int = 40) -> bool:
        if not self.terms:
            return self.log_tail is None
        with mpmath.workdps(dps):
            again = mpmath.log(mpmath.fsum(mpmath.exp(t.log_total) for t in self.terms))
            return abs(again - self.log_tail) <= mpmath.mpf(10) ** (-(dps // 2)) * max(1, abs(again))

    def to_record(self) -> dict:
        def s(x):
            return mpmath.nstr(x, 20)

        largest = max(self.terms, key=lambda t: t.log_total) if self.terms else None
        return {
            "log_X": s(self.log_x),
            "d": self.d,
            "C": self.C,
            "cutoff": self.cutoff,
            "range": [EXPLICIT_THRESHOLD, self.cutoff] if self.terms else [],
            "terms": len(self.terms),
            "log_tail": None if self.log_tail is None else s(self.log_tail),
            "largest_term": None
            if largest is None
            else {
                "order": largest.order,
                "log_group_count": s(largest.log_group_count),
                "log_constant": s(largest.log_constant),
                "log_core_free": s(largest.log_core_free),
                "log_X_power": s(largest.log_x_power),
            },
        }


def tail_bound(X=None, d: int = 1, C: float = DEFAULT_CUTOFF_C, log_x=None, dps: int = 30) -> TailReport:
    """Sum over 5184 <= |G| <= cutoff of (groups) * (constant) * (core-free) * X^(6/sqrt|G|), in log form."""
    with mpmath.workdps(dps):
        if log_x is None:
            if X is None:
                raise DomainError("X is required")
            log_x = mpmath.log(mpmath.mpf(X))
        log_x = mpmath.mpf(log_x)
        if log_x < mpmath.e:
            raise DomainError("tail bound needs X >= e^e")
        cutoff = degree_cutoff(d=d, C=C, log_x=log_x)
        terms = []
        log2 = mpmath.log(2)
        for N in range(EXPLICIT_THRESHOLD, cutoff + 1):
            lg = mpmath.log(N)
            terms.append(
                TailTerm(
                    N,
                    log_holt_group_count(N, dps),
                    explicit_constant(N, d).log(dps),
                    lg * lg / log2,
                    6 * log_x / mpmath.sqrt(N),
                )
            )
        log_tail = mpmath.log(mpmath.fsum(mpmath.exp(t.log_total) for t in terms)) if terms else None
        return TailReport(log_x, d, C, cutoff, terms, log_tail)


def error_exponent(d: int) -> Fraction:
    """1/2 for [k:Q] <= 3, otherwise 2/(d + 1)."""
    if d < 1:
        raise DomainError("d must be positive")
    return Fraction(1, 2) if d <= 3 else Fraction(2, d + 1)


def rational_str(x) -> str:
    return frac_str(Fraction(x))

"""The eleven acceptance checks, shared by ``galcount verify`` and the test suite.

Every check returns a :class:`CheckResult`; none of them raises on a failed
comparison, so a run always reports all eleven lines.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Callable

from . import base, engine, families, fields, invariants, structure
from .base import brute_force_tuple_count, load_class_file, set_invariant_tuple_count, stab_prob_bounds
from .library import abelian, bundled_groups, cyclic, data_dir, dicyclic, dihedral, symmetric
from .perm import Permutation, PermGroup, regular_representation
from .rootexpr import RootExpr


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float
    limit: float | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        lim = f" (limit {self.limit:g}s)" if self.limit is not None else ""
        return f"[{status}] {self.number:2d} {self.name}: {self.detail} [{self.seconds:.2f}s{lim}]"


# Printed a(G) values used as fixtures for the closed-form evaluators.
SPOT_ROWS: dict[str, str] = {
    "family:Alt:5": "1.130",
    "family:Alt6exotic": "1.119",
    "family:PSL:2:13": "1.453",
    "family:PSp:2:5": "1.256",
    "family:PSp:3:2": "0.850",
    "family:PSU:3:8": "2.076",
    "family:PSU:5:2": "1.272",
    "family:PSU:6:2": "0.214",
    "family:POmega+:4:2": "0.374",
    "family:POmega+:4:2:gamma=3": "0.647",
    "family:POmega-:4:2": "0.409",
    "family:POmega:3:3": "0.197",
    "family:F4:2": "0.025",
    "family:F4:2:gamma=2": "0.036",
    "family:E6:2": "8.277e-6",
    "family:E6:2:gamma=2": "1.171e-5",
    "family:E7:2": "6.358e-11",
    "family:E8:2": "2.313e-19",
    "family:2E6:2": "2.080e-4",
    "family:3D4:2": "0.817",
    "family:Sz:32": "1.708",
    "family:2F4:8": "0.023",
    "family:R:27": "1.864",
    "family:Tits": "1.872",
    "family:G2:3": "1.679",
    "family:G2:3:gamma=2": "2.374",
    "family:M11": "0.402",
    "family:M12": "0.137",
    "family:M12.2": "0.193",
    "family:M22": "0.199",
    "family:M22.2": "0.141",
    "family:M23": "0.046",
    "family:M24": "9.98e-3",
    "family:J1": "2.948",
    "family:J2": "1.865",
    "family:J2.2": "1.319",
    "family:J3": "3.914",
    "family:J3.2": "2.768",
    "family:HS": "0.308",
    "family:HS.2": "0.218",
    "family:McL": "0.189",
    "family:McL.2": "0.134",
    "family:Co3": "0.011",
    "family:Co2": "9.73e-3",
    "family:He": "0.471",
    "family:He.2": "0.333",
    "family:Suz": "0.039",
    "family:Suz.2": "0.028",
    "family:Fi22": "8.96e-3",
    "family:Fi22.2": "8.50e-3",
    "family:Ru": "0.155",
    "family:Fi23": "3.22e-4",
    "family:J4": "0.177",
    "family:Ly": "0.369",
    "family:Co1": "9.89e-4",
    "family:HN": "0.656",
    "family:HN.2": "0.464",
    "family:ON": "1.718",
    "family:ON.2": "2.430",
    "family:Th": "2.139",
    "family:Fi24'": "5.62e-6",
    "family:Fi24": "3.98e-6",
    "family:B": "3.06e-6",
    "family:M": "1.03e-6",
}


def printed_ulp(text: str) -> Decimal:
    """One unit in the last printed digit of a decimal or e-notation string."""
    return Decimal(1).scaleb(Decimal(text).as_tuple().exponent)


def matches_printed(a: RootExpr, text: str) -> bool:
    """printed - ulp < a <= printed: the tabulated value is a rounded-up bound for a."""
    printed = Fraction(Decimal(text))
    ulp = Fraction(printed_ulp(text))
    return printed - ulp < a <= printed


def _timed(number: int, name: str, limit: float | None, fn: Callable[[], tuple[bool, str]]) -> CheckResult:
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failure, reported on its own line
        ok, detail = False, f"raised {type(exc).__name__}: {exc}"
    dt = time.perf_counter() - t0
    if limit is not None and dt > limit:
        ok, detail = False, f"{detail}; exceeded runtime limit"
    return CheckResult(number, name, ok, detail, dt, limit)


# -- 1 -----------------------------------------------------------------------------------


def check_quadratic_main_term() -> tuple[bool, str]:
    target = 6 / math.pi**2
    parts = []
    ok = True
    for X, tol in ((10**6, 0.005), (10**5, 0.01)):
        rep = fields.quadratic_density_report(X)
        gap = abs(rep.quadratic_count / X - target)
        ok &= gap < tol
        parts.append(f"X={X}: count={rep.quadratic_count}, |count/X - 6/pi^2|={gap:.2e} < {tol}")
    return ok, "; ".join(parts)


# -- 2 -----------------------------------------------------------------------------------

THOMPSON_TRIPLE = Fraction(419448082, 207981421875)
THOMPSON_QUADRUPLE = Fraction(2992265015279081, 5090286441648234375000)


def check_thompson() -> tuple[bool, str]:
    b = stab_prob_bounds(load_class_file(data_dir() / "th_classes.txt"))
    ok = b.triple_bound == THOMPSON_TRIPLE and b.quadruple_bound == THOMPSON_QUADRUPLE
    return ok, f"triple={b.triple_bound}, quadruple={b.quadruple_bound}"


# -- 3 -----------------------------------------------------------------------------------


def check_j3() -> tuple[bool, str]:
    opt = engine.certify(families.parse_family("J3"), engine.OPTIMAL)
    prof = base.strong_set_profile(families.J3_DEGREE, 3)
    want_prof = [1, 2, 3, 4] + [5] * 6140 + [9] * 12
    a = families.profile_a(prof, families.J3_ORDER)
    target_a = RootExpr(0, [(Fraction(6935, 18), 9690)])
    ident = 6156**2 * 4 * 9690 == 171**2 * 50232960
    ok = (
        opt.exponent == Fraction(863441, 2009318400)
        and opt.revalidate()
        and prof == want_prof
        and a == target_a
        and ident
    )
    return ok, f"optimal={opt.exponent}, a={a}, sharpness identity={'holds' if ident else 'fails'}"


# -- 4 -----------------------------------------------------------------------------------


def check_regular_invariants() -> tuple[bool, str]:
    checked = 0
    worst_bound = Fraction(0)
    failures = []
    for name, G in bundled_groups(2, 16):
        R = regular_representation(G)
        n = R.degree
        n2 = structure.order2_count(R)
        S = invariants.regular_invariant_set(R)
        prof = S.degree_profile
        want = [1] + [2] * ((n + n2 - 1) // 2) + [3] * (n - 1 - (n + n2 - 1) // 2)
        status = invariants.jacobian_independence(S, n)
        bound = getattr(status, "failure_bound", None)
        good = (
            prof == want
            and isinstance(status, invariants.VerifiedRandomized)
            and bound is not None
            and bound < Fraction(1, 2**40)
            and invariants.degree2_orbit_count(R) == (n + n2 + 1) // 2
            and invariants.square_identity_holds(R)
        )
        if not good:
            failures.append(name)
        else:
            worst_bound = max(worst_bound, bound)
        checked += 1
    ok = not failures and checked > 0
    detail = f"{checked} groups, worst failure bound 2^{math.log2(worst_bound):.1f}" if ok else f"failed: {failures}"
    return ok, detail


# -- 5 -----------------------------------------------------------------------------------


def tuple_count_by_enumeration(g: Permutation, k: int) -> int:
    """Count ordered k-tuples over {1..n} whose underlying set g maps onto itself, one tuple at a time."""
    n = g.degree
    img = [0] + [g(i) for i in range(1, n + 1)]
    count = 0
    for t in itertools.product(range(1, n + 1), repeat=k):
        s = set(t)
        if all(img[x] in s for x in s):
            count += 1
    return count


def check_set_counts() -> tuple[bool, str]:
    # the count only depends on the cycle type, so each type is enumerated once
    cache: dict[tuple, tuple[int, int]] = {}
    elements = 0
    groups = 0
    bad = []
    for name, G in bundled_groups(1, 10**9):
        if G.degree > 12 or G.is_trivial():
            continue
        groups += 1
        for g in base.iter_prime_order_elements(G):
            elements += 1
            key = (g.degree, g.cycle_type())
            if key not in cache:
                cache[key] = (tuple_count_by_enumeration(g, 3), tuple_count_by_enumeration(g, 4))
            brute3, brute4 = cache[key]
            if set_invariant_tuple_count(g, 3) != brute3 or set_invariant_tuple_count(g, 4) != brute4:
                bad.append((name, g.cycle_type()))
            if brute_force_tuple_count(g, 3) != brute3 or brute_force_tuple_count(g, 4) != brute4:
                bad.append((name, "set enumeration", g.cycle_type()))
    ok = not bad and elements > 0
    return ok, (f"{elements} prime-order elements in {groups} groups, {len(cache)} cycle types" if ok else f"mismatches: {bad[:5]}")


# -- 6 -----------------------------------------------------------------------------------


def _first_homomorphism(gamma: PermGroup, G: PermGroup, skip_trivial: bool = True) -> list[Permutation] | None:
    elems = sorted(G.element_list())
    for images in itertools.product(elems, repeat=len(gamma.generators)):
        if skip_trivial and all(x.is_identity() for x in images):
            continue
        if structure.is_homomorphism(gamma, G, list(images)):
            return list(images)
    return None


def central_extension_triples() -> list[tuple[str, PermGroup, str, PermGroup, structure.Subgroup, list[Permutation]]]:
    """Deterministic (Gamma, G, A, rho) data with |Gamma|, |G| <= 24 and A = Z(G) nontrivial."""
    gammas = [
        ("C2", cyclic(2)),
        ("C3", cyclic(3)),
        ("C4", cyclic(4)),
        ("C2xC2", abelian(2, 2)),
        ("S3", symmetric(3)),
        ("Q8", dicyclic(2)),
        ("D8", dihedral(4)),
    ]
    targets = []
    for name, G in bundled_groups(2, 24):
        Z = structure.center(G)
        if Z.order > 1 and not G.is_abelian():
            targets.append((name, G, Z))
    targets += [(n, G, structure.center(G)) for n, G in (("C2xC2", abelian(2, 2)), ("C6", cyclic(6)))]
    out = []
    for gname, gamma in gammas:
        for tname, G, Z in targets:
            rho = _first_homomorphism(gamma, G)
            if rho is None:
                continue
            out.append((gname, gamma, tname, G, Z, rho))
    return out


def check_central_fibers() -> tuple[bool, str]:
    triples = central_extension_triples()
    bad = []
    for gname, gamma, tname, G, Z, rho in triples:
        fiber, homs = structure.central_fiber_count(gamma, G, Z, rho)
        if fiber != homs:
            bad.append((gname, tname, fiber, homs))
    ok = len(triples) >= 20 and not bad
    return ok, (f"{len(triples)} triples, fiber = |Hom(Gamma, A)| in every case" if ok else f"{len(triples)} triples, mismatches {bad[:5]}")


# -- 7 -----------------------------------------------------------------------------------


def check_no_cfsg() -> tuple[bool, str]:
    count = 0
    bad = []
    for name, G in bundled_groups(3, 100):
        cert = engine.certify(G, engine.NO_CFSG, label=name)
        limit = RootExpr(1 - Fraction(1, 4 * G.order))
        if not (cert.exponent <= limit and cert.revalidate()):
            bad.append(name)
        count += 1
    ok = count > 0 and not bad
    return ok, (f"{count} groups, every exponent <= 1 - 1/(4|G|)" if ok else f"violations: {bad}")


# -- 8 -----------------------------------------------------------------------------------


def check_core_free() -> tuple[bool, str]:
    count = 0
    bad = []
    for name, G in bundled_groups(1, 60):
        exact, bound = structure.count_core_free_subgroups(G)
        if not (exact <= bound and structure.generation_bound_check(G)):
            bad.append(name)
        count += 1
    ok = count > 0 and not bad
    return ok, (f"{count} groups within exp((log|G|)^2/log 2) and generated by <= Omega(|G|) elements" if ok else f"violations: {bad}")


# -- 9 -----------------------------------------------------------------------------------


def check_bordelles() -> tuple[bool, str]:
    bad = [(m, Q) for m in range(1, 7) for Q in (10, 100, 1000, 10000) if not fields.bordelles_check(m, Q)]
    return not bad, ("24 pairs (m <= 6, Q in 10..10^4) satisfy the inequality" if not bad else f"violations: {bad}")


# -- 10 ----------------------------------------------------------------------------------


def check_cross_enumeration() -> tuple[bool, str]:
    X = 10**5
    records = fields.abelian_fields_up_to(X, 4)
    quad = sorted(r.discriminant for r in records if r.galois_type == (2,))
    fund = sorted(abs(d) for d in fields.iter_fundamental_discriminants(X))
    # equal sorted |disc| lists means equal counts at every threshold <= X
    same = quad == fund
    smallest = {}
    for r in records:
        t = r.type_name()
        smallest[t] = min(smallest.get(t, r.discriminant), r.discriminant)
    firsts = (smallest.get("C3"), smallest.get("C4"), smallest.get("C2xC2"))
    ok = same and firsts == (49, 125, 144)
    return ok, f"{len(quad)} quadratic fields agree with {len(fund)} fundamental discriminants at every X <= 10^5; smallest C3/C4/C2xC2 discs {firsts}"


# -- 11 ----------------------------------------------------------------------------------


def check_engine_regression() -> tuple[bool, str]:
    from .library import small_group

    s4 = engine.certify(small_group(24, 12), engine.UNIFORM)
    f20 = engine.certify(small_group(20, 3), engine.UNIFORM)
    ok = s4.exponent == Fraction(1, 2) and s4.epsilon_slack and s4.revalidate()
    ok &= f20.exponent == Fraction(1, 4) and f20.epsilon_slack and f20.revalidate()
    rows_ok = 0
    bad = []
    for desc, printed in SPOT_ROWS.items():
        a = families.family_a(families.parse_family(desc))
        if matches_printed(a, printed):
            rows_ok += 1
        else:
            bad.append(f"{desc}: {float(a):.6g} vs {printed}")
    ok &= not bad and rows_ok >= 10
    detail = f"S4 -> {s4.summary()}, F20 -> {f20.summary()}, {rows_ok}/{len(SPOT_ROWS)} table rows match"
    if bad:
        detail += f"; mismatches {bad[:3]}"
    return ok, detail


CHECKS: list[tuple[int, str, float | None, Callable[[], tuple[bool, str]]]] = [
    (1, "quadratic main term", 10.0, check_quadratic_main_term),
    (2, "Thompson probabilities", 1.0, check_thompson),
    (3, "J3 arithmetic", 1.0, check_j3),
    (4, "regular invariant sets, orders 2-16", 120.0, check_regular_invariants),
    (5, "set-count identities", 60.0, check_set_counts),
    (6, "central-extension fibers", None, check_central_fibers),
    (7, "classification-free bound", None, check_no_cfsg),
    (8, "core-free and generation bounds", None, check_core_free),
    (9, "divisor-sum inequality", None, check_bordelles),
    (10, "abelian cross-enumeration", None, check_cross_enumeration),
    (11, "engine regression", None, check_engine_regression),
]


def run_check(number: int) -> CheckResult:
    for num, name, limit, fn in CHECKS:
        if num == number:
            return _timed(num, name, limit, fn)
    raise KeyError(number)


def run_all(selected: list[int] | None = None) -> list[CheckResult]:
    return [_timed(num, name, limit, fn) for num, name, limit, fn in CHECKS if selected is None or num in selected]

"""Certified exponents for counting Galois extensions with a given group.

``certify`` walks the minimal normal subgroups of a permutation group (or
evaluates an almost simple family descriptor), tries every applicable rule and
keeps the smallest exponent.  Each step is a :class:`TraceNode` whose exponent
can be recomputed from its children and parameters alone, which is what
:meth:`ExponentCertificate.revalidate` does.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

import sympy
from sympy import factorint, multiplicity

from . import families
from .analytic import ExplicitConstant, almost_simple_constant, class_number_factor, explicit_constant
from .base import base_to_exponent, greedy_base
from .errors import DomainError, InputError, ResourceError, RuleNotApplicable, VerificationError
from .families import FamilyDescriptor, profile_a, schmidt_a, wreath_exponent
from .perm import DEFAULT_CAP, PermGroup
from .rootexpr import ONE, ZERO, RootExpr
from .structure import (
    ElementaryAbelian,
    Subgroup,
    centralizer,
    hyperplanes,
    intersection_order,
    least_prime,
    minimal_normal_subgroups,
    normalizer,
    order2_count,
    quotient,
)

UNIFORM = "uniform"
OPTIMAL = "optimal"
EXPLICIT = "explicit"
NO_CFSG = "no-cfsg"
MODES = (UNIFORM, OPTIMAL, EXPLICIT, NO_CFSG)

EXPLICIT_COEFF = 6


# -- trace ------------------------------------------------------------------------------


def _param_record(v):
    if isinstance(v, RootExpr):
        return v.to_record()
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}" if v.denominator != 1 else str(v.numerator)
    if isinstance(v, (list, tuple)):
        return [_param_record(x) for x in v]
    return v


@dataclass
class TraceNode:
    rule: str
    reference: str
    exponent: RootExpr
    epsilon: bool
    params: dict = field(default_factory=dict)
    children: list["TraceNode"] = field(default_factory=list)
    group: str = ""
    chosen: int | None = None  # for "min" nodes: index of the winning child

    @property
    def depth(self) -> int:
        return 1 + max((c.depth for c in self.children), default=0)

    def walk(self) -> Iterable["TraceNode"]:
        yield self
        for c in self.children:
            yield from c.walk()

    def to_record(self) -> dict:
        rec = {
            "rule": self.rule,
            "reference": self.reference,
            "group": self.group,
            "exponent": self.exponent.to_record(),
            "epsilon": self.epsilon,
            "params": {k: _param_record(v) for k, v in self.params.items()},
        }
        if self.chosen is not None:
            rec["chosen"] = self.chosen
        if self.children:
            rec["children"] = [c.to_record() for c in self.children]
        return rec

    def render(self, indent: int = 0) -> list[str]:
        eps = " (+eps)" if self.epsilon else ""
        lines = [f"{'  ' * indent}{self.rule} [{self.group}]: {self.exponent}{eps}  ({self.reference})"]
        for i, c in enumerate(self.children):
            sub = c.render(indent + 1)
            if self.chosen is not None and i == self.chosen:
                sub[0] = sub[0].replace(c.rule, "* " + c.rule, 1)
            lines += sub
        return lines


def _q(x) -> RootExpr:
    return RootExpr.coerce(x)


def _root(x) -> RootExpr:
    return RootExpr.from_record(x) if isinstance(x, dict) else RootExpr.coerce(x)


def _layer(p: int, n: int, child: RootExpr) -> RootExpr:
    lead = Fraction(p, p - 1)
    extra = (child + Fraction(1, 2) - lead) / n
    return lead / n + (extra if extra.sign() > 0 else ZERO)


def _family_leaf(node: TraceNode, _children) -> RootExpr:
    desc = families.parse_family(node.params["descriptor"])
    for der in families.derivations(desc):
        if der.rule == node.params["derivation"]:
            return der.a * RootExpr.inv_sqrt(desc.group_order)
    raise VerificationError(f"derivation {node.params['derivation']} no longer offered for {desc}")


# rule -> recomputation from (node, child exponents); params are read from the node
RULES: dict[str, Callable[[TraceNode, list[RootExpr]], RootExpr]] = {
    "trivial-quotient": lambda n, c: ZERO,
    "abelian-refined": lambda n, c: _q(Fraction(n.params["p"], (n.params["p"] - 1) * n.params["order"])),
    "abelian-crude": lambda n, c: _q(Fraction(2 * n.params["p"], (n.params["p"] - 1) * n.params["order"])),
    "disjoint-normals": lambda n, c: c[0] / n.params["normal_orders"][0] + c[1] / n.params["normal_orders"][1],
    "centralizer": lambda n, c: _q(Fraction(n.params["p0"], (n.params["p0"] - 1) * n.params["centralizer_order"]))
    + c[0] / n.params["normal_order"],
    "affine-leaf": lambda n, c: _q(Fraction(1, n.params["p"] - 1)),
    "cyclic-layer": lambda n, c: _layer(n.params["p"], n.params["normal_order"], c[0]),
    "hyperplane-central": lambda n, c: c[0] / n.params["normal_order"]
    + Fraction(n.params["p"] * n.params["p0"], (n.params["p0"] - 1) * n.params["normal_order"] * n.params["h_over_w"]),
    "almost-simple-constant": lambda n, c: _root(n.params["c"]) * RootExpr.inv_sqrt(n.params["order"]),
    "schmidt": lambda n, c: schmidt_a(n.params["n0"], n.params["order"], n.params.get("blocks", 1))
    * RootExpr.inv_sqrt(n.params["order"]),
    "base": lambda n, c: base_to_exponent(n.params["n"], n.params["b"], n.params["order"], n.params.get("gamma", 1))[0]
    * RootExpr.inv_sqrt(n.params["order"]),
    "invariant-profile": lambda n, c: profile_a(n.params["profile"], n.params["order"], n.params.get("gamma", 1))
    * RootExpr.inv_sqrt(n.params["order"]),
    "family-closed-form": _family_leaf,
    "index-passage": lambda n, c: _q(Fraction(n.params["degree_exponent"]) * Fraction(n.params["degree"], n.params["order"])),
    "wreath": lambda n, c: wreath_exponent(c[0] * RootExpr.sqrt(n.params["base_order"]), n.params["r"], n.params["base_order"], n.params["order"]),
    "explicit-theorem": lambda n, c: RootExpr(EXPLICIT_COEFF) * RootExpr.inv_sqrt(n.params["order"]),
    "regular-invariants": lambda n, c: _q(
        1
        - Fraction(n.params["n2"], 2 * n.params["order"])
        - Fraction(3, 2 * n.params["order"])
        + Fraction(n.params["p"], (n.params["p"] - 1) * n.params["order"])
    ),
    "unique-involution": lambda n, c: _q(Fraction(2, n.params["order"]) + Fraction(n.params["quotient_exponent"], 2)),
    "order-four": lambda n, c: _q(Fraction(1, 2)),
    "odd-order-layer": lambda n, c: _q(
        Fraction(n.params["l"], (n.params["l"] - 1) * n.params["normal_order"])
        + Fraction(n.params["quotient_exponent"], n.params["normal_order"])
    ),
    "min": lambda n, c: min(c),
}


def revalidate(node: TraceNode) -> bool:
    """Recompute every node bottom-up; False on any mismatch."""
    kids = [c.exponent for c in node.children]
    if not all(revalidate(c) for c in node.children):
        return False
    rule = RULES.get(node.rule)
    if rule is None:
        return False
    if rule(node, kids) != node.exponent:
        return False
    if node.rule == "min":
        if node.chosen is None or node.children[node.chosen].exponent != node.exponent:
            return False
        if node.epsilon != node.children[node.chosen].epsilon:
            return False
    if node.rule == "disjoint-normals" and not _shape_identity(node):
        return False
    return True


def _shape_identity(node: TraceNode) -> bool:
    """c/(|N1| sqrt|G/N1|) + c/(|N2| sqrt|G/N2|) == (c/sqrt|G|)(1/sqrt|N1| + 1/sqrt|N2|) for c = 1."""
    n1, n2 = node.params["normal_orders"]
    g = node.params["order"]
    lhs = RootExpr.inv_sqrt(g // n1) / n1 + RootExpr.inv_sqrt(g // n2) / n2
    rhs = RootExpr.inv_sqrt(g) * (RootExpr.inv_sqrt(n1) + RootExpr.inv_sqrt(n2))
    return lhs == rhs


def _min_node(cands: Sequence[TraceNode], group: str) -> TraceNode:
    if not cands:
        raise RuleNotApplicable(f"no rule applies to {group}")
    best = min(range(len(cands)), key=lambda i: (cands[i].exponent, cands[i].depth, i))
    win = cands[best]
    return TraceNode("min", "minimum over applicable derivations", win.exponent, win.epsilon, {}, list(cands), group, best)


# -- certificates -----------------------------------------------------------------------


@dataclass
class ExponentCertificate:
    group: str
    order: int
    mode: str
    d: int
    exponent: RootExpr
    epsilon_slack: bool
    trace: TraceNode
    constant: ExplicitConstant | None = None

    def revalidate(self) -> bool:
        return self.trace.exponent == self.exponent and revalidate(self.trace)

    def summary(self) -> str:
        eps = " (+eps)" if self.epsilon_slack else ""
        return f"{self.exponent}{eps}"

    def __str__(self):
        lines = [
            f"group: {self.group} (order {self.order})",
            f"mode: {self.mode}" + (f" (d={self.d})" if self.mode == EXPLICIT else ""),
            f"exponent: {self.summary()}  ~ {float(self.exponent):.6g}",
        ]
        if self.constant is not None:
            lines.append(f"constant: {self.constant}")
        lines.append("trace:")
        lines += ["  " + s for s in self.trace.render()]
        return "\n".join(lines)

    def to_record(self) -> dict:
        return {
            "group": self.group,
            "order": self.order,
            "mode": self.mode,
            "d": self.d,
            "exponent": self.exponent.to_record(),
            "epsilon": self.epsilon_slack,
            "constant": None if self.constant is None else self.constant.to_record(),
            "trace": self.trace.to_record(),
        }


# -- stand-alone rules -------------------------------------------------------------------


def _invariant_factors_of(A: PermGroup) -> tuple[int, ...]:
    """Invariant factors of a finite abelian group from its element-order counts."""
    counts = A.element_orders()
    primary: list[list[int]] = []
    for p in factorint(A.order):
        # log_p |A[p^k]| = sum_i min(k, e_i); successive differences count e_i >= k
        logs = [0]
        k = 1
        while True:
            size = sum(c for o, c in counts.items() if p**k % o == 0)
            logs.append(multiplicity(p, size))
            if logs[-1] == logs[-2]:
                break
            k += 1
        at_least = [logs[i + 1] - logs[i] for i in range(len(logs) - 1)] + [0]
        parts = []
        for k in range(1, len(at_least)):
            parts += [p**k] * (at_least[k - 1] - at_least[k])
        primary.append(sorted(parts, reverse=True))
    width = max((len(f) for f in primary), default=0)
    out = []
    for i in range(width):
        v = 1
        for f in primary:
            if i < len(f):
                v *= f[i]
        out.append(v)
    return tuple(sorted(out))


@dataclass(frozen=True)
class AbelianBound:
    invariant_factors: tuple[int, ...]
    p: int
    a: Fraction
    exponent: RootExpr  # crude 2/a, no epsilon
    refined_exponent: RootExpr  # 1/a (+eps)
    constant: ExplicitConstant


def abelian_count_bound(A: PermGroup | Sequence[int], d: int = 1, disc: int | None = None, real_places: int | None = None) -> AbelianBound:
    """Exponent 2/a with a = (p-1)|A|/p, plus the explicit constant in front of X^(2/a)."""
    if isinstance(A, PermGroup):
        if not A.is_abelian():
            raise RuleNotApplicable("group is not abelian")
        inv = _invariant_factors_of(A)
    else:
        inv = tuple(sorted(int(x) for x in A if int(x) != 1))
    order = 1
    for x in inv:
        order *= x
    if order == 1:
        raise DomainError("abelian bound needs a nontrivial group")
    if d < 1:
        raise DomainError("d must be positive")
    p = least_prime(order)
    a = Fraction((p - 1) * order, p)
    two_torsion = 2 ** sum(1 for x in inv if x % 2 == 0)
    rank = len(inv)
    r1 = d if real_places is None else real_places
    if d == 1:
        r1 = 1
    factors = [(order, 3 * d), (two_torsion, r1)]
    if disc is not None and d > 1:
        factors.append((class_number_factor(disc), rank))
        factors.append((disc, -Fraction(p, p - 1)))
    const = ExplicitConstant.build(d * (order - 1) - 1, factors)
    return AbelianBound(inv, p, a, _q(2 / a), _q(1 / a), const)


@dataclass(frozen=True)
class CentralBound:
    p0: int
    increment: RootExpr  # 2 p0 / ((p0 - 1)|G|), explicit form
    refined_increment: RootExpr  # p0 / ((p0 - 1)|G|) (+eps)
    constant: ExplicitConstant


def central_bound(G: PermGroup, A: Subgroup, d: int = 1, disc: int | None = None) -> CentralBound:
    """Increment for counting central extensions of a fixed G/A-field by A."""
    gens = G.generators
    if not all(a * g == g * a for a in A.generators for g in gens):
        raise RuleNotApplicable("subgroup is not central")
    if A.order == 1:
        raise DomainError("central subgroup must be nontrivial")
    n = G.order
    p0 = least_prime(n)
    inc = _q(Fraction(2 * p0, (p0 - 1) * n))
    refined = _q(Fraction(p0, (p0 - 1) * n))
    two_torsion = sum(1 for g in A.elements if g.order <= 2)
    rank = _rank(A)
    log_g = sympy.log(n)
    e_power = d * A.order - 1 + log_g**2 / sympy.log(2)
    factors = [(A.order, 2 * d), (two_torsion, d)]
    if disc is not None and d > 1:
        factors.append((class_number_factor(disc), rank))
    return CentralBound(p0, inc, refined, ExplicitConstant.build(e_power, factors))


def _rank(A: Subgroup) -> int:
    best = 0
    for p in factorint(A.order):
        k = sum(1 for g in A.elements if g.order in (1, p))
        r = 0
        while k > 1:
            k //= p
            r += 1
        best = max(best, r)
    return best


def combine_disjoint_normals(
    first: TraceNode, second: TraceNode, n1: int, n2: int, group_order: int, strict: bool = False, group: str = ""
) -> TraceNode:
    """exponent_1/|N1| + exponent_2/|N2| for minimal normals with trivial intersection.

    The product bound itself only needs N1 and N2 to meet trivially; the square-root
    condition 1/sqrt|N1| + 1/sqrt|N2| <= 1 is what keeps the c/sqrt|G| shape, and is
    enforced only when ``strict``.
    """
    shape = RootExpr.inv_sqrt(n1) + RootExpr.inv_sqrt(n2)
    shape_ok = shape <= ONE
    if strict and not shape_ok:
        raise RuleNotApplicable("1/sqrt|N1| + 1/sqrt|N2| exceeds 1")
    node = TraceNode(
        "disjoint-normals",
        "product over two minimal normals with trivial intersection",
        first.exponent / n1 + second.exponent / n2,
        first.epsilon or second.epsilon,
        {"normal_orders": [n1, n2], "order": group_order, "shape_factor": shape, "shape_condition": shape_ok},
        [first, second],
        group,
    )
    if not _shape_identity(node):
        raise VerificationError("square-root identity failed")
    return node


# -- engine --------------------------------------------------------------------------


def _label(G: PermGroup) -> str:
    return f"order {G.order}, degree {G.degree}"


class Engine:
    """Memoized recursion for one mode; reuse an instance to share the memo."""

    def __init__(self, mode: str = UNIFORM, d: int = 1, cap: int = DEFAULT_CAP, max_depth: int = 40, max_pairs: int = 6, disc: int | None = None):
        if mode not in MODES:
            raise DomainError(f"unknown mode {mode!r}")
        if d < 1:
            raise DomainError("d must be positive")
        self.mode = mode
        self.d = d
        self.cap = cap
        self.max_depth = max_depth
        self.max_pairs = max_pairs
        self.disc = disc
        self.memo: dict[tuple, list[tuple[PermGroup, TraceNode]]] = {}
        self._path: list[str] = []

    # memo --------------------------------------------------------------------------
    def _lookup(self, G: PermGroup) -> TraceNode | None:
        for H, node in self.memo.get(G.hash_key(), ()):
            if H.same_group(G) or (H.is_abelian() and G.is_abelian()):
                return node
        return None

    def _store(self, G: PermGroup, node: TraceNode) -> None:
        self.memo.setdefault(G.hash_key(), []).append((G, node))

    # structural recursion ---------------------------------------------------------
    def node_for(self, G: PermGroup, depth: int = 0) -> TraceNode:
        if depth > self.max_depth:
            raise ResourceError(f"recursion depth {self.max_depth} exceeded at {_label(G)}; path: {' > '.join(self._path)}")
        n = G.order
        if n == 1:
            return TraceNode("trivial-quotient", "trivial group contributes only the base field", ZERO, False, {}, [], "trivial")
        if n > self.cap:
            raise ResourceError(f"group order {n} exceeds cap {self.cap}; path: {' > '.join(self._path)}")
        hit = self._lookup(G)
        if hit is not None:
            return hit
        self._path.append(_label(G))
        try:
            node = self._fresh(G, depth)
        finally:
            self._path.pop()
        self._store(G, node)
        return node

    def _fresh(self, G: PermGroup, depth: int) -> TraceNode:
        label = _label(G)
        if G.is_abelian():
            return self._abelian_leaf(G.order, label)
        report = minimal_normal_subgroups(G, self.cap)
        mins = list(report)
        cands: list[TraceNode] = []
        if len(mins) >= 2:
            for (N1, _), (N2, _) in itertools.islice(itertools.combinations(mins, 2), self.max_pairs):
                if intersection_order(N1, N2) != 1:
                    continue
                c1 = self.node_for(quotient(G, N1, self.cap).group, depth + 1)
                c2 = self.node_for(quotient(G, N2, self.cap).group, depth + 1)
                cands.append(combine_disjoint_normals(c1, c2, N1.order, N2.order, G.order, group=label))
        if report.all_abelian():
            for N, cls in mins:
                cands += self.abelian_socle_case(G, N, cls, depth)
        elif len(mins) == 1:
            cands += self.nonabelian_socle_candidates(G, mins[0][0], mins[0][1])
        return _min_node(cands, label)

    def _abelian_leaf(self, order: int, label: str) -> TraceNode:
        p = least_prime(order)
        return TraceNode(
            "abelian-refined",
            "abelian count, refined form 1/a with a = (p-1)|A|/p",
            _q(Fraction(p, (p - 1) * order)),
            True,
            {"p": p, "order": order},
            [],
            label,
        )

    def abelian_socle_case(self, G: PermGroup, N: Subgroup, cls, depth: int = 0) -> list[TraceNode]:
        """Candidate derivations for an elementary abelian minimal normal N."""
        if not isinstance(cls, ElementaryAbelian):
            raise RuleNotApplicable("minimal normal subgroup is not elementary abelian")
        label = _label(G)
        p, r = cls.p, cls.r
        nN = N.order
        quot = quotient(G, N, self.cap).group
        child = self.node_for(quot, depth + 1)
        out = [
            TraceNode(
                "cyclic-layer",
                "cyclic degree-p layer over the G/N subfield",
                _layer(p, nN, child.exponent),
                True,
                {"p": p, "r": r, "normal_order": nN},
                [child],
                label,
            )
        ]
        if r == 1:
            C = centralizer(G, N, self.cap)
            p0 = least_prime(C.order)
            out.append(
                TraceNode(
                    "centralizer",
                    "central extension over the centralizer of N" if C.order < G.order else "N central",
                    _q(Fraction(p0, (p0 - 1) * C.order)) + child.exponent / nN,
                    True,
                    {"p0": p0, "centralizer_order": C.order, "normal_order": nN},
                    [child],
                    label,
                )
            )
            if C.order == nN and G.order == p * (p - 1):
                out.append(
                    TraceNode("affine-leaf", "F_p semidirect F_p^x", _q(Fraction(1, p - 1)), True, {"p": p}, [], label)
                )
        elif self._case3_applies(G.order, nN):
            node = self._hyperplane_node(G, N, p, child, label)
            if node is not None:
                out.append(node)
        return out

    @staticmethod
    def _case3_applies(g: int, n: int) -> bool:
        if n * n > g:
            return False
        if n == 4 and g < 32:
            return False
        if n == 8 and g < 72:
            return False
        return True

    def _hyperplane_node(self, G: PermGroup, N: Subgroup, p: int, child: TraceNode, label: str) -> TraceNode | None:
        best = None
        n_gens = N.generators
        for idx, W in enumerate(hyperplanes(N, p)):
            NW = normalizer(G, W, self.cap)
            H_elems = [
                g for g in NW.elements
                if all(W.contains(h.conjugate(g) * h.inverse()) for h in n_gens)
            ]
            H = Subgroup.from_elements(G, H_elems)
            h_over_w = H.order // W.order
            if h_over_w == 1:
                continue
            p0 = least_prime(h_over_w)
            key = (H.order, -idx)
            if best is None or key > best[0]:
                best = (key, idx, W.order, NW.order, H.order, h_over_w, p0)
        if best is None:
            return None
        _, idx, w_order, nw_order, h_order, h_over_w, p0 = best
        nN = N.order
        return TraceNode(
            "hyperplane-central",
            "central C_p layer over H = W.C(N/W) for a hyperplane W",
            child.exponent / nN + Fraction(p * p0, (p0 - 1) * nN * h_over_w),
            True,
            {
                "p": p,
                "p0": p0,
                "normal_order": nN,
                "hyperplane": idx,
                "w_order": w_order,
                "normalizer_order": nw_order,
                "h_order": h_order,
                "h_over_w": h_over_w,
            },
            [child],
            label,
        )

    def _fallback_constant(self) -> RootExpr:
        return families.OPTIMAL_C if self.mode == OPTIMAL else families.UNIFORM_C

    def _constant_leaf(self, order: int, label: str) -> TraceNode:
        c = self._fallback_constant()
        return TraceNode(
            "almost-simple-constant",
            f"uniform almost simple bound with c = {c}",
            c * RootExpr.inv_sqrt(order),
            False,
            {"c": c, "order": order},
            [],
            label,
        )

    def nonabelian_socle_candidates(self, G: PermGroup, N: Subgroup, cls) -> list[TraceNode]:
        label = _label(G)
        order = G.order
        out = [self._constant_leaf(order, label)]
        power = getattr(cls, "power", None) or 1
        if power == 1 and G.is_transitive():
            n = G.degree
            if G.is_primitive():
                out.append(
                    TraceNode(
                        "schmidt",
                        "primitive action, n(n+2)/4 invariant degree budget",
                        schmidt_a(n, order) * RootExpr.inv_sqrt(order),
                        False,
                        {"n0": n, "blocks": 1, "order": order},
                        [],
                        label,
                    )
                )
            b = len(greedy_base(G).points)
            a, w = base_to_exponent(n, b, order)
            out.append(
                TraceNode(
                    "base",
                    "invariants from a base of size b",
                    a * RootExpr.inv_sqrt(order),
                    False,
                    {"n": n, "b": b, "gamma": 1, "order": order, "w": w},
                    [],
                    label,
                )
            )
        return out

    # family descriptors ----------------------------------------------------------
    def family_node(self, desc: FamilyDescriptor) -> TraceNode:
        order = desc.group_order
        label = str(desc)
        cands = [self._constant_leaf(order, label)]
        for der in families.derivations(desc):
            cands.append(
                TraceNode(
                    "family-closed-form",
                    f"closed form '{der.rule}' for the {desc.family} family",
                    der.a * RootExpr.inv_sqrt(order),
                    False,
                    {"descriptor": str(desc), "derivation": der.rule, "degree": der.degree, "order": order, "a": der.a},
                    [],
                    label,
                )
            )
        if self.mode == OPTIMAL and desc.family == "J3":
            cands.append(
                TraceNode(
                    "index-passage",
                    "degree-6156 exponent passed through n/|G|",
                    _q(families.j3_optimal_exponent()),
                    True,
                    {
                        "degree_exponent": families.J3_DEGREE_EXPONENT,
                        "degree": families.J3_DEGREE,
                        "order": order,
                        "malle_index": families.J3_MALLE_INDEX,
                    },
                    [],
                    label,
                )
            )
        return _min_node(cands, label)

    def wreath_node(self, desc: "WreathDescriptor") -> TraceNode:
        base = self.family_node(desc.base)
        label = str(desc)
        g0 = desc.base.group_order
        node = TraceNode(
            "wreath",
            "socle T^r with r >= 2: almost simple factor plus r(r+2)/(4|G|)",
            wreath_exponent(base.exponent * RootExpr.sqrt(g0), desc.r, g0, desc.order),
            base.epsilon,
            {"r": desc.r, "base_order": g0, "order": desc.order},
            [base],
            label,
        )
        return _min_node([self._constant_leaf(desc.order, label), node], label)

    # explicit mode ---------------------------------------------------------------
    def explicit_candidates(self, order: int, label: str, abelian_factors: tuple[int, ...] | None) -> list[tuple[TraceNode, ExplicitConstant]]:
        out = [
            (
                TraceNode(
                    "explicit-theorem",
                    "explicit bound 6/sqrt|G| with constant e^(d|G|) (2d|G|^2)^(c1 d sqrt|G|)",
                    RootExpr(EXPLICIT_COEFF) * RootExpr.inv_sqrt(order),
                    False,
                    {"order": order, "d": self.d},
                    [],
                    label,
                ),
                explicit_constant(order, self.d),
            )
        ]
        if abelian_factors is not None and order > 1:
            ab = abelian_count_bound(abelian_factors, self.d, self.disc)
            out.append(
                (
                    TraceNode(
                        "abelian-crude",
                        "abelian count, explicit form 2/a",
                        ab.exponent,
                        False,
                        {"p": ab.p, "order": order, "invariant_factors": list(abelian_factors)},
                        [],
                        label,
                    ),
                    ab.constant,
                )
            )
        return out

    def explicit_family_candidates(self, desc: FamilyDescriptor) -> list[tuple[TraceNode, ExplicitConstant]]:
        order = desc.group_order
        out = self.explicit_candidates(order, str(desc), None)
        for der in families.derivations(desc):
            w = _mean_degree(der)
            if w is None:
                continue
            node = TraceNode(
                "family-closed-form",
                f"closed form '{der.rule}' for the {desc.family} family",
                der.a * RootExpr.inv_sqrt(order),
                False,
                {"descriptor": str(desc), "derivation": der.rule, "degree": der.degree, "order": order, "a": der.a, "w": w},
                [],
                str(desc),
            )
            out.append((node, almost_simple_constant(der.degree, w, desc.gamma, order, self.d)))
        return out


def _mean_degree(der: families.Derivation) -> Fraction | None:
    if "w" in der.params:
        return Fraction(der.params["w"])
    if der.rule == "schmidt":
        return Fraction(1, 6)
    if der.rule == "strong-profile":
        n = der.degree
        return Fraction(10 + 5 * (n - 16) + 108, n)
    if der.rule == "profile" and isinstance(der.params.get("profile"), list):
        prof = der.params["profile"]
        return Fraction(sum(prof), len(prof))
    return None


@dataclass(frozen=True)
class WreathDescriptor:
    """Group with socle T^r (r >= 2) built from an almost simple factor G0."""

    base: FamilyDescriptor
    r: int
    order: int

    def __str__(self):
        return f"wreath:{self.r}:{self.order}:{self.base}"


def parse_wreath(text: str) -> WreathDescriptor:
    parts = text.split(":", 3)
    if len(parts) != 4 or parts[0] != "wreath":
        raise InputError("expected wreath:<r>:<order>:<family descriptor>")
    try:
        r, order = int(parts[1]), int(parts[2])
    except ValueError:
        raise InputError("wreath r and order must be integers") from None
    base = families.parse_family(parts[3])
    if r < 2:
        raise DomainError("wreath needs r >= 2")
    if order % (base.simple_order**r):
        raise DomainError("order must be divisible by |T|^r")
    return WreathDescriptor(base, r, order)


# -- no-CFSG path --------------------------------------------------------------------


def no_cfsg_exponent(G: PermGroup, cap: int = DEFAULT_CAP) -> ExponentCertificate:
    """Minimum over the classification-free derivations; asserts <= 1 - 1/(4|G|)."""
    n = G.order
    if n <= 2:
        raise DomainError("the classification-free bound needs |G| >= 3")
    if n > cap:
        raise ResourceError(f"group order {n} exceeds cap {cap}")
    label = _label(G)
    p = least_prime(n)
    n2 = order2_count(G, cap)
    cands = [
        TraceNode(
            "regular-invariants",
            "invariants of the regular representation, degrees 1, 2 and 3",
            _q(1 - Fraction(n2, 2 * n) - Fraction(3, 2 * n) + Fraction(p, (p - 1) * n)),
            True,
            {"order": n, "n2": n2, "p": p},
            [],
            label,
        )
    ]
    if p == 2 and n2 == 1:
        q_exp = 1 if n > 2 else 0
        cands.append(
            TraceNode(
                "unique-involution",
                "central C_2 quotient with trivial bound on G/C_2",
                _q(Fraction(2, n) + Fraction(q_exp, 2)),
                True,
                {"order": n, "quotient_exponent": q_exp},
                [],
                label,
            )
        )
    if n == 4:
        cands.append(TraceNode("order-four", "known bound for groups of order 4", _q(Fraction(1, 2)), True, {}, [], label))
    if n % 2:
        for N, cls in minimal_normal_subgroups(G, cap):
            if not isinstance(cls, ElementaryAbelian):
                continue
            q_exp = 0 if N.order == n else 1
            ell = cls.p
            cands.append(
                TraceNode(
                    "odd-order-layer",
                    "odd order: elementary abelian minimal normal, trivial bound on G/N",
                    _q(Fraction(ell, (ell - 1) * N.order) + Fraction(q_exp, N.order)),
                    True,
                    {"l": ell, "r": cls.r, "normal_order": N.order, "quotient_exponent": q_exp},
                    [],
                    label,
                )
            )
    node = _min_node(cands, label)
    limit = _q(1 - Fraction(1, 4 * n))
    if node.exponent > limit:
        raise VerificationError(f"classification-free exponent {node.exponent} exceeds {limit}")
    return ExponentCertificate(label, n, NO_CFSG, 1, node.exponent, node.epsilon, node)


# -- entry point ---------------------------------------------------------------------

Target = Union[PermGroup, FamilyDescriptor, WreathDescriptor]


def certify(
    G: Target,
    mode: str = UNIFORM,
    d: int = 1,
    profile: Sequence[int] | None = None,
    engine: Engine | None = None,
    label: str | None = None,
    disc: int | None = None,
    cap: int = DEFAULT_CAP,
) -> ExponentCertificate:
    """Certified exponent for #F_k(X; G) in the requested mode.

    ``profile`` is the degree list of an independent invariant set for a faithful
    transitive action of G; it only ever adds a candidate.
    """
    if mode not in MODES:
        raise DomainError(f"unknown mode {mode!r}")
    eng = engine if engine is not None and engine.mode == mode and engine.d == d else Engine(mode, d, cap=cap, disc=disc)
    if isinstance(G, PermGroup):
        name = label or _label(G)
        if mode == NO_CFSG:
            cert = no_cfsg_exponent(G, cap)
            cert.group = name
            return cert
        if G.is_trivial():
            raise DomainError("the trivial group has no nontrivial extensions to count")
        order = G.order
        if mode == EXPLICIT:
            inv = _invariant_factors_of(G) if G.is_abelian() else None
            return _explicit_certificate(eng.explicit_candidates(order, name, inv), name, order, d)
        top = eng.node_for(G)
        if profile is not None:
            cand = TraceNode(
                "invariant-profile",
                "supplied independent invariant set",
                profile_a(list(profile), order) * RootExpr.inv_sqrt(order),
                False,
                {"profile": list(profile), "order": order, "gamma": 1},
                [],
                name,
            )
            top = _min_node([top, cand], name)
        return ExponentCertificate(name, order, mode, d, top.exponent, top.epsilon, top)
    if isinstance(G, WreathDescriptor):
        if mode == NO_CFSG:
            raise DomainError("descriptors have no group elements for the classification-free path")
        if mode == EXPLICIT:
            return _explicit_certificate(eng.explicit_candidates(G.order, str(G), None), str(G), G.order, d)
        top = eng.wreath_node(G)
        return ExponentCertificate(str(G), G.order, mode, d, top.exponent, top.epsilon, top)
    if isinstance(G, FamilyDescriptor):
        order = G.group_order
        if mode == NO_CFSG:
            raise DomainError("descriptors have no group elements for the classification-free path")
        if mode == EXPLICIT:
            return _explicit_certificate(eng.explicit_family_candidates(G), str(G), order, d)
        top = eng.family_node(G)
        return ExponentCertificate(str(G), order, mode, d, top.exponent, top.epsilon, top)
    raise DomainError(f"cannot certify {type(G).__name__}")


def _explicit_certificate(cands: list[tuple[TraceNode, ExplicitConstant]], name: str, order: int, d: int) -> ExponentCertificate:
    top = _min_node([c for c, _ in cands], name)
    const = cands[top.chosen][1]
    return ExponentCertificate(name, order, EXPLICIT, d, top.exponent, top.epsilon, top, const)
